#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbvp/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "sbvp: symmetric positive solutions of bilateral Caputo fractional "
        "singular boundary value problems"};
    app.require_subcommand(1);

    sbvp::cli::RunConfig cfg;
    std::string format = "text";

    auto add_common = [&](CLI::App* sub, bool with_problem) {
        if (with_problem)
            sub->add_option("problem", cfg.problem_path, "problem file")
                ->required();
        sub->add_option("--grid", cfg.grid_n, "symmetric grid size (odd)");
        sub->add_option("--tol-fp", cfg.tol_fp, "fixed-point defect tolerance");
        sub->add_option("--tol-seq", cfg.tol_seq, "stage Cauchy tolerance");
        sub->add_option("--damping", cfg.damping, "initial damping in (0,1]");
        sub->add_option("--m0", cfg.m0, "first regularization index m");
        sub->add_option("--stages", cfg.stages, "maximum m stages");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--seed", cfg.seed, "probe seed");
        sub->add_option("--format", format, "report format: text|structured")
            ->check(CLI::IsMember({"text", "structured"}));
    };

    auto* check = app.add_subcommand("check", "run the hypothesis checks");
    add_common(check, true);
    auto* solve =
        app.add_subcommand("solve", "solve and write solution.csv + report");
    add_common(solve, true);

    std::vector<double> mus{1.1, 1.5, 1.9, 2.0};
    auto* vg = app.add_subcommand("verify-green", "kernel property suite");
    vg->add_option("--mu", mus, "orders to test, each in (1,2]");

    app.add_subcommand("frac-verify", "fractional operator identity suite");

    auto* rex = app.add_subcommand("reproduce-example",
                                   "reproduce the worked example's constants");
    add_common(rex, false);

    CLI11_PARSE(app, argc, argv);
    cfg.format = format == "structured" ? sbvp::cli::ReportFormat::structured
                                        : sbvp::cli::ReportFormat::text;

    try {
        if (app.got_subcommand("check")) return sbvp::cli::cmd_check(cfg, std::cout);
        if (app.got_subcommand("solve")) return sbvp::cli::cmd_solve(cfg, std::cout);
        if (app.got_subcommand("verify-green"))
            return sbvp::cli::cmd_verify_green(mus, std::cout);
        if (app.got_subcommand("frac-verify"))
            return sbvp::cli::cmd_frac_verify(std::cout);
        if (app.got_subcommand("reproduce-example"))
            return sbvp::cli::cmd_reproduce_example(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
