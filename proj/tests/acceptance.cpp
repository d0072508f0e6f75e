// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sbvp/cli.hpp"
#include "sbvp/errors.hpp"
#include "sbvp/expr.hpp"
#include "sbvp/fracops.hpp"
#include "sbvp/problem_io.hpp"
#include "sbvp/solver.hpp"

using namespace sbvp;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void report(int n, const std::string& what, bool ok, const std::string& detail,
            double secs, double budget) {
    bool in_budget = secs < budget;
    if (!ok || !in_budget) ++g_failures;
    std::printf("[%s] criterion %d: %s — %s (%.2fs%s)\n",
                ok && in_budget ? "PASS" : "FAIL", n, what.c_str(),
                detail.c_str(), secs,
                in_budget ? "" : ", over budget");
}

bool close_rel(double got, double want, double tol, std::string& detail,
               const char* label) {
    double rel = std::fabs(got - want) / std::fabs(want);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.6g (rel %.1e vs tol %.0e); ", label,
                  got, rel, tol);
    detail += buf;
    return rel <= tol;
}

QuadratureScheme hyp_scheme() {
    QuadratureScheme s;
    s.grading_exponent = 10.0;
    s.panels = 64;
    return s;
}

void criterion1() {
    Timer tm;
    bool ok = true;
    std::string d;
    ProblemSpec p1 = example_problem(1.0);
    auto scheme = hyp_scheme();
    auto a1 = check_A1(p1, scheme, 1);
    ok &= !a1.a1_integral_q_divergent;
    ok &= close_rel(a1.a1_integral_q, 2.12926, 1e-4, d, "q-integral");
    ok &= close_rel(a1.a1_integral_qu.at(1.0), 12.8761, 1e-3, d, "qu-integral");
    double chi1 = compute_chi(p1, 1.0, scheme, true);
    ok &= close_rel(chi1, 11.8713, 1e-3, d, "chi_1");
    ok &= close_rel(gamma_fn(2.9) / 2.0, 0.913678, 1e-6, d, "Gamma(2.9)/2");
    ok &= close_rel(std::pow(11.8713, 10.0), 5.55871e10, 1e-3, d, "11.8713^10");
    ok &= close_rel(std::pow(chi1, 10.0), 5.55871e10, 1e-3, d, "chi_1^10");
    report(1, "worked-example constants", ok, d, tm.seconds(), 60.0);
}

void criterion2() {
    Timer tm;
    std::ostringstream sink;
    bool ok = cli::cmd_verify_green({1.1, 1.5, 1.9, 2.0}, sink) == 0;
    std::string d =
        "nonnegativity, exact (t,tau)->(-t,-tau) symmetry, majorant bound, "
        "row integrals vs (1-|t|^mu)/Gamma(mu+1) at 1e-8, factor-2 ratio 0.5";
    report(2, "kernel property suite, mu in {1.1,1.5,1.9,2.0}", ok, d,
           tm.seconds(), 10.0);
}

void criterion3() {
    Timer tm;
    bool ok = true;
    std::string d;
    {
        FracOrder mu(2.0);
        QuadratureScheme s;
        s.grading_exponent = default_grading(2.0);
        auto nodes = uniform_symmetric_nodes(201);
        GridFn y = make_grid_fn(nodes, std::vector<double>(201, 1.0), true);
        GridFn x = solve_linear(y, mu, s);
        double sup = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            sup = std::max(sup, std::fabs(x.values[i] -
                                          0.5 * (1.0 - nodes[i] * nodes[i])));
        char buf[96];
        std::snprintf(buf, sizeof buf, "mu=2 classical sup-err %.2e; ", sup);
        d += buf;
        ok &= sup < 1e-8;
    }
    for (double m : {1.1, 1.5, 1.9, 2.0}) {
        FracOrder mu(m);
        QuadratureScheme s;
        s.grading_exponent = default_grading(m);
        auto nodes = uniform_symmetric_nodes(201);
        GridFn y = make_grid_fn(nodes,
                                std::vector<double>(201, gamma_fn(m + 1.0)), true);
        GridFn x = solve_linear(y, mu, s);
        double sup = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            sup = std::max(
                sup, std::fabs(x.values[i] -
                               (1.0 - std::pow(std::fabs(nodes[i]), m))));
        char buf[96];
        std::snprintf(buf, sizeof buf, "mu=%g manufactured sup-err %.2e; ", m, sup);
        d += buf;
        ok &= sup < 1e-8;
    }
    report(3, "linear integral-representation oracles", ok, d, tm.seconds(), 5.0);
}

void criterion4() {
    Timer tm;
    bool ok = true;
    std::string d;

    SampledFn aff;
    aff.smoothness_hint = 2;
    for (int i = 0; i <= 64; ++i) {
        aff.nodes.push_back(double(i) / 64.0);
        aff.values.push_back(3.0 + 2.0 * (double(i) / 64.0));
    }
    double worst_aff = 0.0;
    for (double t : {0.25, 0.5, 0.75})
        for (double m : {1.1, 1.5, 1.9, 2.0})
            worst_aff = std::max(
                worst_aff, std::fabs(fracops::caputo_left(aff, FracOrder(m), t)));
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "caputo(affine) max %.1e; ", worst_aff);
        d += buf;
        ok &= worst_aff <= 1e-12;
    }

    SampledFn sq;
    sq.smoothness_hint = 2;
    for (int i = 0; i <= 200; ++i) {
        double t = double(i) / 200.0;
        sq.nodes.push_back(t);
        sq.values.push_back(t * t);
    }
    double worst_sq = 0.0;
    for (int k = 1; k <= 9; ++k) {
        double t = 0.1 * k;
        double exact = 2.0 * std::pow(t, 0.1) / gamma_fn(1.1);
        worst_sq = std::max(worst_sq,
                            std::fabs(fracops::caputo_left(sq, FracOrder(1.9), t) -
                                      exact) /
                                exact);
    }
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "D^mu t^2 rel %.1e; ", worst_sq);
        d += buf;
        ok &= worst_sq <= 1e-3;
    }

    SampledFn sqn;
    sqn.smoothness_hint = 2;
    for (int i = 0; i <= 200; ++i) {
        double t = -1.0 + double(i) / 200.0;
        sqn.nodes.push_back(t);
        sqn.values.push_back(t * t);
    }
    double worst_mirror = 0.0;
    for (double t : {0.2, 0.5, 0.8})
        worst_mirror = std::max(
            worst_mirror,
            std::fabs(fracops::caputo_right(sqn, FracOrder(1.9), -t) -
                      fracops::caputo_left(sq, FracOrder(1.9), t)));
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "mirror gap %.1e; ", worst_mirror);
        d += buf;
        ok &= worst_mirror <= 1e-10;
    }

    FracOrder mu(1.9);
    auto nodes = clustered_symmetric_nodes(401);
    std::vector<double> yv(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        yv[i] = 1.0 + 0.5 * std::cos(M_PI * nodes[i]);
    GridFn y = make_grid_fn(nodes, yv, true);
    QuadratureScheme s;
    s.grading_exponent = default_grading(1.9);
    GridFn x = solve_linear(y, mu, s);
    double rt = fracops::bilateral_residual(
        x, mu, [](double t, double) { return 1.0 + 0.5 * std::cos(M_PI * t); });
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "round-trip residual %.1e; ", rt);
        d += buf;
        ok &= rt <= 1e-3;
    }
    report(4, "fractional-operator identities", ok, d, tm.seconds(), 10.0);
}

SolverConfig example_cfg() {
    SolverConfig cfg;
    cfg.grid_n = 401;
    cfg.m0 = std::int64_t(1) << 31;
    cfg.m_factor = 2.0;
    cfg.max_stages = 4;
    cfg.tol_seq = 1e-15;  // run the full deep-m schedule
    return cfg;
}

void criterion5(std::string* csv_out) {
    Timer tm;
    bool ok = true;
    std::string d;
    ProblemSpec p = example_problem(1e-16);
    SolverConfig cfg = example_cfg();
    SolutionReport rep = solve(p, cfg);
    char buf[256];

    ok &= rep.converged && rep.fp_defect <= 1e-10;
    std::snprintf(buf, sizeof buf, "converged=%d defect=%.2e; ",
                  int(rep.converged), rep.fp_defect);
    d += buf;

    ok &= rep.symmetry_defect == 0.0;
    std::snprintf(buf, sizeof buf, "symmetry=%.1e; ", rep.symmetry_defect);
    d += buf;

    // x >= gamma_R (1-|t|^mu)/Gamma(mu+1) - 1e-12 with gamma_R = lambda
    ok &= rep.envelope_lo_margin >= -1e-12;
    std::snprintf(buf, sizeof buf, "lo-envelope margin=%.2e; ",
                  rep.envelope_lo_margin);
    d += buf;

    ok &= rep.envelope_hi_margin >= 0.0;
    std::snprintf(buf, sizeof buf, "x<=R-eps margin=%.3f; ",
                  rep.envelope_hi_margin);
    d += buf;

    ok &= rep.integral_residual <= 1e-8;
    std::snprintf(buf, sizeof buf, "integral residual=%.2e; ",
                  rep.integral_residual);
    d += buf;

    bool monotone = rep.stages.size() >= 3;
    for (std::size_t k = 2; k < rep.stages.size(); ++k)
        monotone &= rep.stages[k].sup_diff_prev <= rep.stages[k - 1].sup_diff_prev;
    ok &= monotone;
    d += "stage diffs";
    for (std::size_t k = 1; k < rep.stages.size(); ++k) {
        std::snprintf(buf, sizeof buf, " %.2e", rep.stages[k].sup_diff_prev);
        d += buf;
    }
    d += monotone ? " (decreasing)" : " (NOT decreasing)";

    *csv_out = cli::solution_csv(rep, p);
    report(5, "nonlinear example solve (mu=1.9, R=1, lambda=1e-16, grid 401)", ok,
           d, tm.seconds(), 60.0);
}

void criterion6() {
    Timer tm;
    bool ok = true;
    std::string d;
    auto scheme = hyp_scheme();
    for (double lam : {1e-16, 1e-12}) {
        ProblemSpec p = example_problem(lam);
        auto rep = check_A1(p, scheme, 1);
        check_A2(p, scheme, rep);
        double printed = 1.0 / (11.8713 * 3.0 * std::pow(lam, 0.1));
        char label[32];
        std::snprintf(label, sizeof label, "ratio(lam=%.0e)", lam);
        ok &= close_rel(rep.a2_ratio, printed, 1e-3, d, label);
        if (lam == 1e-16)
            ok &= rep.passed() && rep.a2_ratio > 1.0;
        else
            ok &= !rep.passed() && rep.a2_ratio < 1.0;
    }
    d += "gate passes at 1e-16, fails at 1e-12";
    report(6, "hypothesis gate matches the printed ratio formula", ok, d,
           tm.seconds(), 60.0);
}

void criterion7() {
    Timer tm;
    bool ok = true;
    std::string d;
    using namespace sbvp::expr;

    struct Fixture {
        const char* src;
        double want;
    };
    const Fixture fixtures[] = {
        {"2+3*4^0.5", 8.0},   {"-2^2", -4.0},       {"2^3^2", 512.0},
        {"8-4-2", 2.0},       {"8/4/2", 1.0},       {"2^-2", 0.25},
        {"min(1,2)+max(3,4)", 5.0}, {"abs(-2.5)", 2.5},
    };
    int fixture_fails = 0;
    for (const auto& f : fixtures) {
        Env env;
        if (std::fabs(eval(parse(f.src), env) - f.want) > 1e-12) ++fixture_fails;
    }
    ok &= fixture_fails == 0;

    static const char* pieces[] = {"1",   "2.5", "t",   "x",   "+",   "-",
                                   "*",   "/",   "^",   "(",   ")",   ",",
                                   "min", "max", "abs", "exp", "log", "9"};
    std::mt19937_64 rng(777);
    int parsed = 0, crashes = 0, roundtrip_fails = 0;
    for (int iter = 0; iter < 5000; ++iter) {
        std::string src;
        int len = 1 + int(rng() % 20);
        for (int i = 0; i < len; ++i)
            src += pieces[rng() % (sizeof(pieces) / sizeof(pieces[0]))];
        try {
            Ast a = parse(src);
            ++parsed;
            if (!structurally_equal(a, parse(print(a)))) ++roundtrip_fails;
        } catch (const ParseError&) {
        } catch (...) {
            ++crashes;
        }
    }
    ok &= crashes == 0 && roundtrip_fails == 0 && parsed > 100;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d fixtures, fuzz: %d parsed / %d crashes / %d round-trip "
                  "failures over 5000 inputs",
                  int(sizeof(fixtures) / sizeof(fixtures[0])), parsed, crashes,
                  roundtrip_fails);
    d += buf;
    report(7, "expression parser suite", ok, d, tm.seconds(), 60.0);
}

void criterion8(const std::string& first_csv) {
    Timer tm;
    ProblemSpec p = example_problem(1e-16);
    SolutionReport rep = solve(p, example_cfg());
    std::string second_csv = cli::solution_csv(rep, p);
    bool ok = !first_csv.empty() && first_csv == second_csv;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu bytes, byte-identical=%s",
                  first_csv.size(), ok ? "yes" : "NO");
    report(8, "determinism: criterion-5 rerun produces identical CSV", ok, buf,
           tm.seconds(), 60.0);
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    std::string csv;
    criterion5(&csv);
    criterion6();
    criterion7();
    criterion8(csv);
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
