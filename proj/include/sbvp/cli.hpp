#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbvp/solver.hpp"

// Command implementations behind the `sbvp` binary. Exit codes: 0 ok,
// 1 hypothesis failure, 2 input error, 3 solver non-convergence.
namespace sbvp::cli {

enum class ReportFormat { text, structured };

struct RunConfig {
    std::string problem_path;
    std::string out_dir = ".";
    ReportFormat format = ReportFormat::text;
    std::uint64_t seed = 1;
    // solver overrides; unset fields keep SolverConfig defaults
    std::optional<int> grid_n;
    std::optional<double> tol_fp;
    std::optional<double> tol_seq;
    std::optional<double> damping;
    std::optional<std::int64_t> m0;
    std::optional<int> stages;

    SolverConfig solver_config() const;
};

int cmd_check(const RunConfig& cfg, std::ostream& out);
int cmd_solve(const RunConfig& cfg, std::ostream& out);
int cmd_verify_green(const std::vector<double>& mus, std::ostream& out);
int cmd_frac_verify(std::ostream& out);
int cmd_reproduce_example(const RunConfig& cfg, std::ostream& out);

// solution.csv payload: t, x, envelope_lo_factor1, envelope_lo_paper,
// envelope_hi; shortest-round-trip number formatting, dot decimal separator,
// byte-stable across runs.
std::string solution_csv(const SolutionReport& rep, const ProblemSpec& p);

std::string render_hypothesis_text(const HypothesisReport& rep);
std::string render_hypothesis_json(const HypothesisReport& rep);
std::string render_solution_text(const SolutionReport& rep);
std::string render_solution_json(const SolutionReport& rep);

}  // namespace sbvp::cli
