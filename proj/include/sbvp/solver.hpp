#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbvp/model.hpp"

namespace sbvp {

struct SolverConfig {
    int grid_n = 401;           // symmetric node count, odd so 0 is a node
    double tol_fp = 1e-10;      // sup-norm fixed-point defect per stage
    double omega = 0.5;         // initial damping, adaptive in (0,1]
    int max_picard = 500;       // per-stage iteration cap
    std::int64_t m0 = 0;        // 0: auto ceil(1/eps)+1
    double m_factor = 2.0;      // stage growth of m
    int max_stages = 8;
    double tol_seq = 1e-8;      // sup-norm Cauchy threshold across stages
    QuadratureScheme row_scheme{3.0, 32, 8, false, false};
    std::uint64_t seed = 1;     // hypothesis probe seed
    bool skip_hypotheses = false;

    void validate() const;  // throws ConfigError
};

// min{max{xval + 1/m, 1/m}, R}; requires R > 1/m.
double clamp_m(double xval, std::int64_t m, double R);

// One application of the clamped integral operator on the half profile
// (index 0 is t=0, last is t=1; output endpoints are exactly 0).
std::vector<double> apply_T(const std::vector<double>& x_half, std::int64_t m,
                            const ProblemSpec& p, const RowQuadrature& rows);

struct FixedPointResult {
    bool converged = false;
    std::vector<double> x;
    int iterations = 0;
    double defect = 0.0;
    std::vector<double> defect_history;
    double omega_final = 0.0;
    bool anderson_engaged = false;
};

// Damped Picard iteration on T_m with adaptive omega (halved on defect
// growth, doubled after sustained decrease) and two-term Anderson
// extrapolation engaged after 50 non-contracting steps.
FixedPointResult fixed_point_m(std::int64_t m, const ProblemSpec& p,
                               const SolverConfig& cfg,
                               const std::vector<double>& x0,
                               const RowQuadrature& rows);

struct StageInfo {
    std::int64_t m = 0;
    int iterations = 0;
    double defect = 0.0;
    double sup_diff_prev = 0.0;  // NaN for the first stage
    bool converged = false;
};

struct SolutionReport {
    GridFn x;
    bool converged = false;
    bool hypotheses_ok = false;
    bool hypotheses_checked = false;
    HypothesisReport hypothesis;
    double epsilon = 0.0;
    bool epsilon_verified = false;
    double gamma_R = 0.0;
    std::vector<StageInfo> stages;
    std::int64_t m_final = 0;
    double fp_defect = 0.0;
    double symmetry_defect = 0.0;
    double positivity_margin = 0.0;       // min interior x
    double envelope_lo_margin = 0.0;      // min x - gamma_R row1 (factor 1)
    double envelope_lo_paper_margin = 0.0;  // informational factor-2 margin
    double envelope_hi_margin = 0.0;      // (R - eps) - max x
    double integral_residual = 0.0;       // vs the unclamped f, same rows
    double caputo_residual = 0.0;         // independent Caputo route
    fracops::ResidualBand caputo_band;
    std::string status_note;

    bool envelope_lo_ok() const { return envelope_lo_margin >= -1e-12; }
    bool envelope_hi_ok() const { return envelope_hi_margin >= -1e-12; }
};

// Full regularized solve: hypothesis checks, epsilon selection, the
// m-schedule with warm starts, and all diagnostics.
SolutionReport solve(const ProblemSpec& p, const SolverConfig& cfg);

// Envelope columns used in solution.csv.
double envelope_lo_factor1(double t, const ProblemSpec& p, double gamma_R);
double envelope_lo_paper(double t, const ProblemSpec& p, double gamma_R);

}  // namespace sbvp
