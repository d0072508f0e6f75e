#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "sbvp/expr.hpp"
#include "sbvp/fracops.hpp"
#include "sbvp/greens.hpp"
#include "sbvp/numerics.hpp"

namespace sbvp {

// A singular BVP instance: forcing f(t,x), its majorant decomposition
// q(t)(u(x)+v(x)), the minorant family gamma_r, the bound R, and free
// parameters (lambda, ...). Expressions are held as ASTs plus compiled
// programs with the parameters frozen in.
struct ProblemSpec {
    FracOrder mu;
    expr::Ast f;        // over (t, x, params)
    expr::Ast q;        // over (t, params)
    expr::Ast u;        // over (x, params)
    expr::Ast v;        // over (x, params)
    expr::Ast gamma_r;  // over (r, params)
    double R = 1.0;
    expr::Env params;

    ProblemSpec(FracOrder mu_, expr::Ast f_, expr::Ast q_, expr::Ast u_,
                expr::Ast v_, expr::Ast gamma_r_, double R_, expr::Env params_);

    double eval_f(double t, double x) const {
        const double slots[2] = {t, x};
        return f_prog_(slots);
    }
    double eval_q(double t) const { return q_prog_(&t); }
    double eval_u(double x) const { return u_prog_(&x); }
    double eval_v(double x) const { return v_prog_(&x); }
    double eval_gamma(double r) const { return g_prog_(&r); }

    // Spot-checks (seeded): u nonincreasing / v nondecreasing on a log-spaced
    // probe grid, f(t,x) = f(-t,x) on random probes. Throws DomainError on
    // violation beyond 1e-12 relative slack.
    void spot_check_shape(std::uint64_t seed = 1) const;

private:
    expr::Program f_prog_, q_prog_, u_prog_, v_prog_, g_prog_;
};

struct HypothesisReport {
    bool a1_majorant_ok = false;
    double a1_worst_violation = 0.0;
    bool a1_integral_q_divergent = true;
    double a1_integral_q = 0.0;
    std::map<double, double> a1_integral_qu;  // c -> value
    bool a1_integral_qu_divergent = true;
    bool a2_floor_ok = false;       // f(t,x) >= gamma_R on probes
    double a2_floor_margin = 0.0;   // min f - gamma_R observed
    double chi_R = 0.0;             // paper's factor-2 envelope (verbatim)
    double chi_R_factor1 = 0.0;     // corrected factor-1 variant
    double gamma_R = 0.0;
    double min_R_bound = 0.0;       // 2 gamma_R / Gamma(mu+1)
    bool r_bound_ok = false;        // R > min_R_bound
    double a2_ratio = 0.0;          // R / (chi_R (1 + v(R)/u(R)))
    bool a2_ratio_ok = false;
    std::optional<double> epsilon;
    std::uint64_t seed = 0;
    std::string notes;

    bool a1_passed() const {
        return a1_majorant_ok && !a1_integral_q_divergent &&
               !a1_integral_qu_divergent;
    }
    bool a2_passed() const { return a2_floor_ok && r_bound_ok && a2_ratio_ok; }
    bool passed() const { return a1_passed() && a2_passed(); }
};

// (A1): majorant probe sweep plus finiteness of the weighted q and
// q*u(c(1-|t|^mu)) integrals for c in {0.1, 1, 10}. Divergence is a report
// flag, not an exception.
HypothesisReport check_A1(const ProblemSpec& p, const QuadratureScheme& scheme,
                          std::uint64_t seed = 1);

// chi_r: integral of (1-|t|)^(mu-1) q(t) u(k gamma_r (1-|t|^mu)/Gamma(mu+1)),
// with the paper's factor k = 2 verbatim, or the corrected k = 1.
double compute_chi(const ProblemSpec& p, double r, const QuadratureScheme& scheme,
                   bool paper_factor2 = true);

// (A2): fills the gamma/chi/ratio fields on top of an (A1) report.
void check_A2(const ProblemSpec& p, const QuadratureScheme& scheme,
              HypothesisReport& rep);

// Largest epsilon in (0, R - 2 gamma_R/Gamma(mu+1)] on a descending geometric
// scan of 64 candidates with
// (R-eps) / (chi_{R+eps} (1 + v(R+eps)/u(R+eps))) >= 1; nullopt if none pass.
std::optional<double> select_epsilon(const ProblemSpec& p,
                                     const QuadratureScheme& scheme);

// Residual of the original equation through the Caputo route (spec surface
// for the fracops core).
double bilateral_residual(const GridFn& x, const ProblemSpec& p,
                          const fracops::ResidualBand& band = {});

}  // namespace sbvp
