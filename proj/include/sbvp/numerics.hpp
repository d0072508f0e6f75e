#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sbvp {

// Gamma function for z > 0 (Lanczos rational approximation, reflection for
// z < 0.5). Relative error well under 1e-12 on (0, 30]. Throws DomainError
// for z <= 0.
double gamma_fn(double z);

struct Interval {
    double a;
    double b;
    Interval(double a_, double b_);  // requires a < b, both finite
    double length() const { return b - a; }
};

// Composite graded Gauss quadrature description. grading_exponent is the
// clustering strength sigma of the breakpoints a + (b-a)(k/n)^sigma toward
// each flagged singular endpoint.
struct QuadratureScheme {
    double grading_exponent = 3.0;  // >= 1
    int panels = 64;                // >= 1
    int nodes_per_panel = 8;        // in [2, 32]
    bool singular_left = false;
    bool singular_right = false;

    void validate() const;  // throws ConfigError
    QuadratureScheme with_panels(int n) const {
        QuadratureScheme s = *this;
        s.panels = n;
        return s;
    }
    QuadratureScheme with_flags(bool left, bool right) const {
        QuadratureScheme s = *this;
        s.singular_left = left;
        s.singular_right = right;
        return s;
    }
};

// Default grading exponent 3/(mu-1) capped at 10.
double default_grading(double mu);

// Gauss-Legendre rule on [-1,1]; cached per n (2..32).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

// Deterministic pairwise sum (recursive halving).
double pairwise_sum(std::span<const double> v);

// Breakpoints of one singular-end group, in distance-to-endpoint space,
// ascending, innermost boundary ~ tail_cut*len. Below breakpoints[0] lies the
// extrapolated sliver; the two innermost panels have exact ratio 2.
std::vector<double> singular_breakpoints(double len, int panels, double sigma);

struct IntegrateResult {
    double value = 0.0;
    double error_estimate = 0.0;
    // Fitted tail exponents at flagged ends (quiet NaN when not applicable).
    double tail_beta_left;
    double tail_beta_right;
    bool tail_divergent = false;
};

using Integrand = std::function<double(double)>;

// Composite rule over graded panels; deterministic summation order
// (blocked-4 inside panels, pairwise across panels). Flagged singular ends
// get a geometric ratio-2 refinement zone plus a power-law extrapolated
// sliver below the representability cut. Throws SingularSampleError on a
// non-finite sample; EvalDomainError from the integrand propagates.
IntegrateResult integrate_graded(const Integrand& f, Interval iv,
                                 const QuadratureScheme& scheme);

struct RefineResult {
    double value = 0.0;
    double last_delta = 0.0;
    int levels_used = 0;
    bool converged = false;
    bool divergent = false;  // tail exponent <= beta_min or no Cauchy stop
};

// Doubles panels until two successive estimates differ by < tol (absolute).
// Divergence is suspected when the fitted tail exponent at a flagged end
// indicates a non-integrable (or log) singularity, or when max_levels is
// exhausted without the Cauchy criterion.
RefineResult refine_to_tolerance(const Integrand& f, Interval iv,
                                 bool sing_left, bool sing_right, double tol,
                                 int max_levels,
                                 const QuadratureScheme& base = {});

namespace detail {
// Exposed for mesh reuse by kernel row plans.
constexpr double kTailCut = 1e-11;     // relative distance floor
constexpr double kTailBetaMin = 0.02;  // divergence threshold for fitted beta
}  // namespace detail

}  // namespace sbvp
