#include "sbvp/fracops.hpp"

#include <algorithm>
#include <cmath>

#include "sbvp/errors.hpp"

namespace sbvp::fracops {

namespace {

SampledFn mirror(const SampledFn& x) {
    SampledFn m;
    m.smoothness_hint = x.smoothness_hint;
    m.nodes.reserve(x.nodes.size());
    m.values.reserve(x.values.size());
    for (std::size_t i = x.nodes.size(); i-- > 0;) {
        m.nodes.push_back(-x.nodes[i]);
        m.values.push_back(x.values[i]);
    }
    return m;
}

QuadratureScheme frac_scheme() {
    QuadratureScheme s;
    s.grading_exponent = 10.0;
    s.panels = 64;
    return s;
}

}  // namespace

double rl_int_left(const SampledFn& x, double mu, double t) {
    x.validate();
    if (!(mu > 0.0)) throw DomainError("rl_int_left: mu must be positive");
    if (t < x.front() || t > x.back() || t < 0.0)
        throw DomainError("rl_int_left: t outside the sampled range");
    if (t == 0.0) return 0.0;
    auto f = [&](double tau) {
        return std::pow(t - tau, mu - 1.0) * interp_local(x.nodes, x.values, tau);
    };
    // kernel end at tau = t; grade toward tau = 0 as well, sampled data is
    // often endpoint-algebraic there (tau^mu-type layers)
    auto r = integrate_graded(f, Interval(0.0, t),
                              frac_scheme().with_flags(true, true));
    return r.value / gamma_fn(mu);
}

double rl_int_right(const SampledFn& x, double mu, double t) {
    if (t > 0.0) throw DomainError("rl_int_right: t must be <= 0");
    return rl_int_left(mirror(x), mu, -t);
}

double caputo_left(const SampledFn& x, FracOrder mu, double t) {
    x.validate();
    if (x.smoothness_hint < 2)
        throw DomainError(
            "caputo_left: smoothness hint < 2, derivative evaluation refused");
    if (!(t > 0.0 && t < 1.0) || t <= x.front() || t >= x.back())
        throw DomainError("caputo_left: t must be interior to the sampled range");
    if (mu.mu == 2.0) return d2_local(x.nodes, x.values, t);
    auto f = [&](double tau) {
        return d2_local(x.nodes, x.values, tau) * std::pow(t - tau, 1.0 - mu.mu);
    };
    // kernel singularity at tau = t, possible x'' blow-up toward tau = 0
    auto r = integrate_graded(f, Interval(0.0, t),
                              frac_scheme().with_flags(true, true));
    return r.value / gamma_fn(2.0 - mu.mu);
}

double caputo_right(const SampledFn& x, FracOrder mu, double t) {
    if (!(t < 0.0)) throw DomainError("caputo_right: t must be negative");
    return caputo_left(mirror(x), mu, -t);
}

SolutionFormReport verify_solution_form(FracOrder mu, const SampledFn& y,
                                        double a1, double a2, double b1,
                                        double b2) {
    y.validate();
    // integrability pre-check of the forcing
    auto w = [&](double tau) {
        return std::pow(1.0 - tau, mu.mu - 1.0) *
               std::fabs(interp_local(y.nodes, y.values, tau));
    };
    auto chk = refine_to_tolerance(w, Interval(0.0, 1.0), false, true, 1e-6, 8,
                                   frac_scheme());
    if (chk.divergent)
        throw IllPosedDataError("verify_solution_form: forcing not integrable");

    // sample the composed solution on a uniform half-grid
    const int n = 401;
    SampledFn xl;  // left-sided form on [0,1]
    xl.smoothness_hint = 2;
    for (int i = 0; i < n; ++i) {
        double s = double(i) / (n - 1);
        xl.nodes.push_back(s);
        xl.values.push_back(b1 + b2 * s - rl_int_left(y, mu.mu, s));
    }
    SampledFn ym = mirror(y);
    SampledFn xr;  // right-sided form on [-1,0]
    xr.smoothness_hint = 2;
    for (int i = 0; i < n; ++i) {
        double s = -xl.nodes[n - 1 - i];
        xr.nodes.push_back(s);
        xr.values.push_back(a1 + a2 * s - rl_int_right(ym, mu.mu, s));
    }

    SolutionFormReport rep;
    for (int k = 1; k < 20; ++k) {
        double t = 0.05 * k;
        if (t <= 0.0 || t >= 1.0) continue;
        double yl = interp_local(y.nodes, y.values, t);
        double dl = caputo_left(xl, mu, t);
        rep.sup_residual_left = std::max(rep.sup_residual_left, std::fabs(dl + yl));
        double dr = caputo_right(xr, mu, -t);
        rep.sup_residual_right =
            std::max(rep.sup_residual_right, std::fabs(dr + yl));
        ++rep.points;
    }
    return rep;
}

double bilateral_residual(const GridFn& x, FracOrder mu,
                          const std::function<double(double, double)>& f,
                          const ResidualBand& band) {
    x.validate();
    if (!x.symmetric)
        throw DomainError("bilateral_residual: x must be flagged symmetric");
    const std::size_t c = x.center_index();
    for (std::size_t i = 1; i + 1 < x.size(); ++i)
        if (!(x.values[i] > 0.0))
            throw DomainError(
                "bilateral_residual: x must be positive on interior nodes");

    SampledFn right;
    right.smoothness_hint = 2;
    right.nodes.assign(x.nodes.begin() + c, x.nodes.end());
    right.values.assign(x.values.begin() + c, x.values.end());
    SampledFn left;
    left.smoothness_hint = 2;
    left.nodes.assign(x.nodes.begin(), x.nodes.begin() + c + 1);
    left.values.assign(x.values.begin(), x.values.begin() + c + 1);

    double sup = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double t = x.nodes[i];
        double at = std::fabs(t);
        if (at < band.center || at > band.endpoint) continue;
        double d = (t > 0.0) ? caputo_left(right, mu, t)
                             : caputo_right(left, mu, t);
        sup = std::max(sup, std::fabs(d + f(t, x.values[i])));
    }
    return sup;
}

}  // namespace sbvp::fracops
