#include "sbvp/greens.hpp"

#include <algorithm>
#include <cmath>

#include "sbvp/errors.hpp"
#include "sbvp/kern.hpp"

namespace sbvp {

FracOrder::FracOrder(double m) : mu(m) {
    if (!(m > 1.0) || !(m <= 2.0))
        throw DomainError("FracOrder: mu must lie in (1,2]");
}

namespace {

// kernel on the nonnegative quadrant 0 <= t,tau <= 1 (without 1/Gamma(mu))
inline double green_core(double t, double tau, double mu) {
    double v;
    if (tau <= t)
        v = std::pow(1.0 - tau, mu - 1.0) - std::pow(t - tau, mu - 1.0);
    else
        v = std::pow(1.0 - tau, mu - 1.0);
    return v > 0.0 ? v : 0.0;  // clip rounding residue at the zero set
}

}  // namespace

double green_eval(double t, double tau, FracOrder mu, QuadrantPolicy policy) {
    if (!(t >= -1.0 && t <= 1.0 && tau >= -1.0 && tau <= 1.0))
        throw DomainError("green_eval: arguments must lie in [-1,1]");
    if (t <= 0.0 && tau <= 0.0) {
        t = -t;
        tau = -tau;
    } else if (!(t >= 0.0 && tau >= 0.0)) {
        if (policy == QuadrantPolicy::paper_literal)
            throw DomainError(
                "green_eval: kernel undefined for mixed-sign (t,tau) under the "
                "paper-literal policy");
        return 0.0;
    }
    return green_core(t, tau, mu.mu) / gamma_fn(mu.mu);
}

double green_row_closed(double t, FracOrder mu) {
    return (1.0 - std::pow(std::fabs(t), mu.mu)) / gamma_fn(mu.mu + 1.0);
}

double green_row_closed_paper(double t, FracOrder mu) {
    return 2.0 * green_row_closed(t, mu);
}

double green_row_integral(double t, FracOrder mu, const QuadratureScheme& scheme) {
    const double a = std::fabs(t);  // row integrals are even in t
    auto f = [&](double tau) {
        return green_eval(a, tau, mu, QuadrantPolicy::zero_extension);
    };
    double total = 0.0;
    if (a > 0.0) {
        // [0,a]: the -(t-tau)^(mu-1) term has unbounded slope at tau = a
        auto r = integrate_graded(f, Interval(0.0, a),
                                  scheme.with_flags(false, true));
        total += r.value;
    }
    if (a < 1.0) {
        auto r = integrate_graded(f, Interval(a, 1.0),
                                  scheme.with_flags(false, true));
        total += r.value;
    }
    return total;
}

RowQuadrature build_row_quadrature(const std::vector<double>& half_nodes,
                                   FracOrder mu, const QuadratureScheme& scheme) {
    scheme.validate();
    const double inv_gamma = 1.0 / gamma_fn(mu.mu);
    const GaussRule& rule = gauss_legendre(scheme.nodes_per_panel);
    const int npan = scheme.panels;
    const double sigma = scheme.grading_exponent;

    RowQuadrature rq;
    rq.half_nodes = half_nodes;
    rq.nodes.resize(half_nodes.size());
    rq.weights.resize(half_nodes.size());

    for (std::size_t i = 0; i < half_nodes.size(); ++i) {
        const double t = half_nodes[i];
        auto& ns = rq.nodes[i];
        auto& ws = rq.weights[i];
        if (t >= 1.0) continue;  // boundary row: x(1) = 0

        auto add_group = [&](double a, double b, bool to_right) {
            // panels graded toward the group's singular end (s-space mesh)
            auto bp = singular_breakpoints(b - a, npan, sigma);
            const double end = to_right ? b : a;
            const double sgn = to_right ? -1.0 : 1.0;
            for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
                double t0 = end + sgn * bp[p + 1];
                double t1 = end + sgn * bp[p];
                if (!to_right) std::swap(t0, t1);
                const double c = 0.5 * (t0 + t1), h = 0.5 * (t1 - t0);
                for (int j = 0; j < scheme.nodes_per_panel; ++j) {
                    double tau = c + h * rule.nodes[j];
                    double g = green_core(t, tau, mu.mu) * inv_gamma;
                    ns.push_back(tau);
                    ws.push_back(h * rule.weights[j] * g);
                }
            }
        };

        if (t > 0.0) add_group(0.0, t, true);  // kink at tau = t
        add_group(t, 1.0, true);               // kernel/forcing end at tau = 1
    }
    return rq;
}

GridFn solve_linear(const GridFn& y, FracOrder mu, const QuadratureScheme& scheme) {
    y.validate();
    if (!y.symmetric)
        throw DomainError("solve_linear: forcing must be flagged symmetric");

    // integrability pre-check on (1-|t|)^(mu-1) |y|
    auto weighted = [&](double t) {
        return std::pow(1.0 - std::fabs(t), mu.mu - 1.0) *
               std::fabs(interp_local(y.nodes, y.values, t));
    };
    QuadratureScheme pre = scheme;
    pre.panels = std::max(8, scheme.panels / 4);
    auto chk = refine_to_tolerance(weighted, Interval(-1.0, 1.0), true, true,
                                   1e-6, 8, pre);
    if (chk.divergent)
        throw IllPosedDataError(
            "solve_linear: (1-|t|)^(mu-1)-weighted forcing integral looks "
            "divergent");

    const std::size_t n = y.size();
    const std::size_t c = y.center_index();
    std::vector<double> half(y.nodes.begin() + c, y.nodes.end());
    RowQuadrature rq = build_row_quadrature(half, mu, scheme);

    std::vector<double> out(n, 0.0);
    std::vector<double> samples;
    for (std::size_t i = 0; i < half.size(); ++i) {
        const auto& ns = rq.nodes[i];
        const auto& ws = rq.weights[i];
        samples.resize(ns.size());
        for (std::size_t j = 0; j < ns.size(); ++j)
            samples[j] = interp_local(y.nodes, y.values, ns[j]);
        double v = kern::dot(ws.data(), samples.data(), ns.size());
        out[c + i] = v;
        out[c - i] = v;  // mirror: output symmetric by construction
    }
    out.front() = 0.0;
    out.back() = 0.0;
    GridFn x{y.nodes, std::move(out), true};
    x.validate();
    return x;
}

}  // namespace sbvp
