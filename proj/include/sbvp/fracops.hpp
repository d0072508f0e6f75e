#pragma once

#include <functional>

#include "sbvp/greens.hpp"
#include "sbvp/grid.hpp"
#include "sbvp/numerics.hpp"

// Bilateral Riemann-Liouville integrals and Caputo derivatives on sampled
// functions. These are the verification side of the artifact: they check
// solver outputs by residual through a route independent of the kernel
// quadrature. Caputo derivatives are evaluated L2-style: local quintic-window
// second derivatives, then graded quadrature against the power kernel.
namespace sbvp::fracops {

using sbvp::FracOrder;
using sbvp::GridFn;
using sbvp::SampledFn;

// (1/Gamma(mu)) int_0^t (t-tau)^(mu-1) x(tau) dtau for x sampled on [0,1].
double rl_int_left(const SampledFn& x, double mu, double t);

// Mirror of rl_int_left under t -> -t, for x sampled on [-1,0], t <= 0.
double rl_int_right(const SampledFn& x, double mu, double t);

// Caputo left derivative of order mu in (1,2] at interior t in (0,1).
// Requires smoothness_hint >= 2 (refused otherwise, never faked).
double caputo_left(const SampledFn& x, FracOrder mu, double t);

// Caputo right derivative at interior t in (-1,0) for x sampled on [-1,0].
double caputo_right(const SampledFn& x, FracOrder mu, double t);

struct SolutionFormReport {
    double sup_residual_right = 0.0;  // right-sided form on [-1,0]
    double sup_residual_left = 0.0;   // left-sided form on [0,1]
    int points = 0;
};

// Composes x = a1 + a2 t - I^mu y (right half) and x = b1 + b2 t - I^mu y
// (left half) from forcing y sampled on [0,1] (mirrored onto [-1,0]), then
// reports sup |D^mu x + y| over interior evaluation nodes.
SolutionFormReport verify_solution_form(FracOrder mu, const SampledFn& y,
                                        double a1, double a2, double b1,
                                        double b2);

struct ResidualBand {
    double endpoint = 0.95;  // keep |t| <= endpoint
    double center = 0.05;    // keep |t| >= center (x'' ~ |t|^(mu-2) there)
};

// sup over kept grid nodes of |D^mu x(t) + f(t, x(t))|, caputo_right on the
// negative half and caputo_left on the positive half. Requires x > 0 on
// interior nodes (f is singular at x = 0).
double bilateral_residual(const GridFn& x, FracOrder mu,
                          const std::function<double(double, double)>& f,
                          const ResidualBand& band = {});

}  // namespace sbvp::fracops
