#pragma once

#include <vector>

#include "sbvp/grid.hpp"
#include "sbvp/numerics.hpp"

namespace sbvp {

// Fractional order mu in (1, 2].
struct FracOrder {
    double mu;
    explicit FracOrder(double m);  // throws DomainError outside (1,2]
};

// The four printed kernel branches cover only sign-matched (t,tau). The
// zero-extension policy returns 0 on the mixed-sign quadrants (the value the
// half-interval construction forces); paper_literal refuses them instead.
enum class QuadrantPolicy { zero_extension, paper_literal };

// Piecewise kernel of the linear bilateral problem. Nonnegative; evaluates
// sign-mirrored arguments through the same code path, so
// green_eval(t,tau) == green_eval(-t,-tau) holds bit-exactly.
double green_eval(double t, double tau, FracOrder mu,
                  QuadrantPolicy policy = QuadrantPolicy::zero_extension);

// Closed-form row integrals of tau -> G(t,tau) over [-1,1].
double green_row_closed(double t, FracOrder mu);        // (1-|t|^mu)/Gamma(mu+1)
double green_row_closed_paper(double t, FracOrder mu);  // printed factor-2 form

// Quadrature of the kernel row under zero-extension, with the interior kink
// at tau = t as a mandatory panel breakpoint.
double green_row_integral(double t, FracOrder mu, const QuadratureScheme& scheme);

// Fused quadrature rows for the half-interval [0,1]: for each target node
// t_i >= 0, x(t_i) = sum_j weight[j] * y(node[j]) approximates
// int_0^1 G(t_i,tau) y(tau) dtau. Rows for t_i = 1 are empty.
struct RowQuadrature {
    std::vector<double> half_nodes;          // targets in [0,1], ascending
    std::vector<std::vector<double>> nodes;  // per-row tau samples
    std::vector<std::vector<double>> weights;
};

RowQuadrature build_row_quadrature(const std::vector<double>& half_nodes,
                                   FracOrder mu, const QuadratureScheme& scheme);

// Integral representation of the linear bilateral problem: given symmetric
// forcing y (with finite (1-|t|)^(mu-1)-weighted integral), returns the
// symmetric solution with exact zeros at +-1. Throws IllPosedDataError when
// the integrability pre-check flags divergence.
GridFn solve_linear(const GridFn& y, FracOrder mu, const QuadratureScheme& scheme);

}  // namespace sbvp
