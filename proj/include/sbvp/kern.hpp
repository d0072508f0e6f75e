#pragma once

#include <cstddef>

// Array primitives behind the quadrature reductions and fixed-point updates.
// A scalar reference implementation and an AVX2 variant are selected at
// runtime; both execute the identical IEEE operation sequence, so results are
// bit-identical across backends (equivalence-tested). Reductions use a fixed
// blocked-4 order: four strided partial accumulators over full blocks,
// combined as ((a0+a2)+(a1+a3)), then an in-order scalar tail. Requires
// -ffp-contract=off so the scalar path does not fuse mul+add.
namespace sbvp::kern {

enum class Backend { scalar, avx2 };

Backend active();
const char* backend_name(Backend b);

// Test hook: request a backend; returns the one actually in effect
// (an unsupported request keeps the current backend).
Backend force(Backend b);

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i a[i]
double sum(const double* a, std::size_t n);

// out[i] = alpha*x[i] + beta*y[i]   (out may alias x or y)
void axpby(double alpha, const double* x, double beta, const double* y,
           double* out, std::size_t n);

// max_i |a[i] - b[i]|
double max_abs_diff(const double* a, const double* b, std::size_t n);

// max_i |a[i]|
double max_abs(const double* a, std::size_t n);

}  // namespace sbvp::kern
