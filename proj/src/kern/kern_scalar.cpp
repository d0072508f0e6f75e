#include <cmath>

#include "kern_impl.hpp"

namespace sbvp::kern::detail {
namespace {

// Reference implementation of the blocked-4 reduction. The AVX2 variant maps
// each lane loop below onto one vector register; keeping the lane order and
// the final ((a0+a2)+(a1+a3)) combine identical is what makes the two
// backends bit-equal.

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t m = n - n % 4;
    for (std::size_t i = 0; i < m; i += 4) {
        acc0 += a[i] * b[i];
        acc1 += a[i + 1] * b[i + 1];
        acc2 += a[i + 2] * b[i + 2];
        acc3 += a[i + 3] * b[i + 3];
    }
    double tail = 0.0;
    for (std::size_t i = m; i < n; ++i) tail += a[i] * b[i];
    return ((acc0 + acc2) + (acc1 + acc3)) + tail;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t m = n - n % 4;
    for (std::size_t i = 0; i < m; i += 4) {
        acc0 += a[i];
        acc1 += a[i + 1];
        acc2 += a[i + 2];
        acc3 += a[i + 3];
    }
    double tail = 0.0;
    for (std::size_t i = m; i < n; ++i) tail += a[i];
    return ((acc0 + acc2) + (acc1 + acc3)) + tail;
}

void axpby_scalar(double alpha, const double* x, double beta, const double* y,
                  double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
    return m;
}

double max_abs_scalar(const double* a, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(a[i]));
    return m;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{dot_scalar, sum_scalar, axpby_scalar,
                         max_abs_diff_scalar, max_abs_scalar};
    return ops;
}

}  // namespace sbvp::kern::detail
