#include "kern_impl.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define SBVP_KERN_HAVE_AVX2 1
#include <immintrin.h>

#include <cmath>
#else
#define SBVP_KERN_HAVE_AVX2 0
#endif

namespace sbvp::kern::detail {

#if SBVP_KERN_HAVE_AVX2
namespace {

// Lane l of `acc` equals the scalar backend's acc_l; vmulpd+vaddpd round
// per lane exactly like the scalar mul-then-add (no FMA on either side).

__attribute__((target("avx2"))) inline double hreduce(__m256d acc) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

__attribute__((target("avx2"))) double dot_avx2(const double* a, const double* b,
                                                std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t m = n - n % 4;
    for (std::size_t i = 0; i < m; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
    }
    double tail = 0.0;
    for (std::size_t i = m; i < n; ++i) tail += a[i] * b[i];
    return hreduce(acc) + tail;
}

__attribute__((target("avx2"))) double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t m = n - n % 4;
    for (std::size_t i = 0; i < m; i += 4)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double tail = 0.0;
    for (std::size_t i = m; i < n; ++i) tail += a[i];
    return hreduce(acc) + tail;
}

__attribute__((target("avx2"))) void axpby_avx2(double alpha, const double* x,
                                                double beta, const double* y,
                                                double* out, std::size_t n) {
    __m256d va = _mm256_set1_pd(alpha);
    __m256d vb = _mm256_set1_pd(beta);
    std::size_t m = n - n % 4;
    for (std::size_t i = 0; i < m; i += 4) {
        __m256d t = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)),
                                  _mm256_mul_pd(vb, _mm256_loadu_pd(y + i)));
        _mm256_storeu_pd(out + i, t);
    }
    for (std::size_t i = m; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

__attribute__((target("avx2"))) double max_abs_diff_avx2(const double* a,
                                                         const double* b,
                                                         std::size_t n) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t m = n - n % 4;
    for (std::size_t i = 0; i < m; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(signmask, d));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double r = std::fmax(std::fmax(lane[0], lane[2]), std::fmax(lane[1], lane[3]));
    for (std::size_t i = m; i < n; ++i) r = std::fmax(r, std::fabs(a[i] - b[i]));
    return r;
}

__attribute__((target("avx2"))) double max_abs_avx2(const double* a, std::size_t n) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t m = n - n % 4;
    for (std::size_t i = 0; i < m; i += 4)
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(signmask, _mm256_loadu_pd(a + i)));
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double r = std::fmax(std::fmax(lane[0], lane[2]), std::fmax(lane[1], lane[3]));
    for (std::size_t i = m; i < n; ++i) r = std::fmax(r, std::fabs(a[i]));
    return r;
}

}  // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

const Ops& avx2_ops() {
    static const Ops ops{dot_avx2, sum_avx2, axpby_avx2, max_abs_diff_avx2,
                         max_abs_avx2};
    return ops;
}

#else

bool avx2_supported() { return false; }
const Ops& avx2_ops() { return scalar_ops(); }

#endif

}  // namespace sbvp::kern::detail
