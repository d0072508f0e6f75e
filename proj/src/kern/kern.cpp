#include "sbvp/kern.hpp"

#include <cstdlib>
#include <cstring>

#include "kern_impl.hpp"

namespace sbvp::kern {
namespace {

using detail::Ops;

Backend pick_initial() {
    if (const char* env = std::getenv("SBVP_KERN")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && detail::avx2_supported())
            return Backend::avx2;
    }
    return detail::avx2_supported() ? Backend::avx2 : Backend::scalar;
}

Backend g_backend = pick_initial();

const Ops& ops() {
    return g_backend == Backend::avx2 ? detail::avx2_ops() : detail::scalar_ops();
}

}  // namespace

Backend active() { return g_backend; }

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

Backend force(Backend b) {
    if (b == Backend::avx2 && !detail::avx2_supported()) return g_backend;
    g_backend = b;
    return g_backend;
}

double dot(const double* a, const double* b, std::size_t n) {
    return ops().dot(a, b, n);
}

double sum(const double* a, std::size_t n) { return ops().sum(a, n); }

void axpby(double alpha, const double* x, double beta, const double* y,
           double* out, std::size_t n) {
    ops().axpby(alpha, x, beta, y, out, n);
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    return ops().max_abs_diff(a, b, n);
}

double max_abs(const double* a, std::size_t n) { return ops().max_abs(a, n); }

}  // namespace sbvp::kern
