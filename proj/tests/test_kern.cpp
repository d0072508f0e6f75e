#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "sbvp/kern.hpp"

using namespace sbvp;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double scale) {
    std::vector<double> v(n);
    for (auto& x : v) {
        // map uint64 to (-scale, scale) deterministically
        double u = double(rng() >> 11) * 0x1.0p-53;
        x = scale * (2.0 * u - 1.0);
    }
    return v;
}

template <class F>
void with_backend(kern::Backend b, F&& f) {
    kern::Backend old = kern::active();
    if (kern::force(b) != b) return;  // unsupported, skip
    f();
    kern::force(old);
}

}  // namespace

TEST_CASE("kern scalar/avx2 backends are bit-identical") {
    std::mt19937_64 rng(20240817);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 63u, 64u, 257u, 1000u}) {
        auto a = random_vec(rng, n, 3.0);
        auto b = random_vec(rng, n, 7.0);
        double dot_s = 0, sum_s = 0, mad_s = 0, ma_s = 0;
        std::vector<double> ax_s(n);
        with_backend(kern::Backend::scalar, [&] {
            dot_s = kern::dot(a.data(), b.data(), n);
            sum_s = kern::sum(a.data(), n);
            mad_s = kern::max_abs_diff(a.data(), b.data(), n);
            ma_s = kern::max_abs(a.data(), n);
            kern::axpby(0.3, a.data(), -1.7, b.data(), ax_s.data(), n);
        });
        with_backend(kern::Backend::avx2, [&] {
            std::vector<double> ax_v(n);
            CHECK(kern::dot(a.data(), b.data(), n) == dot_s);
            CHECK(kern::sum(a.data(), n) == sum_s);
            CHECK(kern::max_abs_diff(a.data(), b.data(), n) == mad_s);
            CHECK(kern::max_abs(a.data(), n) == ma_s);
            kern::axpby(0.3, a.data(), -1.7, b.data(), ax_v.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(ax_v[i] == ax_s[i]);
        });
    }
}

TEST_CASE("kern primitives: values") {
    std::vector<double> a{1, 2, 3, 4, 5};
    std::vector<double> b{2, 2, 2, 2, 2};
    CHECK(kern::dot(a.data(), b.data(), 5) == doctest::Approx(30.0));
    CHECK(kern::sum(a.data(), 5) == doctest::Approx(15.0));
    CHECK(kern::max_abs(a.data(), 5) == 5.0);
    CHECK(kern::max_abs_diff(a.data(), b.data(), 5) == 3.0);
    std::vector<double> out(5);
    kern::axpby(2.0, a.data(), 1.0, b.data(), out.data(), 5);
    CHECK(out[4] == doctest::Approx(12.0));
}

TEST_CASE("kern axpby aliasing is safe") {
    std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
    std::vector<double> y{1, 1, 1, 1, 1, 1, 1};
    kern::axpby(0.5, x.data(), 0.5, y.data(), x.data(), x.size());
    CHECK(x[0] == 1.0);
    CHECK(x[6] == 4.0);
}
