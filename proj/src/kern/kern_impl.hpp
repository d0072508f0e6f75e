#pragma once

#include <cstddef>

// Per-backend entry points. Each backend must realize the exact blocked-4
// operation order documented in kern.hpp.
namespace sbvp::kern::detail {

struct Ops {
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    void (*axpby)(double, const double*, double, const double*, double*, std::size_t);
    double (*max_abs_diff)(const double*, const double*, std::size_t);
    double (*max_abs)(const double*, std::size_t);
};

const Ops& scalar_ops();
const Ops& avx2_ops();
bool avx2_supported();

}  // namespace sbvp::kern::detail
