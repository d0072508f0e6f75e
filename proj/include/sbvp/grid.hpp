#pragma once

#include <vector>

namespace sbvp {

// A function sampled on a strictly increasing symmetric node set over [-1,1]
// (closed under negation, contains -1, 0, 1). A GridFn flagged `symmetric`
// promises value(t) == value(-t) exactly.
struct GridFn {
    std::vector<double> nodes;
    std::vector<double> values;
    bool symmetric = false;

    void validate() const;  // throws ConfigError on invariant violations
    std::size_t size() const { return nodes.size(); }
    // index of node 0 (nodes[c] == 0.0)
    std::size_t center_index() const;
    double max_symmetry_defect() const;
};

// Uniform symmetric grid with n nodes (n odd, >= 5).
std::vector<double> uniform_symmetric_nodes(int n);

// Symmetric grid clustered at 0 and +-1 via s(u) = u - sin(2 pi u)/(2 pi)
// on each half; n odd, >= 5.
std::vector<double> clustered_symmetric_nodes(int n);

GridFn make_grid_fn(std::vector<double> nodes, std::vector<double> values,
                    bool symmetric);

// Function sampled on an increasing node set over a half-interval ([0,1] or
// [-1,0]). smoothness_hint is the number of continuous derivatives the data
// is trusted to carry (the Caputo evaluators require >= 2).
struct SampledFn {
    std::vector<double> nodes;
    std::vector<double> values;
    int smoothness_hint = 2;

    void validate() const;
    double front() const { return nodes.front(); }
    double back() const { return nodes.back(); }
};

// Piecewise-local polynomial interpolation on an increasing node set:
// 4-point Lagrange in the interior, linear on the first/last interval so
// monotone boundary data cannot overshoot through zero.
double interp_local(const std::vector<double>& nodes,
                    const std::vector<double>& values, double t);

// Second derivative of the local degree-5 interpolant through the 6 nearest
// nodes. The window's linear trend is subtracted first, so affine data gives
// exactly zero.
double d2_local(const std::vector<double>& nodes,
                const std::vector<double>& values, double t);

}  // namespace sbvp
