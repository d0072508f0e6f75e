#include "sbvp/grid.hpp"

#include <algorithm>
#include <cmath>

#include "sbvp/errors.hpp"

namespace sbvp {

void GridFn::validate() const {
    if (nodes.size() != values.size() || nodes.size() < 5)
        throw ConfigError("GridFn: need matching nodes/values, at least 5");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw ConfigError("GridFn: nodes must be strictly increasing");
    if (nodes.front() != -1.0 || nodes.back() != 1.0)
        throw ConfigError("GridFn: nodes must span [-1,1] inclusive");
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n; ++i)
        if (nodes[i] != -nodes[n - 1 - i])
            throw ConfigError("GridFn: node set must be closed under negation");
    if (n % 2 == 0 || nodes[n / 2] != 0.0)
        throw ConfigError("GridFn: node set must contain 0");
    for (double v : values)
        if (!std::isfinite(v)) throw ConfigError("GridFn: non-finite value");
    if (symmetric && max_symmetry_defect() != 0.0)
        throw ConfigError("GridFn: symmetric flag requires exact symmetry");
}

std::size_t GridFn::center_index() const { return nodes.size() / 2; }

double GridFn::max_symmetry_defect() const {
    const std::size_t n = nodes.size();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        d = std::max(d, std::fabs(values[i] - values[n - 1 - i]));
    return d;
}

std::vector<double> uniform_symmetric_nodes(int n) {
    if (n < 5 || n % 2 == 0)
        throw ConfigError("uniform_symmetric_nodes: n must be odd and >= 5");
    std::vector<double> nodes(n);
    const int h = n / 2;
    for (int i = 0; i <= h; ++i) {
        double s = double(i) / h;
        nodes[h + i] = s;
        nodes[h - i] = -s;
    }
    nodes[h] = 0.0;
    return nodes;
}

std::vector<double> clustered_symmetric_nodes(int n) {
    if (n < 5 || n % 2 == 0)
        throw ConfigError("clustered_symmetric_nodes: n must be odd and >= 5");
    std::vector<double> nodes(n);
    const int h = n / 2;
    for (int i = 0; i <= h; ++i) {
        double u = double(i) / h;
        double s = u - std::sin(2.0 * M_PI * u) / (2.0 * M_PI);
        nodes[h + i] = s;
        nodes[h - i] = -s;
    }
    nodes[h] = 0.0;
    nodes[0] = -1.0;
    nodes[n - 1] = 1.0;
    return nodes;
}

GridFn make_grid_fn(std::vector<double> nodes, std::vector<double> values,
                    bool symmetric) {
    GridFn g{std::move(nodes), std::move(values), symmetric};
    g.validate();
    return g;
}

void SampledFn::validate() const {
    if (nodes.size() != values.size() || nodes.size() < 6)
        throw ConfigError("SampledFn: need matching nodes/values, at least 6");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw ConfigError("SampledFn: nodes must be strictly increasing");
    for (double v : values)
        if (!std::isfinite(v)) throw ConfigError("SampledFn: non-finite value");
    if (smoothness_hint < 0)
        throw ConfigError("SampledFn: smoothness_hint must be >= 0");
}

namespace {

std::size_t bracket(const std::vector<double>& nodes, double t) {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
    std::size_t j = it - nodes.begin();
    if (j == 0) return 0;
    if (j >= nodes.size()) return nodes.size() - 2;
    return j - 1;
}

}  // namespace

double interp_local(const std::vector<double>& nodes,
                    const std::vector<double>& values, double t) {
    const std::size_t n = nodes.size();
    std::size_t j = bracket(nodes, t);
    if (j == 0 || j + 2 >= n) {
        // boundary interval: linear
        double x0 = nodes[j], x1 = nodes[j + 1];
        double w = (t - x0) / (x1 - x0);
        return values[j] * (1.0 - w) + values[j + 1] * w;
    }
    // 4-point Lagrange on nodes[j-1..j+2]
    double acc = 0.0;
    for (std::size_t i = j - 1; i <= j + 2; ++i) {
        double l = 1.0;
        for (std::size_t k = j - 1; k <= j + 2; ++k)
            if (k != i) l *= (t - nodes[k]) / (nodes[i] - nodes[k]);
        acc += values[i] * l;
    }
    return acc;
}

double d2_local(const std::vector<double>& nodes,
                const std::vector<double>& values, double t) {
    const std::size_t n = nodes.size();
    std::size_t j = bracket(nodes, t);
    std::size_t j0 = (j >= 3) ? j - 3 : 0;
    if (j0 + 6 > n) j0 = n - 6;

    const double* xs = nodes.data() + j0;
    double r[6];
    {
        // subtract the window's linear trend (exact zero for affine data)
        double x0 = xs[0], x5 = xs[5];
        double v0 = values[j0], v5 = values[j0 + 5];
        double slope = (v5 - v0) / (x5 - x0);
        for (int i = 0; i < 6; ++i)
            r[i] = values[j0 + i] - (v0 + slope * (xs[i] - x0));
    }
    // d2 of the Lagrange basis: sum over ordered pairs (k,l), k != l != i
    double acc = 0.0;
    for (int i = 0; i < 6; ++i) {
        if (r[i] == 0.0) continue;
        double s = 0.0;
        for (int k = 0; k < 6; ++k) {
            if (k == i) continue;
            for (int l = 0; l < 6; ++l) {
                if (l == i || l == k) continue;
                double p = 1.0;
                for (int m = 0; m < 6; ++m) {
                    if (m == i || m == k || m == l) continue;
                    p *= (t - xs[m]) / (xs[i] - xs[m]);
                }
                s += p / ((xs[i] - xs[k]) * (xs[i] - xs[l]));
            }
        }
        acc += r[i] * s;
    }
    return acc;
}

}  // namespace sbvp
