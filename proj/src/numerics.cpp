#include "sbvp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "sbvp/errors.hpp"
#include "sbvp/kern.hpp"

namespace sbvp {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------------------
// gamma
// ---------------------------------------------------------------------------

double gamma_fn(double z) {
    if (!(z > 0.0)) throw DomainError("gamma_fn: argument must be positive");
    // Godfrey's 15-term Lanczos coefficients, g = 607/128.
    static const double g = 607.0 / 128.0;
    static const double c[15] = {
        0.99999999999999709182,     57.156235665862923517,
        -59.597960355475491248,     14.136097974741747174,
        -0.49191381609762019978,    3.3994649984811888699e-5,
        4.6523628927048575665e-5,   -9.8374475304879564677e-5,
        1.5808870322491248884e-4,   -2.1026444172410488319e-4,
        2.1743961811521264320e-4,   -1.6431810653676389022e-4,
        8.4418223983852743293e-5,   -2.6190838401581408670e-5,
        3.6899182659531622704e-6};
    if (z < 0.5) {
        // reflection: Gamma(z) = pi / (sin(pi z) Gamma(1-z))
        return M_PI / (std::sin(M_PI * z) * gamma_fn(1.0 - z));
    }
    double x = z - 1.0;
    double s = c[0];
    for (int k = 1; k < 15; ++k) s += c[k] / (x + k);
    double t = x + g + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * s;
}

// ---------------------------------------------------------------------------
// basic types
// ---------------------------------------------------------------------------

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw ConfigError("Interval: requires finite a < b");
}

void QuadratureScheme::validate() const {
    if (!(grading_exponent >= 1.0))
        throw ConfigError("QuadratureScheme: grading_exponent must be >= 1");
    if (panels < 1) throw ConfigError("QuadratureScheme: panels must be >= 1");
    if (nodes_per_panel < 2 || nodes_per_panel > 32)
        throw ConfigError("QuadratureScheme: nodes_per_panel must be in [2,32]");
}

double default_grading(double mu) {
    return std::min(10.0, 3.0 / (mu - 1.0));
}

// ---------------------------------------------------------------------------
// Gauss-Legendre
// ---------------------------------------------------------------------------

namespace {

GaussRule compute_gauss(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 2 || n > 32) throw ConfigError("gauss_legendre: n must be in [2,32]");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
    return it->second;
}

// ---------------------------------------------------------------------------
// summation / meshes
// ---------------------------------------------------------------------------

double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n == 1) return v[0];
    std::size_t half = n / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

std::vector<double> singular_breakpoints(double len, int panels, double sigma) {
    const double scut = detail::kTailCut * len;
    // keep graded breakpoints only where consecutive width ratios stay <= 2;
    // composite Gauss on power-law integrands degrades on wider-ratio panels
    std::vector<double> alg;
    alg.reserve(panels);
    for (int k = 1; k <= panels; ++k) {
        double s = len * std::pow(double(k) / panels, sigma);
        double ratio = std::pow(double(k + 1) / k, sigma);
        if (s >= 4.0 * scut && (ratio <= 2.0 || k == panels)) alg.push_back(s);
    }
    if (alg.empty()) alg.push_back(len);
    // geometric ratio-2 ladder from the innermost kept breakpoint down to
    // ~scut; the two innermost panels have exact ratio 2, which makes the
    // sliver extrapolation closed-form.
    const double g0 = alg.front();
    int J = std::max(1, int(std::ceil(std::log2(g0 / scut))));
    std::vector<double> bp;
    bp.reserve(J + alg.size());
    for (int j = J; j >= 1; --j) bp.push_back(std::ldexp(g0, -j));
    bp.insert(bp.end(), alg.begin(), alg.end());
    return bp;
}

namespace {

struct PanelSet {
    std::vector<double> masses;      // per-panel integrals, ascending s
    std::vector<double> est_deltas;  // per-panel |full - embedded| differences
};

// Evaluate f over one panel [lo,hi] (in t-space) with the full rule and an
// embedded lower-order rule for the error estimate.
void eval_panel(const Integrand& f, double lo, double hi, const GaussRule& full,
                const GaussRule& emb, double* mass, double* est) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const int n = int(full.nodes.size());
    double vals[32], wts[32];
    for (int j = 0; j < n; ++j) {
        double t = c + h * full.nodes[j];
        double v = f(t);
        if (!std::isfinite(v))
            throw SingularSampleError("integrate_graded: non-finite sample", t);
        vals[j] = v;
        wts[j] = h * full.weights[j];
    }
    *mass = kern::dot(wts, vals, n);
    const int ne = int(emb.nodes.size());
    double evals[32], ewts[32];
    for (int j = 0; j < ne; ++j) {
        double t = c + h * emb.nodes[j];
        double v = f(t);
        if (!std::isfinite(v))
            throw SingularSampleError("integrate_graded: non-finite sample", t);
        evals[j] = v;
        ewts[j] = h * emb.weights[j];
    }
    *est = std::fabs(*mass - kern::dot(ewts, evals, ne));
}

// One singular-end group over [a,b] with the singularity at `end` (= a or b).
// Returns masses in ascending-s order; fills sliver info.
struct GroupResult {
    std::vector<double> masses;
    std::vector<double> est_deltas;
    double sliver = 0.0;
    double sliver_est = 0.0;
    double beta = kNaN;
    bool divergent = false;
};

GroupResult eval_singular_group(const Integrand& f, double a, double b,
                                bool at_right, int panels, double sigma,
                                const GaussRule& full, const GaussRule& emb) {
    GroupResult g;
    const double len = b - a;
    auto bp = singular_breakpoints(len, panels, sigma);
    const double end = at_right ? b : a;
    const double sign = at_right ? -1.0 : 1.0;
    // panel i spans s in [s_lo, s_hi]; map to t = end -/+ s
    double prev = bp[0];
    // innermost boundary panel [scut..bp0] is part of the mesh: panels are
    // [bp0,bp1],... with the sliver below bp0.
    g.masses.reserve(bp.size());
    g.est_deltas.reserve(bp.size());
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        double slo = bp[i], shi = bp[i + 1];
        double t0 = end + sign * shi;
        double t1 = end + sign * slo;
        if (!at_right) std::swap(t0, t1);
        double mass, est;
        eval_panel(f, std::min(t0, t1), std::max(t0, t1), full, emb, &mass, &est);
        g.masses.push_back(mass);
        g.est_deltas.push_back(est);
        prev = shi;
    }
    (void)prev;
    // sliver below bp[0]: geometric-series extrapolation from the two
    // innermost panel masses (exact ratio-2 boundaries).
    if (g.masses.size() >= 2) {
        double m1 = g.masses[0], m2 = g.masses[1];
        if (m1 != 0.0 && m2 != 0.0 && std::signbit(m1) == std::signbit(m2)) {
            double beta = std::log2(m2 / m1);
            g.beta = beta;
            if (beta < detail::kTailBetaMin) {
                g.divergent = true;
            } else {
                g.sliver = m1 * m1 / (m2 - m1);
                if (g.masses.size() >= 3) {
                    double m3 = g.masses[2];
                    if (m3 != 0.0 && std::signbit(m3) == std::signbit(m2) &&
                        std::fabs(m3) > std::fabs(m2)) {
                        // alternative tail from the (m2,m3) fit
                        double b2 = std::log2(m3 / m2);
                        double alt = m2 / (std::pow(2.0, 2.0 * b2) - std::pow(2.0, b2));
                        g.sliver_est = std::fabs(g.sliver - alt);
                    } else {
                        g.sliver_est = std::fabs(g.sliver);
                    }
                }
            }
        } else if (m1 != 0.0 && m2 != 0.0) {
            // sign change right at the tail: no stable fit; bound by |m1|
            g.sliver_est = std::fabs(m1);
        }
    }
    return g;
}

void eval_plain_panels(const Integrand& f, double a, double b, int panels,
                       const GaussRule& full, const GaussRule& emb,
                       std::vector<double>* masses, std::vector<double>* ests) {
    for (int i = 0; i < panels; ++i) {
        double lo = a + (b - a) * double(i) / panels;
        double hi = a + (b - a) * double(i + 1) / panels;
        double mass, est;
        eval_panel(f, lo, hi, full, emb, &mass, &est);
        masses->push_back(mass);
        ests->push_back(est);
    }
}

}  // namespace

IntegrateResult integrate_graded(const Integrand& f, Interval iv,
                                 const QuadratureScheme& scheme) {
    scheme.validate();
    const GaussRule& full = gauss_legendre(scheme.nodes_per_panel);
    const GaussRule& emb = gauss_legendre(std::max(2, scheme.nodes_per_panel - 2));

    IntegrateResult res;
    res.tail_beta_left = kNaN;
    res.tail_beta_right = kNaN;

    std::vector<double> parts;   // ordered left-to-right contributions
    std::vector<double> ests;

    if (scheme.singular_left && scheme.singular_right) {
        const double mid = 0.5 * (iv.a + iv.b);
        int half = std::max(1, scheme.panels / 2);
        auto gl = eval_singular_group(f, iv.a, mid, false, half,
                                      scheme.grading_exponent, full, emb);
        auto gr = eval_singular_group(f, mid, iv.b, true, half,
                                      scheme.grading_exponent, full, emb);
        parts.push_back(gl.sliver);
        // left group masses are ascending-s = left-to-right already
        parts.insert(parts.end(), gl.masses.begin(), gl.masses.end());
        // right group ascending-s runs right-to-left; reverse for order
        parts.insert(parts.end(), gr.masses.rbegin(), gr.masses.rend());
        parts.push_back(gr.sliver);
        ests.insert(ests.end(), gl.est_deltas.begin(), gl.est_deltas.end());
        ests.insert(ests.end(), gr.est_deltas.begin(), gr.est_deltas.end());
        ests.push_back(gl.sliver_est);
        ests.push_back(gr.sliver_est);
        res.tail_beta_left = gl.beta;
        res.tail_beta_right = gr.beta;
        res.tail_divergent = gl.divergent || gr.divergent;
    } else if (scheme.singular_left || scheme.singular_right) {
        const bool right = scheme.singular_right;
        auto g = eval_singular_group(f, iv.a, iv.b, right, scheme.panels,
                                     scheme.grading_exponent, full, emb);
        if (right) {
            parts.insert(parts.end(), g.masses.rbegin(), g.masses.rend());
            parts.push_back(g.sliver);
            res.tail_beta_right = g.beta;
        } else {
            parts.push_back(g.sliver);
            parts.insert(parts.end(), g.masses.begin(), g.masses.end());
            res.tail_beta_left = g.beta;
        }
        ests.insert(ests.end(), g.est_deltas.begin(), g.est_deltas.end());
        ests.push_back(g.sliver_est);
        res.tail_divergent = g.divergent;
    } else {
        eval_plain_panels(f, iv.a, iv.b, scheme.panels, full, emb, &parts, &ests);
    }

    res.value = pairwise_sum(parts);
    res.error_estimate = pairwise_sum(ests);
    return res;
}

RefineResult refine_to_tolerance(const Integrand& f, Interval iv,
                                 bool sing_left, bool sing_right, double tol,
                                 int max_levels, const QuadratureScheme& base) {
    if (!(tol > 0.0)) throw ConfigError("refine_to_tolerance: tol must be > 0");
    if (max_levels < 1) throw ConfigError("refine_to_tolerance: max_levels >= 1");
    QuadratureScheme s = base.with_flags(sing_left, sing_right);

    RefineResult r;
    bool have_prev = false;
    double prev = 0.0;
    int divergent_streak = 0;
    for (int level = 0; level < max_levels; ++level) {
        auto ir = integrate_graded(f, iv, s);
        r.value = ir.value;
        r.levels_used = level + 1;
        divergent_streak = ir.tail_divergent ? divergent_streak + 1 : 0;
        if (divergent_streak >= 2) {
            r.divergent = true;
            return r;
        }
        if (have_prev) {
            r.last_delta = std::fabs(ir.value - prev);
            if (!ir.tail_divergent && r.last_delta < tol) {
                r.converged = true;
                return r;
            }
        }
        prev = ir.value;
        have_prev = true;
        s.panels *= 2;
    }
    r.divergent = true;  // Cauchy criterion never met
    return r;
}

}  // namespace sbvp
