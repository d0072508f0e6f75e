#include "sbvp/model.hpp"

#include <algorithm>
#include <cmath>

#include "sbvp/errors.hpp"

namespace sbvp {

namespace {

// deterministic cross-platform uniforms
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        // splitmix64
        s += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    double log_uniform(double lo, double hi) {
        return lo * std::exp(uniform01() * std::log(hi / lo));
    }
};

constexpr const char* kPNote =
    "(A2) prints the ratio with an undefined p(R); read as u(R) so the factor "
    "is 1+v(R)/u(R), matching the Example and the upper-bound chain. ";

// relative tolerance target for the hypothesis integrals
constexpr double kIntegralRelTol = 1e-5;

struct HypInt {
    double value = 0.0;
    bool divergent = true;
};

HypInt hypothesis_integral(const Integrand& f, const QuadratureScheme& scheme) {
    // coarse pass to fix the scale, then refine to a relative target
    QuadratureScheme base = scheme.with_flags(true, true);
    base.grading_exponent = 10.0;
    HypInt out;
    IntegrateResult coarse;
    try {
        coarse = integrate_graded(f, Interval(-1.0, 1.0), base);
    } catch (const EvalDomainError&) {
        // expressions blowing up off the flagged endpoints: treat as divergent
        return out;
    }
    if (coarse.tail_divergent) return out;
    double tol = kIntegralRelTol * std::max(std::fabs(coarse.value), 1e-300);
    auto r = refine_to_tolerance(f, Interval(-1.0, 1.0), true, true, tol, 10, base);
    out.value = r.value;
    out.divergent = r.divergent;
    return out;
}

}  // namespace

ProblemSpec::ProblemSpec(FracOrder mu_, expr::Ast f_, expr::Ast q_, expr::Ast u_,
                         expr::Ast v_, expr::Ast gamma_r_, double R_,
                         expr::Env params_)
    : mu(mu_),
      f(std::move(f_)),
      q(std::move(q_)),
      u(std::move(u_)),
      v(std::move(v_)),
      gamma_r(std::move(gamma_r_)),
      R(R_),
      params(std::move(params_)),
      f_prog_(expr::Program::compile(f, {"t", "x"}, params)),
      q_prog_(expr::Program::compile(q, {"t"}, params)),
      u_prog_(expr::Program::compile(u, {"x"}, params)),
      v_prog_(expr::Program::compile(v, {"x"}, params)),
      g_prog_(expr::Program::compile(gamma_r, {"r"}, params)) {
    if (!(R > 0.0)) throw ConfigError("ProblemSpec: R must be positive");
    if (params.has("t") || params.has("x") || params.has("r"))
        throw ConfigError("ProblemSpec: params must not shadow t, x, or r");
}

void ProblemSpec::spot_check_shape(std::uint64_t seed) const {
    // u nonincreasing, v nondecreasing on a log-spaced probe grid
    const int np = 50;
    double prev_u = 0.0, prev_v = 0.0;
    for (int i = 0; i < np; ++i) {
        double x = 1e-6 * std::pow(1e8, double(i) / (np - 1));  // 1e-6 .. 100
        double uu = eval_u(x);
        double vv = eval_v(x);
        if (i > 0) {
            double su = 1e-12 * std::max(std::fabs(uu), std::fabs(prev_u));
            double sv = 1e-12 * std::max(std::fabs(vv), std::fabs(prev_v));
            if (uu > prev_u + su)
                throw DomainError("ProblemSpec: u(x) is not nonincreasing (sampled)");
            if (vv < prev_v - sv)
                throw DomainError("ProblemSpec: v(x) is not nondecreasing (sampled)");
        }
        prev_u = uu;
        prev_v = vv;
    }
    // f(t,x) symmetric in t on random probes
    Rng rng(seed);
    for (int i = 0; i < 200; ++i) {
        double t = rng.uniform(0.0, 0.999);
        double x = rng.log_uniform(1e-6, std::max(1.0, R));
        double a = eval_f(t, x), b = eval_f(-t, x);
        if (std::fabs(a - b) > 1e-12 * std::max(1.0, std::fabs(a)))
            throw DomainError("ProblemSpec: f(t,x) != f(-t,x) (sampled)");
    }
}

HypothesisReport check_A1(const ProblemSpec& p, const QuadratureScheme& scheme,
                          std::uint64_t seed) {
    HypothesisReport rep;
    rep.seed = seed;
    rep.notes = kPNote;

    // (i) |f(t,x)| <= q(t)(u(x)+v(x)) on 1e4 probes
    Rng rng(seed);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 10000; ++i) {
        double t = rng.uniform(-0.9999, 0.9999);
        double x = rng.log_uniform(1e-8, 10.0 * std::max(1.0, p.R));
        double lhs, rhs;
        try {
            lhs = std::fabs(p.eval_f(t, x));
            rhs = p.eval_q(t) * (p.eval_u(x) + p.eval_v(x));
        } catch (const EvalDomainError&) {
            continue;  // singular sample: majorant comparison vacuous there
        }
        double slack = 1e-12 * std::max(1.0, rhs);
        if (lhs > rhs + slack) {
            ok = false;
            worst = std::max(worst, lhs - rhs);
        }
    }
    rep.a1_majorant_ok = ok;
    rep.a1_worst_violation = worst;

    // (ii) finiteness of the weighted integrals
    const double mu = p.mu.mu;
    auto wq = [&](double t) {
        return std::pow(1.0 - std::fabs(t), mu - 1.0) * p.eval_q(t);
    };
    auto q_int = hypothesis_integral(wq, scheme);
    rep.a1_integral_q = q_int.value;
    rep.a1_integral_q_divergent = q_int.divergent;

    rep.a1_integral_qu_divergent = false;
    for (double c : {0.1, 1.0, 10.0}) {
        auto wqu = [&](double t) {
            double a = std::fabs(t);
            return std::pow(1.0 - a, mu - 1.0) * p.eval_q(t) *
                   p.eval_u(c * (1.0 - std::pow(a, mu)));
        };
        auto r = hypothesis_integral(wqu, scheme);
        rep.a1_integral_qu[c] = r.value;
        if (r.divergent) rep.a1_integral_qu_divergent = true;
    }
    return rep;
}

double compute_chi(const ProblemSpec& p, double r, const QuadratureScheme& scheme,
                   bool paper_factor2) {
    if (!(r > 0.0)) throw DomainError("compute_chi: r must be positive");
    double gr = p.eval_gamma(r);
    if (!(gr > 0.0)) throw DomainError("compute_chi: gamma_r must be positive");
    const double mu = p.mu.mu;
    const double k = paper_factor2 ? 2.0 : 1.0;
    const double scale = k * gr / gamma_fn(mu + 1.0);
    auto f = [&](double t) {
        double a = std::fabs(t);
        return std::pow(1.0 - a, mu - 1.0) * p.eval_q(t) *
               p.eval_u(scale * (1.0 - std::pow(a, mu)));
    };
    auto res = hypothesis_integral(f, scheme);
    if (res.divergent)
        throw DomainError("compute_chi: envelope integral looks divergent");
    return res.value;
}

void check_A2(const ProblemSpec& p, const QuadratureScheme& scheme,
              HypothesisReport& rep) {
    const double mu = p.mu.mu;
    rep.gamma_R = p.eval_gamma(p.R);
    rep.min_R_bound = 2.0 * rep.gamma_R / gamma_fn(mu + 1.0);
    rep.r_bound_ok = p.R > rep.min_R_bound;

    // f(t,x) >= gamma_R for x in (0,R], probe sweep
    Rng rng(rep.seed + 1);
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10000; ++i) {
        double t = rng.uniform(-0.9999, 0.9999);
        double x = rng.log_uniform(1e-10, 1.0) * p.R;
        try {
            margin = std::min(margin, p.eval_f(t, x) - rep.gamma_R);
        } catch (const EvalDomainError&) {
        }
    }
    rep.a2_floor_margin = margin;
    rep.a2_floor_ok = margin >= -1e-12 * std::max(1.0, rep.gamma_R);

    rep.chi_R = compute_chi(p, p.R, scheme, true);
    rep.chi_R_factor1 = compute_chi(p, p.R, scheme, false);
    double vu = 1.0 + p.eval_v(p.R) / p.eval_u(p.R);
    rep.a2_ratio = p.R / (rep.chi_R * vu);
    rep.a2_ratio_ok = rep.a2_ratio > 1.0;
}

std::optional<double> select_epsilon(const ProblemSpec& p,
                                     const QuadratureScheme& scheme) {
    const double mu = p.mu.mu;
    double gR = p.eval_gamma(p.R);
    double ub = p.R - 2.0 * gR / gamma_fn(mu + 1.0);
    if (!(ub > 0.0)) return std::nullopt;
    const double ratio = std::pow(1e-6, 1.0 / 63.0);  // 64 descending candidates
    double eps = ub;
    for (int k = 0; k < 64; ++k, eps *= ratio) {
        double r = p.R + eps;
        double chi = compute_chi(p, r, scheme, true);
        double vu = 1.0 + p.eval_v(r) / p.eval_u(r);
        if ((p.R - eps) / (chi * vu) >= 1.0) return eps;
    }
    return std::nullopt;
}

double bilateral_residual(const GridFn& x, const ProblemSpec& p,
                          const fracops::ResidualBand& band) {
    return fracops::bilateral_residual(
        x, p.mu, [&](double t, double xv) { return p.eval_f(t, xv); }, band);
}

}  // namespace sbvp
