#include "sbvp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbvp/errors.hpp"
#include "sbvp/kern.hpp"

namespace sbvp {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void SolverConfig::validate() const {
    if (grid_n < 5 || grid_n % 2 == 0)
        throw ConfigError("SolverConfig: grid_n must be odd and >= 5");
    if (!(tol_fp > 0.0) || !(tol_seq > 0.0))
        throw ConfigError("SolverConfig: tolerances must be positive");
    if (!(omega > 0.0) || !(omega <= 1.0))
        throw ConfigError("SolverConfig: omega must lie in (0,1]");
    if (max_picard < 1 || max_stages < 1)
        throw ConfigError("SolverConfig: iteration/stage caps must be >= 1");
    if (m0 < 0) throw ConfigError("SolverConfig: m0 must be >= 0");
    if (!(m_factor > 1.0)) throw ConfigError("SolverConfig: m_factor must be > 1");
    row_scheme.validate();
}

double clamp_m(double xval, std::int64_t m, double R) {
    if (m < 1) throw ConfigError("clamp_m: m must be >= 1");
    const double inv = 1.0 / double(m);
    if (!(R > inv)) throw ConfigError("clamp_m: requires R > 1/m");
    return std::min(std::max(xval + inv, inv), R);
}

std::vector<double> apply_T(const std::vector<double>& x_half, std::int64_t m,
                            const ProblemSpec& p, const RowQuadrature& rows) {
    const std::size_t h = rows.half_nodes.size();
    if (x_half.size() != h)
        throw ConfigError("apply_T: profile/plan size mismatch");
    const double inv = 1.0 / double(m);
    if (!(p.R > inv)) throw ConfigError("apply_T: requires R > 1/m");

    std::vector<double> out(h, 0.0);
    std::vector<double> fv;
    for (std::size_t i = 0; i + 1 < h; ++i) {
        const auto& ns = rows.nodes[i];
        const auto& ws = rows.weights[i];
        fv.resize(ns.size());
        for (std::size_t j = 0; j < ns.size(); ++j) {
            double xq = interp_local(rows.half_nodes, x_half, ns[j]);
            double z = std::min(std::max(xq + inv, inv), p.R);
            fv[j] = p.eval_f(ns[j], z);
        }
        out[i] = kern::dot(ws.data(), fv.data(), fv.size());
    }
    out[h - 1] = 0.0;
    return out;
}

FixedPointResult fixed_point_m(std::int64_t m, const ProblemSpec& p,
                               const SolverConfig& cfg,
                               const std::vector<double>& x0,
                               const RowQuadrature& rows) {
    FixedPointResult res;
    res.x = x0;
    double om = cfg.omega;
    const std::size_t h = x0.size();

    std::vector<double> f(h), xprev, fprev, xn(h);
    double best = std::numeric_limits<double>::infinity();
    double last_defect = std::numeric_limits<double>::infinity();
    int noncontract = 0, mono = 0;

    for (int it = 1; it <= cfg.max_picard; ++it) {
        std::vector<double> tx = apply_T(res.x, m, p, rows);
        kern::axpby(1.0, tx.data(), -1.0, res.x.data(), f.data(), h);
        double defect = kern::max_abs(f.data(), h);
        res.defect_history.push_back(defect);
        res.iterations = it;
        res.defect = defect;
        res.omega_final = om;
        if (defect <= cfg.tol_fp) {
            res.converged = true;
            return res;
        }
        if (defect < best * 0.999) {
            best = defect;
            noncontract = 0;
        } else if (++noncontract >= 50) {
            res.anderson_engaged = true;
        }
        if (defect > last_defect * 1.0001) {
            om = std::max(om * 0.5, 1.0 / 1024.0);
            mono = 0;
        } else if (++mono >= 5) {
            om = std::min(om * 2.0, 1.0);
            mono = 0;
        }
        if (res.anderson_engaged && !xprev.empty()) {
            // two-term extrapolation: secant step along the residual change
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < h; ++i) {
                double df = f[i] - fprev[i];
                num += df * f[i];
                den += df * df;
            }
            double g = den > 0.0 ? num / den : 0.0;
            for (std::size_t i = 0; i < h; ++i) {
                double df = f[i] - fprev[i];
                xn[i] = res.x[i] + om * f[i] - g * ((res.x[i] - xprev[i]) + om * df);
            }
        } else {
            kern::axpby(1.0, res.x.data(), om, f.data(), xn.data(), h);
        }
        xprev = res.x;
        fprev = f;
        res.x = xn;
        last_defect = defect;
    }
    return res;  // converged == false, defect history carried
}

double envelope_lo_factor1(double t, const ProblemSpec& p, double gamma_R) {
    return gamma_R * (1.0 - std::pow(std::fabs(t), p.mu.mu)) /
           gamma_fn(p.mu.mu + 1.0);
}

double envelope_lo_paper(double t, const ProblemSpec& p, double gamma_R) {
    return 2.0 * envelope_lo_factor1(t, p, gamma_R);
}

SolutionReport solve(const ProblemSpec& p, const SolverConfig& cfg) {
    cfg.validate();
    SolutionReport rep;

    QuadratureScheme hyp = cfg.row_scheme;
    hyp.grading_exponent = 10.0;
    hyp.panels = std::max(hyp.panels, 64);

    if (!cfg.skip_hypotheses) {
        p.spot_check_shape(cfg.seed);
        rep.hypothesis = check_A1(p, hyp, cfg.seed);
        check_A2(p, hyp, rep.hypothesis);
        rep.hypotheses_checked = true;
        rep.hypotheses_ok = rep.hypothesis.passed();
    } else {
        rep.status_note += "hypothesis checks skipped by config; ";
    }

    rep.gamma_R = p.eval_gamma(p.R);
    double ub = p.R - 2.0 * rep.gamma_R / gamma_fn(p.mu.mu + 1.0);
    std::optional<double> eps;
    if (rep.hypotheses_checked && rep.hypothesis.a2_ratio_ok)
        eps = select_epsilon(p, hyp);
    if (eps) {
        rep.epsilon = *eps;
        rep.epsilon_verified = true;
        rep.hypothesis.epsilon = eps;
    } else {
        rep.epsilon = 0.5 * std::max(ub, 0.0);
        rep.status_note += "epsilon unverified (hypotheses not established); ";
    }

    // grid and quadrature plan
    GridFn grid;
    grid.nodes = uniform_symmetric_nodes(cfg.grid_n);
    grid.values.assign(cfg.grid_n, 0.0);
    const std::size_t c = cfg.grid_n / 2;
    std::vector<double> half(grid.nodes.begin() + c, grid.nodes.end());
    QuadratureScheme rs = cfg.row_scheme;
    rs.grading_exponent = default_grading(p.mu.mu);
    RowQuadrature rows = build_row_quadrature(half, p.mu, rs);

    // initial iterate: factor-1 lower envelope
    std::vector<double> x(half.size());
    for (std::size_t i = 0; i < half.size(); ++i)
        x[i] = envelope_lo_factor1(half[i], p, std::max(rep.gamma_R, 0.0));

    std::int64_t m = cfg.m0 > 0
                         ? cfg.m0
                         : std::int64_t(std::ceil(1.0 / rep.epsilon)) + 1;
    if (!(p.R > 1.0 / double(m)))
        throw ConfigError("solve: R <= 1/m0, clamp undefined");
    if (1.0 / double(m) >= rep.epsilon)
        rep.status_note += "warning: 1/m0 >= epsilon; ";

    std::vector<double> prev;
    bool all_converged = true;
    for (int k = 0; k < cfg.max_stages; ++k) {
        FixedPointResult fr = fixed_point_m(m, p, cfg, x, rows);
        StageInfo st;
        st.m = m;
        st.iterations = fr.iterations;
        st.defect = fr.defect;
        st.converged = fr.converged;
        st.sup_diff_prev = prev.empty() ? kNaN
                                        : kern::max_abs_diff(fr.x.data(),
                                                             prev.data(),
                                                             prev.size());
        rep.stages.push_back(st);
        rep.m_final = m;
        rep.fp_defect = fr.defect;
        prev = x = fr.x;
        if (!fr.converged) {
            all_converged = false;
            rep.status_note += "stage m=" + std::to_string(m) +
                               " hit the iteration cap; ";
            break;
        }
        if (k >= 1 && st.sup_diff_prev < cfg.tol_seq) break;
        double next = double(m) * cfg.m_factor;
        m = next > 9.0e18 ? std::int64_t(9.0e18) : std::int64_t(std::llround(next));
        if (m <= rep.stages.back().m) m = rep.stages.back().m + 1;
    }
    rep.converged = all_converged;

    // assemble the symmetric grid function
    for (std::size_t i = 0; i < half.size(); ++i) {
        grid.values[c + i] = x[i];
        grid.values[c - i] = x[i];
    }
    grid.values.front() = 0.0;
    grid.values.back() = 0.0;
    grid.symmetric = true;
    grid.validate();
    rep.x = grid;

    // diagnostics
    rep.symmetry_defect = rep.x.max_symmetry_defect();
    double posmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < rep.x.size(); ++i)
        posmin = std::min(posmin, rep.x.values[i]);
    rep.positivity_margin = posmin;

    double lo1 = std::numeric_limits<double>::infinity();
    double lo2 = std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rep.x.size(); ++i) {
        double t = rep.x.nodes[i];
        lo1 = std::min(lo1, rep.x.values[i] - envelope_lo_factor1(t, p, rep.gamma_R));
        lo2 = std::min(lo2, rep.x.values[i] - envelope_lo_paper(t, p, rep.gamma_R));
        hi = std::min(hi, (p.R - rep.epsilon) - rep.x.values[i]);
    }
    rep.envelope_lo_margin = lo1;
    rep.envelope_lo_paper_margin = lo2;
    rep.envelope_hi_margin = hi;

    // integral-equation residual against the unclamped f through the same rows
    {
        double r = 0.0;
        bool valid = true;
        std::vector<double> fv;
        for (std::size_t i = 0; i + 1 < half.size() && valid; ++i) {
            const auto& ns = rows.nodes[i];
            const auto& ws = rows.weights[i];
            fv.resize(ns.size());
            for (std::size_t j = 0; j < ns.size(); ++j) {
                double xq = interp_local(half, x, ns[j]);
                if (xq <= 0.0) xq = std::numeric_limits<double>::min();
                try {
                    fv[j] = p.eval_f(ns[j], xq);
                } catch (const EvalDomainError&) {
                    valid = false;
                    break;
                }
            }
            if (!valid) break;
            double ti = kern::dot(ws.data(), fv.data(), fv.size());
            r = std::max(r, std::fabs(ti - x[i]));
        }
        rep.integral_residual = valid ? r : kNaN;
        if (!valid)
            rep.status_note += "unclamped residual undefined (f domain error); ";
    }

    // independent Caputo-route residual (informational)
    try {
        rep.caputo_residual = bilateral_residual(rep.x, p, rep.caputo_band);
    } catch (const std::exception&) {
        rep.caputo_residual = kNaN;
        rep.status_note += "caputo residual unavailable; ";
    }

    return rep;
}

}  // namespace sbvp
