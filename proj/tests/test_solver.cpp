#include <cmath>

#include "doctest.h"
#include "sbvp/errors.hpp"
#include "sbvp/problem_io.hpp"
#include "sbvp/solver.hpp"

using namespace sbvp;

namespace {

// f(t,x) = Gamma(mu+1): solution of the linear problem is 1 - |t|^mu
ProblemSpec constant_problem(double mu, double value) {
    expr::Env params;
    params.bind("R", 10.0);
    params.bind("c0", value);
    return ProblemSpec(FracOrder(mu), expr::parse("c0 + 0*t + 0*x"),
                       expr::parse("c0 + 0*t"), expr::parse("1 + 0*x"),
                       expr::parse("1 + x"), expr::parse("0.01 + 0*r"), 10.0,
                       params);
}

std::vector<double> half_nodes(int n) {
    std::vector<double> v;
    auto nodes = uniform_symmetric_nodes(n);
    v.assign(nodes.begin() + n / 2, nodes.end());
    return v;
}

RowQuadrature plan_for(const ProblemSpec& p, int n) {
    QuadratureScheme rs;
    rs.grading_exponent = default_grading(p.mu.mu);
    rs.panels = 32;
    return build_row_quadrature(half_nodes(n), p.mu, rs);
}

}  // namespace

TEST_CASE("clamp_m: lower, interior, upper") {
    CHECK(clamp_m(-5.0, 10, 1.0) == doctest::Approx(0.1));
    CHECK(clamp_m(0.5, 10, 1.0) == doctest::Approx(0.6));
    CHECK(clamp_m(5.0, 10, 1.0) == 1.0);
    CHECK_THROWS_AS(clamp_m(0.5, 2, 0.4), ConfigError);  // R <= 1/m
    CHECK_THROWS_AS(clamp_m(0.5, 0, 1.0), ConfigError);
}

TEST_CASE("apply_T: x-independent forcing gives the row integral profile") {
    double g = gamma_fn(2.9);
    ProblemSpec p = constant_problem(1.9, g);
    auto rows = plan_for(p, 201);
    std::vector<double> zeros(rows.half_nodes.size(), 0.0);
    std::vector<double> big(rows.half_nodes.size(), 123.0);
    auto a = apply_T(zeros, 7, p, rows);
    auto b = apply_T(big, 7, p, rows);
    for (std::size_t i = 0; i < a.size(); ++i) {
        double exact = 1.0 - std::pow(rows.half_nodes[i], 1.9);
        CHECK(a[i] == doctest::Approx(exact).epsilon(1e-9));
        CHECK(a[i] == b[i]);  // f ignores x entirely
    }
    CHECK(a.back() == 0.0);
}

TEST_CASE("apply_T: upper clamp saturates") {
    // f(t,x) = 1 + x on R = 1: inputs beyond R are indistinguishable
    expr::Env params;
    params.bind("R", 1.0);
    ProblemSpec p(FracOrder(1.5), expr::parse("1 + x + 0*t"),
                  expr::parse("2 + 0*t"), expr::parse("1 + 0*x"),
                  expr::parse("1 + x"), expr::parse("0.01 + 0*r"), 1.0, params);
    auto rows = plan_for(p, 101);
    std::vector<double> x1(rows.half_nodes.size(), 5.0);
    std::vector<double> x2(rows.half_nodes.size(), 1005.0);
    auto a = apply_T(x1, 10, p, rows);
    auto b = apply_T(x2, 10, p, rows);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("fixed_point_m: constant forcing converges immediately") {
    double g = gamma_fn(2.9);
    ProblemSpec p = constant_problem(1.9, g);
    auto rows = plan_for(p, 201);
    SolverConfig cfg;
    cfg.omega = 1.0;  // undamped: constant T reaches its fixed point in one step
    std::vector<double> x0(rows.half_nodes.size(), 0.0);
    auto fr = fixed_point_m(100, p, cfg, x0, rows);
    CHECK(fr.converged);
    CHECK(fr.iterations <= 2);
    CHECK(fr.defect <= cfg.tol_fp);
    for (std::size_t i = 0; i < fr.x.size(); ++i)
        CHECK(fr.x[i] == doctest::Approx(1.0 - std::pow(rows.half_nodes[i], 1.9))
                             .epsilon(1e-8));
}

TEST_CASE("fixed_point_m: zero forcing, zero fixed point") {
    ProblemSpec p = constant_problem(1.5, 0.0);
    auto rows = plan_for(p, 101);
    SolverConfig cfg;
    std::vector<double> x0(rows.half_nodes.size(), 0.0);
    auto fr = fixed_point_m(10, p, cfg, x0, rows);
    CHECK(fr.converged);
    CHECK(fr.iterations == 1);
    for (double v : fr.x) CHECK(v == 0.0);
}

TEST_CASE("solve: manufactured linear problem") {
    double g = gamma_fn(2.9);
    ProblemSpec p = constant_problem(1.9, g);
    SolverConfig cfg;
    cfg.grid_n = 201;
    cfg.skip_hypotheses = true;  // u is constant, A2 ratio is meaningless here
    auto rep = solve(p, cfg);
    CHECK(rep.converged);
    double sup = 0.0;
    for (std::size_t i = 0; i < rep.x.size(); ++i)
        sup = std::max(sup, std::fabs(rep.x.values[i] -
                                      (1.0 - std::pow(std::fabs(rep.x.nodes[i]),
                                                      1.9))));
    CHECK(sup <= 1e-8);
    CHECK(rep.symmetry_defect == 0.0);
    CHECK(rep.integral_residual <= 10.0 * cfg.tol_fp);
    CHECK(rep.x.values.front() == 0.0);
    CHECK(rep.x.values.back() == 0.0);
}

TEST_CASE("solve: classical mu=2 problem") {
    ProblemSpec p = constant_problem(2.0, 1.0);
    SolverConfig cfg;
    cfg.grid_n = 201;
    cfg.skip_hypotheses = true;
    auto rep = solve(p, cfg);
    CHECK(rep.converged);
    double sup = 0.0;
    for (std::size_t i = 0; i < rep.x.size(); ++i) {
        double t = rep.x.nodes[i];
        sup = std::max(sup,
                       std::fabs(rep.x.values[i] - 0.5 * (1.0 - t * t)));
    }
    CHECK(sup <= 1e-8);
    // x(0) = 0.5
    CHECK(rep.x.values[rep.x.center_index()] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("solve: mildly nonlinear problem keeps the residual invariant") {
    // f(t,x) = 1 + x/2 on R = 10: smooth, contractive
    expr::Env params;
    params.bind("R", 10.0);
    ProblemSpec p(FracOrder(1.7), expr::parse("1 + x/2 + 0*t"),
                  expr::parse("1 + 0*t"), expr::parse("1 + 0*x"),
                  expr::parse("6 + x/2"), expr::parse("0.5 + 0*r"), 10.0,
                  params);
    SolverConfig cfg;
    cfg.grid_n = 201;
    cfg.skip_hypotheses = true;
    cfg.m0 = 1000;      // push the clamp shift down quickly
    cfg.m_factor = 32.0;
    cfg.max_stages = 10;
    cfg.tol_seq = 1e-12;
    auto rep = solve(p, cfg);
    CHECK(rep.converged);
    CHECK(rep.integral_residual <= 10.0 * cfg.tol_fp);
    // lower envelope with f >= gamma_R = 0.5
    CHECK(rep.envelope_lo_ok());
    // stage sup-differences decrease across the schedule
    for (std::size_t k = 2; k < rep.stages.size(); ++k)
        CHECK(rep.stages[k].sup_diff_prev <= rep.stages[k - 1].sup_diff_prev);
}

TEST_CASE("solve: the paper example at lambda=1e-16") {
    ProblemSpec p = example_problem(1e-16);
    SolverConfig cfg;
    cfg.grid_n = 401;
    cfg.m0 = std::int64_t(1) << 31;
    cfg.m_factor = 2.0;
    cfg.max_stages = 4;
    cfg.tol_seq = 1e-15;  // run every stage
    auto rep = solve(p, cfg);
    CHECK(rep.converged);
    CHECK(rep.hypotheses_checked);
    CHECK(rep.hypotheses_ok);
    CHECK(rep.epsilon_verified);
    CHECK(rep.fp_defect <= cfg.tol_fp);
    CHECK(rep.symmetry_defect == 0.0);
    CHECK(rep.positivity_margin > 0.0);
    CHECK(rep.envelope_lo_margin >= -1e-12);
    CHECK(rep.envelope_hi_margin >= 0.0);
    CHECK(rep.integral_residual <= 1e-8);
    // x(0) lands on the 5e-9 scale seen from the integral-equation balance
    double x0 = rep.x.values[rep.x.center_index()];
    CHECK(x0 > 1e-9);
    CHECK(x0 < 1e-7);
    // strictly decreasing stage differences past the first
    for (std::size_t k = 2; k < rep.stages.size(); ++k)
        CHECK(rep.stages[k].sup_diff_prev < rep.stages[k - 1].sup_diff_prev);
}

TEST_CASE("solve: determinism across runs") {
    ProblemSpec p = example_problem(1e-16);
    SolverConfig cfg;
    cfg.grid_n = 101;
    cfg.m0 = 1 << 20;
    cfg.max_stages = 2;
    auto r1 = solve(p, cfg);
    auto r2 = solve(p, cfg);
    REQUIRE(r1.x.size() == r2.x.size());
    for (std::size_t i = 0; i < r1.x.size(); ++i)
        CHECK(r1.x.values[i] == r2.x.values[i]);
    CHECK(r1.integral_residual == r2.integral_residual);
}

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    cfg.grid_n = 100;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.grid_n = 101;
    cfg.omega = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.omega = 0.5;
    cfg.m_factor = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
