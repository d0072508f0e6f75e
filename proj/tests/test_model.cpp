#include <cmath>

#include "doctest.h"
#include "sbvp/errors.hpp"
#include "sbvp/model.hpp"
#include "sbvp/problem_io.hpp"

using namespace sbvp;

namespace {

QuadratureScheme hyp_scheme() {
    QuadratureScheme s;
    s.grading_exponent = 10.0;
    s.panels = 64;
    return s;
}

}  // namespace

TEST_CASE("example problem: shape spot checks pass") {
    ProblemSpec p = example_problem(1e-16);
    CHECK_NOTHROW(p.spot_check_shape());
    CHECK(p.eval_q(0.0) == doctest::Approx(1e-16));
    CHECK(p.eval_u(1.0) == doctest::Approx(1.0));
    CHECK(p.eval_v(1.0) == doctest::Approx(2.0));
    CHECK(p.eval_gamma(1.0) == doctest::Approx(1e-16));
}

TEST_CASE("check_A1: example integrals reproduce the printed constants") {
    ProblemSpec p = example_problem(1.0);
    auto rep = check_A1(p, hyp_scheme(), 1);
    CHECK(rep.a1_majorant_ok);
    CHECK_FALSE(rep.a1_integral_q_divergent);
    // 2.12926 x lambda
    CHECK(rep.a1_integral_q == doctest::Approx(2.1292579444).epsilon(1e-5));
    CHECK_FALSE(rep.a1_integral_qu_divergent);
    // 12.8761 x lambda / c^0.9
    CHECK(rep.a1_integral_qu.at(1.0) ==
          doctest::Approx(12.8760829511).epsilon(1e-4));
    CHECK(rep.a1_integral_qu.at(0.1) ==
          doctest::Approx(12.8760829511 * std::pow(0.1, -0.9)).epsilon(1e-4));
    CHECK(rep.a1_integral_qu.at(10.0) ==
          doctest::Approx(12.8760829511 * std::pow(10.0, -0.9)).epsilon(1e-4));
    CHECK(rep.a1_passed());
}

TEST_CASE("check_A1: lambda scales the integrals linearly") {
    ProblemSpec p = example_problem(0.37);
    auto rep = check_A1(p, hyp_scheme(), 1);
    CHECK(rep.a1_integral_q == doctest::Approx(0.37 * 2.1292579444).epsilon(1e-5));
}

TEST_CASE("check_A1: non-integrable q flagged, not thrown") {
    // q = (1-|t|)^-1.5 with mu = 1.5: combined exponent -1
    auto mk = [](const char* src) { return expr::parse(src); };
    expr::Env params;
    params.bind("R", 1.0);
    ProblemSpec p2(FracOrder(1.5), mk("1/(1-abs(t))^1.5 * (1/x^0.5)"),
                   mk("1/(1-abs(t))^1.5"), mk("1/x^0.5"), mk("x"),
                   mk("1/r^0.5"), 1.0, params);
    auto rep = check_A1(p2, hyp_scheme(), 1);
    CHECK(rep.a1_integral_q_divergent);
    CHECK_FALSE(rep.a1_passed());
}

TEST_CASE("compute_chi: printed value and scaling laws") {
    ProblemSpec p = example_problem(1.0);
    auto s = hyp_scheme();
    // chi_1 = 11.8713 (paper factor-2 form, lambda = 1, r = 1)
    double chi1 = compute_chi(p, 1.0, s, true);
    CHECK(chi1 == doctest::Approx(11.8712764951).epsilon(1e-4));
    // r-scaling law: chi_r = chi_1 * r^0.81
    double chi2 = compute_chi(p, 2.0, s, true);
    CHECK(chi2 / chi1 == doctest::Approx(std::pow(2.0, 0.81)).epsilon(1e-5));
    // lambda-scaling: chi(2 lambda)/chi(lambda) = 2^(1-0.9) = 2^0.1
    ProblemSpec p2 = example_problem(2.0);
    double chi1b = compute_chi(p2, 1.0, s, true);
    CHECK(chi1b / chi1 == doctest::Approx(std::pow(2.0, 0.1)).epsilon(1e-6));
    // the corrected factor-1 variant: u scales by 2^0.9
    double chi1c = compute_chi(p, 1.0, s, false);
    CHECK(chi1c / chi1 == doctest::Approx(std::pow(2.0, 0.9)).epsilon(1e-6));
    // q == 0 gives 0
    expr::Env params;
    params.bind("R", 1.0);
    ProblemSpec pz(FracOrder(1.9), expr::parse("0*t*x"), expr::parse("0*t"),
                   expr::parse("1/x^0.9"), expr::parse("x"),
                   expr::parse("1/r^0.9"), 1.0, params);
    CHECK(compute_chi(pz, 1.0, s, true) == doctest::Approx(0.0));
}

TEST_CASE("check_A2: the example's hypothesis gate") {
    auto s = hyp_scheme();
    {
        ProblemSpec p = example_problem(1e-16);
        auto rep = check_A1(p, s, 1);
        check_A2(p, s, rep);
        CHECK(rep.r_bound_ok);
        CHECK(rep.a2_floor_ok);
        CHECK(rep.a2_ratio == doctest::Approx(1.117844321).epsilon(1e-3));
        CHECK(rep.a2_ratio_ok);
        CHECK(rep.passed());
        // printed formula R^0.19/(11.8713 (1+2R^1.9) lambda^0.1)
        double printed = 1.0 / (11.8712764951 * 3.0 * std::pow(1e-16, 0.1));
        CHECK(rep.a2_ratio == doctest::Approx(printed).epsilon(1e-4));
    }
    {
        ProblemSpec p = example_problem(1e-12);
        auto rep = check_A1(p, s, 1);
        check_A2(p, s, rep);
        CHECK(rep.a2_ratio == doctest::Approx(0.4450218399).epsilon(1e-3));
        CHECK_FALSE(rep.a2_ratio_ok);
        CHECK_FALSE(rep.passed());
    }
    {
        // gamma_R bound: lambda just under Gamma(2.9)/2 passes the R-bound,
        // just over fails it
        ProblemSpec lo = example_problem(0.91);
        auto rl = check_A1(lo, s, 1);
        check_A2(lo, s, rl);
        CHECK(rl.r_bound_ok);
        ProblemSpec hi = example_problem(0.92);
        auto rh = check_A1(hi, s, 1);
        check_A2(hi, s, rh);
        CHECK_FALSE(rh.r_bound_ok);
    }
}

TEST_CASE("select_epsilon: synthetic closed form") {
    // gamma_r constant, u and v constant: chi_r = chi (constant), the
    // inequality reduces to R - eps >= chi * 2, so eps* = R - 2 chi.
    expr::Env params;
    params.bind("R", 1.0);
    ProblemSpec p(FracOrder(1.9), expr::parse("0.05*(1+0*t+0*x)"),
                  expr::parse("0.05 + 0*t"), expr::parse("1 + 0*x"),
                  expr::parse("1 + 0*x"), expr::parse("0.05 + 0*r"), 1.0,
                  params);
    auto s = hyp_scheme();
    double chi = compute_chi(p, 1.0, s, true);
    auto eps = select_epsilon(p, s);
    REQUIRE(eps.has_value());
    double ub = 1.0 - 2.0 * 0.05 / gamma_fn(2.9);
    double exact = 1.0 - 2.0 * chi;
    // scan returns the largest passing candidate on the geometric grid
    CHECK(*eps <= std::min(ub, exact) + 1e-12);
    CHECK(*eps >= std::min(ub, exact) * std::pow(1e-6, 1.0 / 63.0) - 1e-12);
    // self-consistency on substitution
    double chi_e = compute_chi(p, 1.0 + *eps, s, true);
    double vu = 1.0 + p.eval_v(1.0 + *eps) / p.eval_u(1.0 + *eps);
    CHECK((1.0 - *eps) / (chi_e * vu) >= 1.0);
}

TEST_CASE("select_epsilon: example problem and failing gate") {
    auto s = hyp_scheme();
    ProblemSpec p = example_problem(1e-16);
    auto eps = select_epsilon(p, s);
    REQUIRE(eps.has_value());
    CHECK(*eps > 0.0);
    CHECK(*eps <= 1.0);
    // returned value re-satisfies the inequality
    double chi_e = compute_chi(p, 1.0 + *eps, s, true);
    double vu = 1.0 + p.eval_v(1.0 + *eps) / p.eval_u(1.0 + *eps);
    CHECK((1.0 - *eps) / (chi_e * vu) >= 1.0);
    // ratio <= 1 gives none
    ProblemSpec bad = example_problem(1e-12);
    CHECK_FALSE(select_epsilon(bad, s).has_value());
}

TEST_CASE("hypothesis checks are deterministic given the seed") {
    ProblemSpec p = example_problem(1e-16);
    auto s = hyp_scheme();
    auto r1 = check_A1(p, s, 42);
    auto r2 = check_A1(p, s, 42);
    CHECK(r1.a1_integral_q == r2.a1_integral_q);
    CHECK(r1.a1_worst_violation == r2.a1_worst_violation);
    CHECK(r1.seed == 42);
}

TEST_CASE("problem file round trip") {
    ProblemSpec p = example_problem(1e-16);
    std::string text = serialize_problem(p);
    ProblemSpec q = parse_problem_text(text);
    CHECK(q.mu.mu == p.mu.mu);
    CHECK(q.R == p.R);
    CHECK(expr::structurally_equal(q.f, p.f));
    CHECK(expr::structurally_equal(q.gamma_r, p.gamma_r));
    CHECK(q.eval_f(0.3, 0.7) == p.eval_f(0.3, 0.7));
}

TEST_CASE("problem file schema errors name the field") {
    CHECK_THROWS_AS(parse_problem_text("[problem]\nmu = 2.5\nR = 1\nf = x\nq = "
                                       "1\nu = 1\nv = x\ngamma_r = 1"),
                    SchemaError);
    try {
        parse_problem_text(
            "[problem]\nmu = 2.5\nR = 1\nf = x\nq = 1\nu = 1\nv = x\ngamma_r = 1");
    } catch (const SchemaError& e) {
        CHECK(e.field() == "mu");
    }
    CHECK_THROWS_AS(parse_problem_text("[problem]\nmu = 1.9\nR = 1"), SchemaError);
    CHECK_THROWS_AS(parse_problem_text("[problem]\nmu = 1.9\nR = 1\nf = x+\nq = "
                                       "1\nu = 1\nv = x\ngamma_r = 1"),
                    SchemaError);
    CHECK_THROWS_AS(parse_problem_text("[problem]\nmu = 1.9\nR = 1\nf = w\nq = "
                                       "1\nu = 1\nv = x\ngamma_r = 1"),
                    SchemaError);
}
