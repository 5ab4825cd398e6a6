#include <doctest.h>

#include <cmath>
#include <random>

#include "stochwave/errors.hpp"
#include "stochwave/weights.hpp"

using namespace stochwave;

TEST_CASE("closed-form values")
{
    WeightParams p;
    p.xstar = 1.5;
    p.beta = 0.5;
    p.mconst = 10;
    p.T = 2;
    p.lambda = 0.1;
    CHECK(eval_weights(p, 0.0, 0.0).phi == doctest::Approx(7.75));
    CHECK(eval_weights(p, p.xstar, p.T + 1).phi == doctest::Approx(p.mconst));

    const WeightValues w = eval_weights(p, 0.3, 0.8);
    CHECK(w.varphi == doctest::Approx(std::exp(p.lambda * w.phi)));
    CHECK(w.l == doctest::Approx(p.s * w.varphi));
    CHECK(w.r * w.rho == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w.dphi_dx == doctest::Approx(2 * (0.3 - 1.5)));
    CHECK(w.dphi_dt == doctest::Approx(2 * 0.5 * (3.0 - 0.8)));

    p.s = 0.0;
    const WeightValues z = eval_weights(p, 0.4, 0.4);
    CHECK(z.r == 1.0);
    CHECK(z.rho == 1.0);
}

TEST_CASE("properties over random points")
{
    WeightParams p;
    p.T = 3.5;
    p.mconst = 10;
    p.lambda = 0.2;
    p.s = 3;
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> ux(0.0, 1.0), ut(0.0, p.T + 0.01);
    for (int i = 0; i < 1000; ++i) {
        const double x = ux(gen), t = ut(gen);
        const WeightValues w = eval_weights(p, x, t);
        CHECK(w.r * w.rho == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(w.dphi_dt > 0.0);
        CHECK(w.dphi_dx < 0.0);
        // phi grows with |x - x*| and shrinks with |t - (T+1)|
        CHECK(weight_phi(p, x * 0.5, t) > w.phi);
        CHECK(weight_phi(p, x, t * 0.5) < w.phi);
    }
}

TEST_CASE("overflow is an error carrying the exponent")
{
    WeightParams p;
    p.mconst = 10;
    p.lambda = 1;
    p.s = 1;
    try {
        eval_weights(p, 0.0, 1.0);
        FAIL("expected WeightOverflow");
    } catch (const WeightOverflow& e) {
        CHECK(e.exponent() > max_exponent());
    }
    CHECK_THROWS_AS(checked_exp(800.0), WeightOverflow);
    CHECK(checked_exp(700.0) == doctest::Approx(std::exp(700.0)));
}

TEST_CASE("parameter validation")
{
    WeightParams p;
    CHECK_NOTHROW(p.validate());
    p.beta = 1.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.xstar = 1.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.epsilon = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("admissibility")
{
    WeightParams p;
    p.xstar = 1.5;
    p.beta = 0.5;
    p.T = 3.0;
    const Grid g3(9, 100, 3.0);
    CHECK(check_admissible(p, g3).t_margin == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_FALSE(check_admissible(p, g3).t_condition);
    p.T = 3.1;
    CHECK(check_admissible(p, Grid(9, 100, 3.1)).t_condition);

    p.s = 100;
    p.epsilon = 1;
    const Grid g(99, 10, p.T);
    const AdmissibilityReport a = check_admissible(p, g);
    CHECK(a.sdx_value == doctest::Approx(1.0));
    CHECK(a.sdx_condition);

    // dt = 0.001, dx = 0.01, epsilon = 0.5
    p.s = 1;
    p.epsilon = 0.5;
    p.T = 1.0;
    const AdmissibilityReport b = check_admissible(p, Grid(99, 1000, 1.0));
    CHECK(b.dt_value == doctest::Approx(20.0));
    CHECK_FALSE(b.dt_condition);
    CHECK_FALSE(b.overall);

    // everything satisfied
    WeightParams q;
    q.T = 3.5;
    q.mconst = 10;
    q.s = 8;
    q.lambda = 0.05;
    const AdmissibilityReport c = check_admissible(q, Grid(15, 1792, 3.5));
    CHECK(c.t_condition);
    CHECK(c.sdx_condition);
    CHECK(c.dt_condition);
    CHECK(c.phi_positive);
    CHECK(c.phi_min == doctest::Approx(0.125));
    CHECK(c.overall);

    q.mconst = 9;
    const AdmissibilityReport d = check_admissible(q, Grid(15, 1792, 3.5));
    CHECK_FALSE(d.phi_positive);
    CHECK_FALSE(d.overall);
}

namespace {

std::vector<Grid> halving(int M0, int levels, double T, double dt_over_dx)
{
    std::vector<Grid> out;
    int M = M0;
    for (int i = 0; i < levels; ++i) {
        out.emplace_back(M, static_cast<int>(std::lround(T * (M + 1) / dt_over_dx)), T);
        M = 2 * M + 1;
    }
    return out;
}

}  // namespace

TEST_CASE("order estimates")
{
    WeightParams p;
    p.mconst = 0;
    p.T = 1;
    const auto levels = halving(15, 3, 1.0, 1.0);
    for (AsymptoticExpr e : {AsymptoticExpr::RAxDxRho, AsymptoticExpr::AxDxRAxDxRho}) {
        const OrderEstimate est = estimate_order(e, p, levels);
        CHECK(est.order >= 1.8);
        CHECK(est.order <= 2.2);
        CHECK(est.residuals.size() == 3);
    }
    for (AsymptoticExpr e : {AsymptoticExpr::AtDtRAxDxRho, AsymptoticExpr::AxDxRDtRho}) {
        const OrderEstimate est = estimate_order(e, p, levels);
        CHECK(est.order >= 0.8);
        CHECK(est.order <= 2.2);
    }
}

TEST_CASE("order estimate preconditions")
{
    WeightParams p;
    p.mconst = 0;
    const auto levels = halving(15, 3, 1.0, 1.0);
    CHECK_THROWS_AS(estimate_order(AsymptoticExpr::RAxDxRho, p, {levels[0], levels[1]}),
                    InvalidArgument);
    CHECK_THROWS_AS(estimate_order(AsymptoticExpr::RAxDxRho, p, {levels[0], levels[2], levels[1]}),
                    InvalidArgument);
    // mixed expressions need dt tied to dx
    const std::vector<Grid> loose{Grid(15, 16, 1.0), Grid(31, 16, 1.0), Grid(63, 16, 1.0)};
    CHECK_THROWS_AS(estimate_order(AsymptoticExpr::AtDtRAxDxRho, p, loose), InvalidArgument);
    p.s = 100;
    CHECK_THROWS_AS(estimate_order(AsymptoticExpr::RAxDxRho, p, levels), InvalidArgument);
    p.s = 0;
    CHECK_THROWS_AS(estimate_order(AsymptoticExpr::RAxDxRho, p, levels), DegenerateOrder);
}

TEST_CASE("expression ids round-trip")
{
    for (AsymptoticExpr e : all_asymptotic_exprs())
        CHECK(parse_asymptotic_expr(to_string(e)) == e);
    CHECK(to_string(AsymptoticExpr::AxDxRDtRho) == "AxDx_r_Dt_rho");
    CHECK_FALSE(parse_asymptotic_expr("x").has_value());
}
