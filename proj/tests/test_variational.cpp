#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ovp/errors.hpp"
#include "ovp/variational.hpp"

using namespace ovp;

namespace {

Lagrangian quad_v() {
    return make_lagrangian([](double, double, double v) { return v * v; },
                           [](double, double, double v) { return 2 * v; },
                           [](double, double, double) { return 2.0; }, 2.0, "v^2");
}

Lagrangian quad_vu() {
    return make_lagrangian([](double, double u, double v) { return v * v + u * u; },
                           [](double, double, double v) { return 2 * v; },
                           [](double, double, double) { return 2.0; }, 2.0, "v^2+u^2");
}

ObstaclePair wide_band(double a, double b, int n = 101) {
    return ObstaclePair::from_functions(
        a, b, [](double) { return -10.0; }, [](double) { return 10.0; },
        [](double) { return 0.0; }, [](double) { return 0.0; }, n);
}

}  // namespace

TEST_CASE("functional on closed forms") {
    // linear slope m: J = m^2 (b-a)
    GridFunction lin(0.0, 2.0, {0.0, 1.5, 3.0});
    CHECK(functional(quad_v(), lin) == doctest::Approx(1.5 * 1.5 * 2.0));
    GridFunction flat(0.0, 1.0, {2.0, 2.0, 2.0});
    CHECK(functional(quad_v(), flat) == doctest::Approx(0.0));
    // L = v^2 + u^2, u = x on [0,1]: exact 4/3, midpoint error O(h^2)
    GridFunction ramp = GridFunction::sample(0.0, 1.0, 1001, [](double x) { return x; });
    CHECK(functional(quad_vu(), ramp) == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("functional propagates non-finite evaluations") {
    Lagrangian logv = make_lagrangian(
        [](double, double, double v) { return std::log(v); }, nullptr, nullptr, 1.0,
        "log(v)");
    GridFunction down(0.0, 1.0, {1.0, 0.0});  // slope -1: log(-1) = nan
    CHECK_THROWS_AS(functional(logv, down), NonFiniteError);
}

TEST_CASE("functional quadrature order (Richardson ratio in [3.5, 4.5])") {
    auto prof = [](double x) { return std::sin(3 * x) + 0.5 * x * x; };
    auto F = [&](int n) {
        return functional(quad_vu(), GridFunction::sample(0.0, 1.0, n, prof));
    };
    const double f1 = F(101), f2 = F(201), f4 = F(401);
    const double ratio = (f1 - f2) / (f2 - f4);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("chord slope") {
    GridFunction sq = GridFunction::sample(0.0, 1.0, 1001, [](double x) { return x * x; });
    CHECK(chord_slope(sq, 0.0, 1.0) == doctest::Approx(1.0));
    GridFunction lin(0.0, 1.0, {1.0, 1.5, 2.0});
    CHECK(chord_slope(lin, 0.2, 0.9) == doctest::Approx(1.0));
    GridFunction vee = GridFunction::sample(0.0, 1.0, 1001,
                                            [](double x) { return std::abs(x - 0.5); });
    CHECK(chord_slope(vee, 0.0, 1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(chord_slope(lin, 0.9, 0.2), DegeneratePairError);
}

TEST_CASE("linear_replace") {
    GridFunction lin(0.0, 1.0, {0.0, 0.5, 1.0});
    GridFunction r1 = linear_replace(lin, 0.2, 0.8);
    for (double x : {0.1, 0.3, 0.5, 0.7, 0.9})
        CHECK(r1(x) == doctest::Approx(lin(x)));  // idempotent on lines

    GridFunction sq = GridFunction::sample(0.0, 1.0, 101, [](double x) { return x * x; });
    GridFunction r2 = linear_replace(sq, 0.0, 1.0);
    for (double x : {0.25, 0.5, 0.75}) CHECK(r2(x) == doctest::Approx(x));

    GridFunction sine = GridFunction::sample(0.0, 1.0, 4001,
                                             [](double x) { return std::sin(M_PI * x); });
    GridFunction r3 = linear_replace(sine, 0.25, 0.75);
    CHECK(r3(0.5) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-6));
    // values outside ]s,t[ unchanged, exactly
    for (double x : {0.1, 0.2, 0.8, 0.95}) CHECK(r3(x) == sine(x));
    // derivative inside is the chord slope
    const double k = chord_slope(sine, 0.25, 0.75);
    GridFunction r4 = linear_replace(sine, 0.25, 0.75);
    for (size_t i = 0; i + 1 < r4.size(); ++i) {
        const double mid = 0.5 * (r4.node(i) + r4.node(i + 1));
        if (mid > 0.25 && mid < 0.75)
            CHECK(r4.cell_slope(i) == doctest::Approx(k).epsilon(1e-9));
    }
}

TEST_CASE("clip_to_admissible") {
    ObstaclePair band = ObstaclePair::from_functions(
        0.0, 1.0, [](double) { return 0.0; }, [](double) { return 1.0; },
        [](double) { return 0.0; }, [](double) { return 0.0; }, 51);

    GridFunction inside(0.0, 1.0, {0.5, 0.5, 0.5});
    GridFunction c1 = clip_to_admissible(inside, band);
    for (double x : {0.1, 0.5, 0.9}) CHECK(c1(x) == doctest::Approx(0.5));

    GridFunction below(0.0, 1.0, {-1.0, -1.0, -1.0});
    GridFunction c2 = clip_to_admissible(below, band);
    for (double x : {0.0, 0.5, 1.0}) CHECK(c2(x) == doctest::Approx(0.0));

    GridFunction steep = GridFunction::sample(0.0, 1.0, 2,
                                              [](double x) { return 2 * x - 0.5; });
    GridFunction c3 = clip_to_admissible(steep, band);
    CHECK(c3(0.1) == doctest::Approx(0.0));
    CHECK(c3(0.25) == doctest::Approx(0.0));
    CHECK(c3(0.5) == doctest::Approx(0.5));
    CHECK(c3(0.75) == doctest::Approx(1.0));
    CHECK(c3(0.9) == doctest::Approx(1.0));

    // idempotent
    GridFunction c4 = clip_to_admissible(c3, band);
    for (size_t i = 0; i < c3.size(); ++i) CHECK(c4(c3.node(i)) == doctest::Approx(c3.value(i)));
}

TEST_CASE("clip monotone: w1 <= w2 implies clip(w1) <= clip(w2)") {
    ObstaclePair band = ObstaclePair::from_functions(
        0.0, 1.0, [](double x) { return std::sin(3 * x) - 0.5; },
        [](double x) { return std::cos(2 * x) + 0.8; }, nullptr, nullptr, 51);
    GridFunction w1 = GridFunction::sample(0.0, 1.0, 41,
                                           [](double x) { return std::sin(9 * x); });
    GridFunction w2 = GridFunction::sample(0.0, 1.0, 41,
                                           [](double x) { return std::sin(9 * x) + 0.3; });
    GridFunction c1 = clip_to_admissible(w1, band);
    GridFunction c2 = clip_to_admissible(w2, band);
    for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        CHECK(c1(x) <= c2(x) + 1e-12);
    }
}

TEST_CASE("clip result is admissible at every node including inserted ones") {
    ObstaclePair band = ObstaclePair::from_functions(
        0.0, 1.0, [](double x) { return 0.3 * std::sin(7 * x) - 0.2; },
        [](double x) { return 0.3 * std::sin(7 * x) + 0.25; }, nullptr, nullptr, 101);
    GridFunction w = GridFunction::sample(0.0, 1.0, 57,
                                          [](double x) { return std::cos(11 * x); });
    GridFunction c = clip_to_admissible(w, band);
    for (size_t i = 0; i < c.size(); ++i) {
        const double x = c.node(i);
        CHECK(c.value(i) >= band.f()(x) - 1e-10);
        CHECK(c.value(i) <= band.g()(x) + 1e-10);
    }
    CHECK(c.size() > w.size());  // crossings actually inserted
}

TEST_CASE("A1 and A2 checks") {
    GridFunction zero(0.0, 1.0, {0.0, 0.0, 0.0});
    CHECK(check_A1(zero, 0, 1, -1, 1));
    GridFunction two(0.0, 1.0, {0.0, 2.0, 0.0});
    CHECK_FALSE(check_A1(two, 0, 1, -1, 1));

    GridFunction lin(0.0, 1.0, {0.0, 0.5, 1.0});
    CHECK_FALSE(check_A2(lin, quad_v(), 0.5));  // energy 1 > (b-a)/2
    GridFunction flat(0.0, 1.0, {1.0, 1.0});
    CHECK(check_A2(flat, quad_v(), 0.0));  // zero energy
}

TEST_CASE("A3 detects a perturbed non-minimizer and passes a minimizer") {
    // straight line with wide obstacles minimizes J = int v^2
    ProblemSpec spec(0.0, 1.0, 0.0, 1.0, quad_v(), wide_band(0.0, 1.0, 201), 201);
    SolveResult sol = solve(spec);
    REQUIRE(sol.converged);

    A3Plan plan;
    plan.delta0 = 0.5;
    plan.scales = 6;
    plan.pairs_per_scale = 40;
    A3Report ok = check_A3(sol.u, spec.lagrangian, TwoArgModulus::zero(), plan);
    CHECK(ok.violations.empty());
    CHECK(ok.min_slack >= -ok.tol_quad);

    GridFunction bad = sol.u;
    bad.value(100) += 0.1;
    A3Report caught = check_A3(bad, spec.lagrangian, TwoArgModulus::zero(), plan);
    CHECK(caught.violations.size() > 0);
}

TEST_CASE("linear_replace is idempotent") {
    GridFunction sine = GridFunction::sample(0.0, 1.0, 501,
                                             [](double x) { return std::sin(5 * x); });
    GridFunction once = linear_replace(sine, 0.21, 0.77);
    GridFunction twice = linear_replace(once, 0.21, 0.77);
    REQUIRE(once.size() == twice.size());
    for (size_t i = 0; i < once.size(); ++i)
        CHECK(twice.value(i) == doctest::Approx(once.value(i)).epsilon(1e-14));
}

TEST_CASE("A3 beyond-delta0 diagnostic pairs are reported separately") {
    ProblemSpec spec(0.0, 1.0, 0.0, 1.0, quad_v(), wide_band(0.0, 1.0, 201), 201);
    SolveResult sol = solve(spec);
    REQUIRE(sol.converged);
    A3Plan plan;
    plan.delta0 = 0.1;
    plan.scales = 3;
    plan.pairs_per_scale = 10;
    plan.include_beyond_delta0 = true;
    A3Report rep = check_A3(sol.u, spec.lagrangian, TwoArgModulus::zero(), plan);
    CHECK(rep.beyond_pairs > 0);
    // a true minimizer also satisfies the inequality at wide pairs
    CHECK(rep.beyond_min_slack >= -rep.tol_quad);
    CHECK(rep.pairs_checked == 30);  // verdict pairs exclude the wide ones
}

TEST_CASE("infeasible specs rejected at construction") {
    CHECK_THROWS_AS(ProblemSpec(0.0, 1.0, -11.0, 0.0, quad_v(), wide_band(0.0, 1.0), 11),
                    InfeasibleSpecError);
    CHECK_THROWS_AS(ObstaclePair::from_functions(
                        0, 1, [](double) { return 1.0; }, [](double) { return 0.0; },
                        nullptr, nullptr, 11),
                    InfeasibleSpecError);
}
