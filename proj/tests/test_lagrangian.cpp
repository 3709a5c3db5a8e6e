#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ovp/errors.hpp"
#include "ovp/lagrangian.hpp"

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

}  // namespace

TEST_CASE("evaluate basics") {
    CHECK(evaluate(quad_v(), 0, 0, 3) == doctest::Approx(9.0));
    CHECK(evaluate(quad_vu(), 0.5, 2, 1) == doctest::Approx(5.0));
    Lagrangian arc = make_lagrangian(
        [](double, double, double v) { return std::sqrt(1 + v * v); }, nullptr, nullptr,
        0.5, "sqrt(1+v^2)");
    CHECK(evaluate(arc, 0, 0, 0) == doctest::Approx(1.0));
    Lagrangian bad = make_lagrangian(
        [](double, double, double v) { return std::log(v); }, nullptr, nullptr, 1, "log(v)");
    CHECK_THROWS_AS(evaluate(bad, 0, 0, -1.0), NonFiniteError);
}

TEST_CASE("finite-difference fallback consistency") {
    Lagrangian fd = make_lagrangian([](double, double u, double v) { return v * v + u * u; },
                                    nullptr, nullptr, 2.0, "fd");
    CHECK(fd.fd_derivatives);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double u = -1.0 + 0.2 * i;
            const double v = -1.0 + 0.2 * j;
            CHECK(fd.eval_v(0, u, v) == doctest::Approx(2 * v).epsilon(1e-6));
            CHECK(fd.eval_vv(0, u, v) == doctest::Approx(2.0).epsilon(1e-4));
        }
}

TEST_CASE("supplied eval_v agrees with central differences of eval") {
    // |eval_v - FD(eval)| <= 1e-6 at step 1e-4 over a 10^3 grid
    Lagrangian L = quad_vu();
    const double step = 1e-4;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            for (int k = 0; k < 10; ++k) {
                const double x = i / 9.0;
                const double u = -1.0 + 2.0 * j / 9.0;
                const double v = -1.0 + 2.0 * k / 9.0;
                const double fd =
                    (L.eval(x, u, v + step) - L.eval(x, u, v - step)) / (2 * step);
                CHECK(std::abs(L.eval_v(x, u, v) - fd) <= 1e-6);
            }
}

TEST_CASE("holder estimate: Lipschitz v^2 on the unit box") {
    CompactBox box{0, 1, -1, 1, -1, 1};
    HolderEstimate est = estimate_holder(quad_v(), box, 350);
    CHECK(est.alpha == doctest::Approx(1.0));
    CHECK(est.C <= 2.2 + 1e-9);
    CHECK(est.C >= 1.8);
    CHECK(holder_certificate_holds(quad_v(), est));
}

TEST_CASE("holder estimate: constant Lagrangian") {
    Lagrangian c = make_lagrangian([](double, double, double) { return 4.2; }, nullptr,
                                   nullptr, 1.0, "const");
    CompactBox box{0, 1, -1, 1, -1, 1};
    HolderEstimate est = estimate_holder(c, box, 100);
    CHECK(est.alpha == doctest::Approx(1.0));
    CHECK(est.C == doctest::Approx(0.0));
}

TEST_CASE("holder estimate: |v|^(1/2) drops to exponent 1/2") {
    Lagrangian r = make_lagrangian(
        [](double, double, double v) { return std::sqrt(std::abs(v)); }, nullptr, nullptr,
        0.1, "sqrt|v|");
    CompactBox box{0, 1, -1, 1, -1, 1};
    HolderEstimate est = estimate_holder(r, box, 350);
    CHECK(est.alpha == doctest::Approx(0.5));
    CHECK(holder_certificate_holds(r, est));
}

TEST_CASE("holder estimate: nested boxes (shared seed)") {
    // kink at v = 1.5 is outside the small box, inside the big one
    Lagrangian k = make_lagrangian(
        [](double, double, double v) { return std::sqrt(std::abs(v - 1.5)); }, nullptr,
        nullptr, 0.1, "sqrt|v-1.5|");
    CompactBox small{0, 1, -1, 1, -1, 1};
    CompactBox big{0, 1, -1, 1, -2, 2};
    HolderEstimate es = estimate_holder(k, small, 350);
    HolderEstimate eb = estimate_holder(k, big, 350);
    CHECK(eb.alpha <= es.alpha);
    CHECK(es.alpha == doctest::Approx(1.0));
    CHECK(eb.alpha == doctest::Approx(0.5));

    // smooth case: same exponent, constant grows with the box
    HolderEstimate qs = estimate_holder(quad_v(), small, 350);
    HolderEstimate qb = estimate_holder(quad_v(), CompactBox{0, 1, -1, 1, -3, 3}, 350);
    CHECK(qb.alpha == doctest::Approx(qs.alpha));
    CHECK(qb.C >= qs.C);
}

TEST_CASE("degenerate box rejected") {
    CompactBox flat{0, 1, -1, 1, 0, 0};
    CHECK_THROWS_AS(estimate_holder(quad_v(), flat, 100), DegenerateBoxError);
}

TEST_CASE("ellipticity check") {
    CompactBox box{0, 1, -1, 1, -1, 1};
    EllipticityCheck ok = check_ellipticity(quad_v(), box, 125);
    CHECK(ok.passes);
    CHECK(ok.observed_min == doctest::Approx(2.0));

    EllipticityCheck ok2 = check_ellipticity(quad_vu(), box, 125);
    CHECK(ok2.passes);
    CHECK(ok2.observed_min == doctest::Approx(2.0));

    Lagrangian quartic = make_lagrangian(
        [](double, double, double v) { return v * v * v * v; },
        [](double, double, double v) { return 4 * v * v * v; },
        [](double, double, double v) { return 12 * v * v; }, 0.1, "v^4");
    EllipticityCheck bad = check_ellipticity(quartic, box, 125);
    CHECK_FALSE(bad.passes);  // L_vv = 12 v^2 vanishes at v = 0
    CHECK(bad.observed_min == doctest::Approx(0.0));
}
