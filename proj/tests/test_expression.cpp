#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ovp/errors.hpp"
#include "ovp/expression.hpp"

using namespace ovp;

TEST_CASE("arithmetic and precedence") {
    auto e = Expression::parse("1 + 2*3 - 4/2", {});
    CHECK(e.eval({}) == doctest::Approx(5.0));
    auto p = Expression::parse("2^3^2", {});  // right associative
    CHECK(p.eval({}) == doctest::Approx(512.0));
    auto m = Expression::parse("-x^2", {"x"});
    CHECK(m.eval1(3.0) == doctest::Approx(-9.0));
}

TEST_CASE("variables and functions") {
    auto e = Expression::parse("v^2 + u^2", {"x", "u", "v"});
    CHECK(e.eval3(0.0, 2.0, 1.0) == doctest::Approx(5.0));
    auto s = Expression::parse("sin(x) + cos(x)", {"x"});
    CHECK(s.eval1(0.0) == doctest::Approx(1.0));
    auto f = Expression::parse("max(min(x, 2), pow(x, 2))", {"x"});
    CHECK(f.eval1(0.5) == doctest::Approx(0.5));
    auto q = Expression::parse("sqrt(abs(x))", {"x"});
    CHECK(q.eval1(-4.0) == doctest::Approx(2.0));
}

TEST_CASE("unknown identifier rejected") {
    CHECK_THROWS_AS(Expression::parse("v^2 + t", {"x", "u", "v"}), ParseError);
    CHECK_THROWS_AS(Expression::parse("foo(3)", {}), ParseError);
    CHECK_THROWS_AS(Expression::parse("x", {}), ParseError);
}

TEST_CASE("syntax errors carry positions") {
    try {
        Expression::parse("1 + ", {});
        FAIL("expected throw");
    } catch (const ParseError& e) {
        CHECK(e.column >= 4);
    }
    CHECK_THROWS_AS(Expression::parse("(1+2", {}), ParseError);
    CHECK_THROWS_AS(Expression::parse("pow(1)", {}), ParseError);
    CHECK_THROWS_AS(Expression::parse("1 2", {}), ParseError);
}

TEST_CASE("malformed inputs throw ParseError, never crash") {
    const char* bad[] = {"",        "()",      "1 +* 2", "pow(,1)", "min(1)",
                         "x(3)",    "1..2",    "^2",     "abs()",   "2 ** 3",
                         "sin cos", "(((1))",  "1,2",    "foo",     "-"};
    for (const char* s : bad) CHECK_THROWS_AS(Expression::parse(s, {"x"}), ParseError);
}

TEST_CASE("uses_variable inspects the tree") {
    auto e = Expression::parse("v^2 + 1", {"x", "u", "v"});
    CHECK(e.uses_variable("v"));
    CHECK_FALSE(e.uses_variable("u"));
}
