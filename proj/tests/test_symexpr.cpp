#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bilag/errors.hpp"
#include "bilag/parse.hpp"
#include "bilag/symexpr.hpp"
#include "generators.hpp"

using namespace bilag;

namespace {

SymbolTable plane() {
  SymbolTable t;
  t.coordinates = {"x", "y"};
  t.functions["h"] = {"x", "y"};
  return t;
}

ScalarExpr P(std::string_view s) { return parse_expr(s, plane()); }

}  // namespace

TEST_CASE("parse builds the expected trees") {
  auto e = P("2*x + y^2");
  CHECK(e.kind() == ScalarExpr::Kind::sum);
  CHECK(e.to_string() == "2*x + y^2");
  auto q = P("h/(1+x)");
  CHECK(q.kind() == ScalarExpr::Kind::quotient);
  CHECK(equal(q * (1 + ScalarExpr::coordinate("x")), P("h")));
}

TEST_CASE("parse errors carry a position") {
  try {
    P("1/0");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.reason() == "zero denominator");
    CHECK(e.column() == 2);
  }
  CHECK_THROWS_AS(P("x + g"), ParseError);
  CHECK_THROWS_AS(P("x(y)"), ParseError);
  CHECK_THROWS_AS(P("2 *"), ParseError);
  CHECK_THROWS_AS(P("(x + y"), ParseError);
  CHECK_THROWS_AS(P("x^y"), ParseError);
  CHECK_THROWS_AS(P("h_z"), ParseError);
  CHECK_THROWS_AS(P("(x - x)^-1"), ParseError);
}

TEST_CASE("decimal literals are exact") {
  CHECK(P("0.1 + 0.2").constant_value() == Rational(3, 10));
  CHECK(P("2^-2").constant_value() == Rational(1, 4));
  CHECK(P("x^(-1)*x").constant_value() == Rational(1));
}

TEST_CASE("diff follows the usual rules") {
  CHECK(equal(diff(P("x*y^2"), "y"), P("2*x*y")));
  CHECK(diff(P("h"), "x").to_string() == "h_x");
  CHECK(diff(diff(P("h"), "x"), "y") == diff(diff(P("h"), "y"), "x"));
  CHECK(diff(diff(P("h"), "y"), "x").to_string() == "h_xy");
  CHECK(equal(diff(P("1/x"), "x"), P("-1/x^2")));
  CHECK(diff(P("h_xy"), "x") == P("h_xxy"));
}

TEST_CASE("chain rule through function arguments") {
  auto composed = P("h(x + y^2, y)");
  CHECK(equal(diff(composed, "x"), P("h_x(x + y^2, y)")));
  CHECK(equal(diff(composed, "y"), P("2*y*h_x(x + y^2, y) + h_y(x + y^2, y)")));
  auto back = substitute(composed, {{"x", P("x - y^2")}});
  CHECK(back == P("h"));
}

TEST_CASE("bind_function replaces jets") {
  auto body = P("x*y^2");
  CHECK(equal(bind_function(P("h*h_y + h_xy"), "h", body), P("x*y^2*2*x*y + 2*y")));
  // h_x at (y, x^2) is (x^2)^2.
  CHECK(equal(bind_function(P("h_x(y, x^2)"), "h", body), P("x^4")));
  CHECK(equal(bind_function(P("h + x"), "g", body), P("h + x")));
  CHECK_THROWS_AS(bind_function(P("1/(h - x*y^2)"), "h", body), DomainError);
}

TEST_CASE("normal forms") {
  auto q = P("(x^2 - y^2)/(x - y)");
  CHECK(q.normal_form() == P("x + y").normal_form());
  CHECK(P("h_x*h - h*h_x").is_zero());
  CHECK(P("0").normal_form().denominator() == Polynomial(Rational(1)));
  CHECK(P("1").normal_form().numerator() == Polynomial(Rational(1)));
  auto u_h = diff(P("h"), "x") + P("2*x") * diff(P("h"), "y");
  auto ratio = u_h / P("h");
  CHECK(ratio.normal_form().numerator() == P("h_x + 2*x*h_y").normal_form().numerator());
  CHECK(ratio.normal_form().denominator() == P("h").normal_form().numerator());
  CHECK(ratio.to_string() == "(2*x*h_y + h_x)/h");
}

TEST_CASE("multivariate gcd cancels shared factors") {
  auto a = P("(x + y)^3 * (x - 2*y)^2 * (h + x)");
  auto b = P("(x + y)^2 * (x - 2*y) * (h - x)");
  auto q = a / b;
  CHECK(q.normal_form() == P("(x + y)*(x - 2*y)*(h + x)/(h - x)").normal_form());
  auto r = P("(x*y - 1)/(x^2*y^2 - 1)");
  CHECK(r.normal_form() == P("1/(x*y + 1)").normal_form());
}

TEST_CASE("equal_zero decides on the normal form") {
  CHECK(equal_zero(P("x*y - y*x")));
  CHECK_FALSE(equal_zero(P("h_x/h - h_y/h")));
  Assignment at{{"h", 1}, {"h_x", 2}, {"h_y", 3}};
  CHECK(eval_num(P("h_x/h - h_y/h"), at) == -1);
}

TEST_CASE("eval_num") {
  CHECK(eval_num(P("x + y"), {{"x", 1}, {"y", 2}}) == 3);
  CHECK(eval_num(P("h/(1+x)"), {{"x", 1}, {"h", 4}}) == 2);
  auto e = P("(h_x + 2*x*h_y)/h");
  CHECK(eval_num(e, {{"x", 3}, {"h", 2}, {"h_x", 1}, {"h_y", 5}}) == Rational(31, 2));
  CHECK_THROWS_AS(eval_num(P("x + y"), {{"x", 1}}), DomainError);
  CHECK_THROWS_AS(eval_num(P("1/(x - 1)"), {{"x", 1}}), DomainError);
}

TEST_CASE("printing round-trips through the parser") {
  for (const char* s : {"2*x + y^2", "h/(1+x)", "-x/(2*y - 3)", "(h_x + 2*x*h_y)/h", "1/2*x",
                        "h(x + y, y^2)", "h_xy(2*x, y)/(x^2 + 1)", "-3/7"}) {
    auto e = P(s);
    CHECK_MESSAGE(equal(P(e.to_string()), e), s << " printed as " << e.to_string());
    CHECK(P(e.to_string()).to_string() == e.to_string());
  }
}

TEST_CASE("property: evaluation is a homomorphism") {
  std::mt19937_64 rng(test::kSeed);
  test::ExprGenerator gen(rng, {"x", "y"}, true);
  for (int i = 0; i < 60; ++i) {
    auto a = gen.rational_function(3);
    auto b = gen.rational_function(3);
    auto point = gen.point();
    auto va = eval_num(a, point);
    auto vb = eval_num(b, point);
    CHECK(eval_num(a + b, point) == va + vb);
    CHECK(eval_num(a * b, point) == va * vb);
    if (!b.is_zero() && vb != 0) CHECK(eval_num(a / b, point) == va / vb);
  }
}

TEST_CASE("property: product rule") {
  std::mt19937_64 rng(test::kSeed + 1);
  test::ExprGenerator gen(rng, {"x", "y"}, true);
  for (int i = 0; i < 60; ++i) {
    auto a = gen.rational_function(3);
    auto b = gen.rational_function(3);
    for (const char* v : {"x", "y"}) {
      CHECK(equal_zero(diff(a * b, v) - (diff(a, v) * b + a * diff(b, v))));
    }
  }
}

TEST_CASE("property: normalization is idempotent") {
  std::mt19937_64 rng(test::kSeed + 2);
  test::ExprGenerator gen(rng, {"x", "y"}, true);
  for (int i = 0; i < 120; ++i) {
    auto e = gen.rational_function(4);
    auto once = ScalarExpr::from_normal_form(e.normal_form());
    auto twice = ScalarExpr::from_normal_form(once.normal_form());
    CHECK(once.normal_form() == twice.normal_form());
    CHECK(equal(e, once));
    CHECK(parse_expr(e.to_string(), plane()).normal_form() == e.normal_form());
  }
}

TEST_CASE("property: gcd recovers planted common factors") {
  std::mt19937_64 rng(test::kSeed + 3);
  test::ExprGenerator gen(rng, {"x", "y"}, true);
  for (int i = 0; i < 60; ++i) {
    auto a = gen.polynomial(3).normal_form().numerator();
    auto b = gen.polynomial(3).normal_form().numerator();
    auto c = gen.polynomial(2).normal_form().numerator();
    if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
    Polynomial g = gcd(a * c, b * c);
    CHECK_NOTHROW(exact_quotient(g, c));
    CHECK_NOTHROW(exact_quotient(a * c, g));
    CHECK_NOTHROW(exact_quotient(b * c, g));
    Polynomial rest = gcd(exact_quotient(a * c, g), exact_quotient(b * c, g));
    CHECK(rest.is_constant());
  }
}
