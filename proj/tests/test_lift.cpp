#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bilag/errors.hpp"
#include "bilag/lift.hpp"
#include "bilag/parse.hpp"
#include "generators.hpp"

using namespace bilag;

namespace {

const Chart plane({"x", "y"});
const Chart four({"x", "y", "s", "t"});
const std::vector<std::string> st{"s", "t"};

ScalarExpr P(std::string_view s, const Chart& chart = plane) {
  SymbolTable t;
  t.coordinates = chart.names();
  t.functions["h"] = {"x", "y"};
  return parse_expr(s, t);
}

KForm d(const char* name, const Chart& chart = plane) { return KForm::differential(chart, *chart.index_of(name)); }

VectorField e4(const char* name) { return VectorField::coordinate(four, *four.index_of(name)); }

BiLagStructure standard() {
  return validate_bilagrangian(validate_symplectic(wedge(d("y"), d("x"))), {VectorField::coordinate(plane, 0)},
                               {VectorField::coordinate(plane, 1)});
}

BiLagStructure parabola(bool adapted = true) {
  auto omega = validate_symplectic(P("h") * wedge(d("y"), d("x")));
  VectorField u(plane, {1, P("2*x")});
  VectorField v = VectorField::coordinate(plane, 1);
  if (!adapted) return validate_bilagrangian(omega, {u}, {v});
  return validate_bilagrangian(omega, {u}, {v}, Vector{P("x"), P("y - x^2")});
}

bool same_span(const Frame& a, const Frame& b) {
  for (const auto& e : a) {
    if (!span_coefficients(e, b)) return false;
  }
  for (const auto& e : b) {
    if (!span_coefficients(e, a)) return false;
  }
  return true;
}

void check_structure_invariants(const BiLagStructure& s) {
  const auto& w = s.omega();
  CHECK(equal_zero(exterior_d(w.form())));
  for (const auto& frame : {s.f1(), s.f2()}) {
    for (const auto& a : frame) {
      for (const auto& b : frame) {
        for (const auto& c : frame) CHECK(equal_zero(w(lie_bracket(a, b), c)));
      }
    }
  }
}

}  // namespace

TEST_CASE("lift of the standard structure") {
  auto lifted = lift_structure(standard(), st);
  const auto& s = lifted.structure;
  KForm expected = wedge(d("y", four), d("x", four)) + wedge(d("s", four), d("x", four)) +
                   wedge(d("t", four), d("y", four));
  CHECK(equal_zero(s.omega().form() - expected));
  CHECK(same_span(s.f1(), {e4("x"), e4("t")}));
  CHECK(same_span(s.f2(), {e4("y"), e4("s")}));
  CHECK(s.omega()(e4("x"), e4("t")).is_zero());
  CHECK(s.omega()(e4("y"), e4("s")).is_zero());
  CHECK(s.adapted_ok());
  CHECK(lifted.bundle.fibers() == st);
  check_structure_invariants(s);
}

TEST_CASE("lift of the parabola structure") {
  auto lifted = lift_structure(parabola(), st);
  CHECK(lifted.structure.chart() == four);
  CHECK(lifted.structure.adapted_ok());
  check_structure_invariants(lifted.structure);
  // Horizontal lift of U: xi_1 = eta_1 - 2x eta_2 with eta_2 = t, so d xi_1(U^) = -2t.
  CHECK(equal_zero(lifted.structure.f1()[0] - VectorField(four, {1, P("2*x", four), P("-2*t", four), 0})));
  // With the coordinates as adapted functions U is not tangent to q = y, so
  // the lifted frames are not Lagrangian.
  CHECK_THROWS_AS(lift_structure(parabola(false), st), ValidationError);
}

TEST_CASE("iterate_lift") {
  auto s = standard();
  auto zero = iterate_lift(s, 0);
  CHECK(zero.chart() == s.chart());
  auto one = iterate_lift(s, 1);
  CHECK(one.chart().dim() == 4);
  auto direct = lift_structure(s, std::vector<std::string>{one.chart().name(2), one.chart().name(3)}).structure;
  CHECK(same_span(one.f1(), direct.f1()));
  CHECK(same_span(one.f2(), direct.f2()));
  auto two = iterate_lift(s, 2);
  CHECK(two.chart().dim() == 8);
  CHECK(two.adapted_ok());
  check_structure_invariants(two);
  CHECK_THROWS_AS(iterate_lift(s, 3, 8), DomainError);
  CHECK_THROWS_AS(iterate_lift(s, -1), DomainError);

  auto p2 = iterate_lift(parabola(), 2);
  CHECK(p2.chart().dim() == 8);
  check_structure_invariants(p2);
}

TEST_CASE("lift_map of an affine map") {
  // alpha = 2, beta = 1, gamma = 1, delta = 1, a = 3, b = -1.
  SmoothMap psi(plane, plane, {P("2*x + y + 3"), P("x + y - 1")}, Vector{P("x - y - 4"), P("-x + 2*y + 5")});
  auto lifted = lift_map(psi, st, validate_symplectic(wedge(d("y"), d("x"))));
  CHECK(lifted.warnings.empty());
  std::vector<const char*> expected{"2*x + y + 3", "x + y - 1", "s*1 - t*1", "-1*s + 2*t"};
  for (std::size_t i = 0; i < 4; ++i) CHECK(equal(lifted.map.forward()[i], P(expected[i], four)));
  CHECK_NOTHROW(lifted.map.validate());
  // Base block A and fiber block A^{-T}, from the matrices directly.
  Matrix a{{2, 1}, {1, 1}};
  Matrix fiber = transpose(inverse(a));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(equal(lifted.jacobian[i][j], a[i][j]));
      CHECK(equal(lifted.jacobian[2 + i][2 + j], fiber[i][j]));
      CHECK(lifted.jacobian[i][2 + j].is_zero());
      CHECK(lifted.jacobian[2 + i][j].is_zero());
    }
  }
  auto id = lift_map(SmoothMap::identity(plane), st);
  for (std::size_t i = 0; i < 4; ++i) CHECK(equal(id.map.forward()[i], four.coordinate(i)));
  CHECK_THROWS_AS(lift_map(SmoothMap(plane, plane, {P("x"), P("y")}), st), DomainError);
}

TEST_CASE("lifted maps preserve omega~") {
  auto omega = validate_symplectic(wedge(d("y"), d("x")));
  TrivialBundleChart bundle(plane, st);
  auto tilde = trivial_bundle_symplectic(omega, bundle);
  std::mt19937_64 rng(test::kSeed + 10);
  test::ExprGenerator gen(rng, {"x", "y"});
  std::vector<SmoothMap> maps{
      SmoothMap(plane, plane, {P("x"), P("y + x^2")}, Vector{P("x"), P("y - x^2")}),
      SmoothMap(plane, plane, {P("x + y^3"), P("y")}, Vector{P("x - y^3"), P("y")}),
  };
  for (int i = 0; i < 5; ++i) maps.push_back(gen.affine_symplectic(plane));
  for (const auto& psi : maps) {
    auto lifted = lift_map(psi, st, omega);
    CHECK(lifted.warnings.empty());
    CHECK(equal_zero(pullback(lifted.map, tilde.form()) - tilde.form()));
  }
  // Not symplectic: warned, and theta is still preserved.
  SmoothMap stretch(plane, plane, {P("2*x"), P("y")}, Vector{P("x/2"), P("y")});
  auto lifted = lift_map(stretch, st, omega);
  CHECK(lifted.warnings.size() == 1);
  auto theta = tautological_theta(bundle);
  CHECK(equal_zero(pullback(lifted.map, theta) - theta));
}

TEST_CASE("lift_map is functorial") {
  std::mt19937_64 rng(test::kSeed + 11);
  test::ExprGenerator gen(rng, {"x", "y"});
  for (int trial = 0; trial < 10; ++trial) {
    auto psi = gen.affine_symplectic(plane);
    auto phi = gen.affine_symplectic(plane);
    auto lhs = lift_map(compose(psi, phi), st).map;
    auto rhs = compose(lift_map(psi, st).map, lift_map(phi, st).map);
    for (std::size_t i = 0; i < 4; ++i) CHECK(equal(lhs.forward()[i], rhs.forward()[i]));
  }
}

TEST_CASE("the hat action is an action") {
  auto s = parabola();
  std::mt19937_64 rng(test::kSeed + 12);
  test::ExprGenerator gen(rng, {"x", "y"});
  auto base = lift_structure(s, st).structure;
  auto id = lift_structure(push_structure(SmoothMap::identity(plane), s), st).structure;
  CHECK(same_span(id.f1(), base.f1()));
  CHECK(same_span(id.f2(), base.f2()));
  for (int trial = 0; trial < 5; ++trial) {
    auto psi = gen.affine_symplectic(plane);
    auto phi = gen.affine_symplectic(plane);
    auto lhs = lift_structure(push_structure(compose(psi, phi), s), st).structure;
    auto rhs = lift_structure(push_structure(psi, push_structure(phi, s)), st).structure;
    CHECK(equal_zero(lhs.omega().form() - rhs.omega().form()));
    CHECK(same_span(lhs.f1(), rhs.f1()));
    CHECK(same_span(lhs.f2(), rhs.f2()));
  }
}

TEST_CASE("lifted_action_check") {
  std::mt19937_64 rng(test::kSeed + 13);
  test::ExprGenerator gen(rng, {"x", "y"});
  for (int trial = 0; trial < 5; ++trial) {
    auto report = lifted_action_check(gen.affine_symplectic(plane), standard(), st);
    CHECK(report.criterion);
    CHECK(report.equal);
    CHECK(report.memberships.size() == 8);
  }
  auto id = lifted_action_check(SmoothMap::identity(plane), parabola(), st);
  CHECK(id.equal);

  SmoothMap bend(plane, plane, {P("x"), P("y + x^2")}, Vector{P("x"), P("y - x^2")});
  auto report = lifted_action_check(bend, standard(), st);
  CHECK(report.memberships.size() == 8);
  CHECK(report.warnings.empty());
  MESSAGE("non-affine verdict: criterion=", report.criterion, " equal=", report.equal);
}
