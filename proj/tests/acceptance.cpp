// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bilag/errors.hpp"
#include "bilag/lift.hpp"
#include "bilag/report.hpp"
#include "bilag/scene.hpp"
#include "bilag/structure.hpp"
#include "bilag/symplectic.hpp"
#include "generators.hpp"

using namespace bilag;

namespace {

struct Tally {
  int checks = 0;
  std::vector<std::string> failures;

  void need(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

std::string scene_path(const char* name) { return std::string(BILAG_SCENES_DIR) + "/" + name; }

const Chart plane({"x", "y"});
const Chart four({"x", "y", "s", "t"});
const std::vector<std::string> st{"s", "t"};

KForm d(const char* name, const Chart& chart) { return KForm::differential(chart, *chart.index_of(name)); }
VectorField e(const Chart& chart, const char* name) { return VectorField::coordinate(chart, *chart.index_of(name)); }

bool same_span(const Frame& a, const Frame& b) {
  for (const auto& v : a) {
    if (!span_coefficients(v, b)) return false;
  }
  for (const auto& v : b) {
    if (!span_coefficients(v, a)) return false;
  }
  return true;
}

bool same_gammas(const Connection& a, const Connection& b) {
  const auto& x = a.gammas().values();
  const auto& y = b.gammas().values();
  if (x.size() != y.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!equal(x[k], y[k])) return false;
  }
  return true;
}

std::string label(const std::vector<std::size_t>& idx) {
  std::ostringstream out;
  for (auto i : idx) out << i;
  return out.str();
}

struct Bundled {
  Scene standard = load_scene(scene_path("standard.scene"));
  Scene parabola = load_scene(scene_path("parabola.scene"));
};

void christoffel_table(Tally& t, const Bundled& b) {
  const auto& sc = b.parabola;
  auto s = sc.structure();
  auto u = sc.field("U"), v = sc.field("V");
  auto h = sc.expr("h");
  auto c = christoffels(s).in_frame(sc.frame("(U,V)"));
  for (std::size_t k = 0; k < 8; ++k) {
    auto idx = c.gammas().index_of(k);
    ScalarExpr expected(0);
    if (idx == std::vector<std::size_t>{0, 0, 0}) expected = u.apply(h) / h;
    if (idx == std::vector<std::size_t>{1, 1, 1}) expected = v.apply(h) / h;
    t.need(equal_zero(c.gammas().values()[k] - expected), "Gamma " + label(idx));
  }
  t.need(equal(c.gamma(0, 0, 0), sc.expr("(h_x + 2*x*h_y)/h")), "Gamma^1_11 closed form");

  TaskSpec task{"gamma", "christoffels", {{"frame", "(U,V)"}}, 0};
  auto r = run_task(sc, task);
  t.need(r.error.empty(), "christoffels task: " + r.error);
  if (r.error.empty()) {
    t.need(equal(sc.expr(r.payload["gamma"]["G^1_11"].get<std::string>()), u.apply(h) / h), "report G^1_11");
    t.need(equal(sc.expr(r.payload["gamma"]["G^2_22"].get<std::string>()), v.apply(h) / h), "report G^2_22");
  }
}

void curvature_table(Tally& t, const Bundled& b) {
  const auto& sc = b.parabola;
  auto s = sc.structure();
  auto u = sc.field("U"), v = sc.field("V");
  auto c = christoffels(s).in_frame(sc.frame("(U,V)"));
  auto r = curvature(c);
  auto vg = v.apply(c.gamma(0, 0, 0));
  auto ug = u.apply(c.gamma(1, 1, 1));
  for (std::size_t k = 0; k < 16; ++k) {
    auto idx = r.index_of(k);
    ScalarExpr expected(0);
    if (idx == std::vector<std::size_t>{0, 1, 0, 0}) expected = vg;
    if (idx == std::vector<std::size_t>{0, 0, 1, 0}) expected = -vg;
    if (idx == std::vector<std::size_t>{1, 0, 1, 1}) expected = ug;
    if (idx == std::vector<std::size_t>{1, 1, 0, 1}) expected = -ug;
    t.need(equal_zero(r.values()[k] - expected), "R " + label(idx));
  }
}

void flatness(Tally& t, const Bundled& b) {
  t.need(is_flat(b.standard.structure()).flat, "standard is flat");
  for (const char* value : {"3", "-1/2", "7"}) {
    auto bound = load_scene(scene_path("parabola.scene"), std::string("bind h = ") + value + "\n");
    t.need(is_flat(bound.structure()).flat, std::string("parabola with h = ") + value + " is flat");
  }
  auto cert = is_flat(b.parabola.structure());
  t.need(!cert.flat, "opaque h is not flat");
  t.need(cert.nonzero.size() == 4, "certificate lists four coefficients");
}

void hess_triple(Tally& t, const Bundled& b) {
  for (const auto* sc : {&b.standard, &b.parabola}) {
    auto s = sc->structure();
    t.need(equal_zero(torsion(christoffels(s))), sc->name + ": torsion");
    auto frame = s.combined_frame();
    const auto& w = s.omega();
    for (const auto& x : frame) {
      for (const auto& y : frame) {
        for (const auto& z : frame) {
          t.need(equal_zero(x.apply(w(y, z)) - w(hess_nabla(x, y, s), z) - w(y, hess_nabla(x, z, s))),
                 sc->name + ": omega parallel");
        }
      }
      for (const auto& f : s.f1()) t.need(span_coefficients(hess_nabla(x, f, s), s.f1()).has_value(), "F1 kept");
      for (const auto& f : s.f2()) t.need(span_coefficients(hess_nabla(x, f, s), s.f2()).has_value(), "F2 kept");
    }
  }
}

void oracle_equivalence(Tally& t, const Bundled& b) {
  for (const auto* sc : {&b.standard, &b.parabola}) {
    auto s = sc->structure();
    auto lc = levi_civita_oracle(para_structure(s).g, s.chart());
    auto frame = s.combined_frame();
    t.need(same_gammas(lc.in_frame(frame), christoffels(s)), sc->name + ": Christoffels");
    for (const auto& x : frame) {
      for (const auto& y : frame) t.need(equal_zero(hess_nabla(x, y, s) - lc.nabla(x, y)), sc->name + ": pair");
    }
  }
}

void lift(Tally& t, const Bundled& b) {
  auto lifted = lift_structure(b.standard.structure(), st).structure;
  KForm expected = wedge(d("y", four), d("x", four)) + wedge(d("s", four), d("x", four)) +
                   wedge(d("t", four), d("y", four));
  t.need(equal_zero(lifted.omega().form() - expected), "omega~");
  t.need(same_span(lifted.f1(), {e(four, "x"), e(four, "t")}), "F^x lift");
  t.need(same_span(lifted.f2(), {e(four, "y"), e(four, "s")}), "F^y lift");
  auto again = validate_bilagrangian(lifted.omega(), lifted.f1(), lifted.f2(), lifted.adapted());
  t.need(again.adapted_ok(), "lift revalidates");
  auto two = iterate_lift(b.standard.structure(), 2);
  t.need(two.chart().dim() == 8, "k = 2 has dimension 8");
  auto two_again = validate_bilagrangian(two.omega(), two.f1(), two.f2());
  t.need(two_again.n() == 4, "k = 2 revalidates");
}

// Jacobian by direct differentiation of the components.
Matrix jacobian_of(const Vector& components, const Chart& chart) {
  Matrix j;
  for (const auto& c : components) {
    std::vector<ScalarExpr> row;
    for (std::size_t i = 0; i < chart.dim(); ++i) row.push_back(diff(c, chart.name(i)));
    j.push_back(row);
  }
  return j;
}

void lifted_symplectomorphism(Tally& t) {
  std::mt19937_64 rng(test::kSeed + 70);
  test::ExprGenerator gen(rng, {"x", "y"});
  auto omega = validate_symplectic(wedge(d("y", plane), d("x", plane)));
  auto tilde = trivial_bundle_symplectic(omega, TrivialBundleChart(plane, st));
  for (int trial = 0; trial < 20; ++trial) {
    auto psi = gen.affine_symplectic(plane);
    auto lifted = lift_map(psi, st, omega);
    t.need(lifted.warnings.empty(), "no warnings");
    t.need(equal_zero(pullback(lifted.map, tilde.form()) - tilde.form()), "psi^* omega~ = omega~");
    auto a = jacobian_of(psi.forward(), plane);
    auto fiber = transpose(inverse(a));
    auto j = jacobian_of(lifted.map.forward(), four);
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < 4; ++c) {
        t.need(equal(lifted.jacobian[r][c], j[r][c]), "recorded Jacobian");
        t.need(j[r][c].is_constant(), "constant Jacobian");
        if ((r < 2) != (c < 2)) t.need(j[r][c].is_zero(), "block diagonal");
      }
    }
    for (std::size_t r = 0; r < 2; ++r) {
      for (std::size_t c = 0; c < 2; ++c) t.need(equal(j[2 + r][2 + c], fiber[r][c]), "fiber block");
    }
  }
}

void action_compatibility(Tally& t, const Bundled& b) {
  std::mt19937_64 rng(test::kSeed + 80);
  test::ExprGenerator gen(rng, {"x", "y"});
  auto s = b.standard.structure();
  for (int trial = 0; trial < 20; ++trial) {
    auto report = lifted_action_check(gen.affine_symplectic(plane), s, st);
    t.need(report.criterion, "membership criterion");
    t.need(report.equal, "hat = tilde");
    t.need(report.forms_equal, "lifted forms agree");
    for (const auto& m : report.memberships) t.need(m.member, "member " + m.foliation + " " + m.side);
  }
}

void push_coherence(Tally& t, const Bundled& b) {
  std::mt19937_64 rng(test::kSeed + 90);
  test::ExprGenerator gen(rng, {"x", "y"});
  auto id = SmoothMap::identity(plane);
  for (const auto* sc : {&b.standard, &b.parabola}) {
    auto s = sc->structure();
    auto hess = christoffels(s);
    t.need(same_gammas(push_connection(id, hess), hess), "identity acts trivially");
    for (int trial = 0; trial < 10; ++trial) {
      auto psi = gen.affine_symplectic(plane);
      auto phi = gen.affine_symplectic(plane);
      auto pushed = push_structure(psi, s);
      t.need(same_gammas(christoffels(pushed), push_connection(psi, hess)), "Hess of the push");
      auto f = push_paracomplex(psi, s);
      auto g = para_structure(pushed).f;
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) t.need(equal(f[i][j], g[i][j]), "pushed F");
      }
      auto composite = push_structure(compose(psi, phi), s);
      auto stepwise = push_structure(psi, push_structure(phi, s));
      t.need(equal_zero(composite.omega().form() - stepwise.omega().form()), "composition: omega");
      t.need(same_span(composite.f1(), stepwise.f1()) && same_span(composite.f2(), stepwise.f2()),
             "composition: foliations");
      t.need(same_gammas(push_connection(compose(psi, phi), hess), push_connection(psi, push_connection(phi, hess))),
             "composition: connection");
    }
  }
}

void properties(Tally& t) {
  std::mt19937_64 rng(test::kSeed + 100);
  const Chart three({"x", "y", "s"});
  test::ExprGenerator gen(rng, {"x", "y", "s"}, true);
  test::ExprGenerator poly(rng, {"x", "y", "s", "t"});
  auto omega = validate_symplectic(wedge(d("x", four), d("s", four)) + wedge(d("y", four), d("t", four)));
  for (int i = 0; i < 50; ++i) {
    auto x = gen.field(three, 2), y = gen.field(three, 2), z = gen.field(three, 2);
    t.need(equal_zero(lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) +
                      lie_bracket(z, lie_bracket(x, y))),
           "Jacobi for brackets");

    auto f = poly.polynomial(3), g = poly.polynomial(3), k = poly.polynomial(3);
    auto br = [&](const ScalarExpr& a, const ScalarExpr& c) { return poisson_bracket(a, c, omega); };
    t.need(equal_zero(br(f, br(g, k)) + br(g, br(k, f)) + br(k, br(f, g))), "Jacobi for Poisson brackets");

    auto a = gen.form(three, 1 + i % 2, true);
    t.need(equal_zero(exterior_d(exterior_d(a))), "d o d");
    t.need(equal_zero(exterior_d(exterior_d(KForm::function(three, gen.rational_function(3))))), "d o d on functions");

    t.need(equal_zero(lie_derivative(x, a) - (interior_product(x, exterior_d(a)) +
                                              exterior_d(interior_product(x, a)))),
           "Cartan formula");
    t.need(equal_zero(lie_derivative(x, exterior_d(a)) - exterior_d(lie_derivative(x, a))), "L_X commutes with d");

    auto e1 = gen.rational_function(3);
    auto once = ScalarExpr::from_normal_form(e1.normal_form());
    auto twice = ScalarExpr::from_normal_form(once.normal_form());
    t.need(once.normal_form() == twice.normal_form() && equal(e1, once), "normalize idempotence");
  }
}

}  // namespace

int main() {
  std::vector<std::pair<const char*, std::function<void(Tally&, const Bundled&)>>> criteria{
      {"Christoffel table on the parabola structure", christoffel_table},
      {"curvature table", curvature_table},
      {"flatness", flatness},
      {"Hess uniqueness triple", hess_triple},
      {"Hess connection equals the Levi-Civita oracle", oracle_equivalence},
      {"lift of the standard structure and a double lift", lift},
      {"lifted affine symplectomorphisms", [](Tally& t, const Bundled&) { lifted_symplectomorphism(t); }},
      {"action compatibility", action_compatibility},
      {"pushforward coherence and action laws", push_coherence},
      {"property suite", [](Tally& t, const Bundled&) { properties(t); }},
  };

  int failed = 0;
  try {
    Bundled bundled;
    int n = 0;
    for (const auto& [name, run] : criteria) {
      ++n;
      Tally t;
      try {
        run(t, bundled);
      } catch (const std::exception& ex) {
        t.failures.push_back(std::string("exception: ") + ex.what());
      }
      bool ok = t.failures.empty() && t.checks > 0;
      failed += !ok;
      std::printf("%s %d %s (%d checks)\n", ok ? "PASS" : "FAIL", n, name, t.checks);
      for (std::size_t i = 0; i < t.failures.size() && i < 5; ++i) std::printf("  %s\n", t.failures[i].c_str());
    }
  } catch (const std::exception& ex) {
    std::printf("FAIL loading scenes: %s\n", ex.what());
    return 1;
  }
  return failed == 0 ? 0 : 1;
}
