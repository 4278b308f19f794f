#include "bilag/lift.hpp"

#include <utility>

#include "bilag/errors.hpp"

namespace bilag {

namespace {

VectorField horizontal(const VectorField& e, const Matrix& j, const Vector& eta, const TrivialBundleChart& bundle) {
  const std::size_t m = bundle.base().dim();
  Vector c = e.components();
  for (std::size_t i = 0; i < m; ++i) {
    ScalarExpr v(0);
    for (std::size_t a = 0; a < m; ++a) {
      ScalarExpr ej = e.apply(j[a][i]);
      if (!ej.is_zero()) v += ej * eta[a];
    }
    c.push_back(v.canonical());
  }
  return VectorField(bundle.combined(), std::move(c));
}

// d/d eta_a = sum_i J_ai d/d xi_i.
VectorField fiber_direction(std::size_t a, const Matrix& j, const TrivialBundleChart& bundle) {
  const std::size_t m = bundle.base().dim();
  Vector c(m, ScalarExpr(0));
  for (std::size_t i = 0; i < m; ++i) c.push_back(j[a][i]);
  return VectorField(bundle.combined(), std::move(c));
}

void record(ActionReport& report, const char* foliation, const char* side, const Frame& tested, const Frame& span,
            bool& all) {
  for (std::size_t i = 0; i < tested.size(); ++i) {
    bool member = span_coefficients(tested[i], span).has_value();
    report.memberships.push_back({foliation, side, i, tested[i].to_string(), member});
    all = all && member;
  }
}

}  // namespace

std::vector<std::string> default_fibers(const Chart& chart, int level) {
  for (;; ++level) {
    std::vector<std::string> names;
    bool clash = false;
    for (std::size_t i = 0; i < chart.dim(); ++i) {
      names.push_back("xi" + std::to_string(level) + "n" + std::to_string(i + 1));
      clash = clash || chart.index_of(names.back()).has_value();
    }
    if (!clash) return names;
  }
}

LiftedStructure lift_structure(const BiLagStructure& s, std::optional<std::vector<std::string>> fibers,
                               const ZeroTest& options) {
  const Chart& base = s.chart();
  const std::size_t m = base.dim();
  const std::size_t n = s.n();
  TrivialBundleChart bundle(base, fibers ? std::move(*fibers) : default_fibers(base));
  SymplecticForm omega = trivial_bundle_symplectic(s.omega(), bundle, options);

  Matrix j(m, Vector(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t i = 0; i < m; ++i) j[a][i] = diff(s.adapted()[a], base.name(i));
  }
  Matrix jinv;
  try {
    jinv = inverse(j);
  } catch (const DomainError&) {
    throw DomainError("cannot lift: the adapted functions are dependent");
  }
  Vector eta;
  for (std::size_t a = 0; a < m; ++a) {
    ScalarExpr v(0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!jinv[i][a].is_zero()) v += jinv[i][a] * bundle.fiber(i);
    }
    eta.push_back(v.canonical());
  }

  Frame f1;
  Frame f2;
  for (const auto& e : s.f1()) f1.push_back(horizontal(e, j, eta, bundle));
  for (std::size_t a = n; a < m; ++a) f1.push_back(fiber_direction(a, j, bundle));
  for (const auto& e : s.f2()) f2.push_back(horizontal(e, j, eta, bundle));
  for (std::size_t a = 0; a < n; ++a) f2.push_back(fiber_direction(a, j, bundle));

  Vector adapted;
  for (std::size_t a = 0; a < n; ++a) adapted.push_back(s.adapted()[a]);
  for (std::size_t a = n; a < m; ++a) adapted.push_back(eta[a]);
  for (std::size_t a = n; a < m; ++a) adapted.push_back(s.adapted()[a]);
  for (std::size_t a = 0; a < n; ++a) adapted.push_back(eta[a]);

  BiLagStructure lifted = validate_bilagrangian(omega, std::move(f1), std::move(f2), std::move(adapted), options);
  return {std::move(lifted), s, std::move(bundle)};
}

BiLagStructure iterate_lift(const BiLagStructure& s, int k, std::size_t max_dim, const ZeroTest& options) {
  if (k < 0) throw DomainError("lift count must be nonnegative");
  BiLagStructure out = s;
  for (int level = 1; level <= k; ++level) {
    std::size_t dim = 2 * out.chart().dim();
    if (dim > max_dim) {
      throw DomainError("lift " + std::to_string(level) + " would reach dimension " + std::to_string(dim) +
                        ", above the cap " + std::to_string(max_dim));
    }
    out = lift_structure(out, default_fibers(out.chart(), level), options).structure;
  }
  return out;
}

LiftedMap lift_map(const SmoothMap& psi, const std::vector<std::string>& fibers,
                   const std::optional<SymplecticForm>& omega, const ZeroTest& options) {
  if (!psi.has_inverse()) throw DomainError("lifting a map needs the declared inverse");
  TrivialBundleChart source(psi.source(), fibers);
  TrivialBundleChart target(psi.target(), fibers);
  const std::size_t m = psi.source().dim();
  SmoothMap inv = psi.inverse_map();
  Matrix j = psi.jacobian();
  Matrix jinv = inv.jacobian();

  Vector forward = psi.forward();
  Vector backward = *psi.inverse();
  for (std::size_t k = 0; k < m; ++k) {
    ScalarExpr f(0);
    ScalarExpr b(0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!jinv[i][k].is_zero()) f += psi.pull(jinv[i][k]) * source.fiber(i);
      if (!j[i][k].is_zero()) b += inv.pull(j[i][k]) * target.fiber(i);
    }
    forward.push_back(f.canonical());
    backward.push_back(b.canonical());
  }
  LiftedMap out{SmoothMap(source.combined(), target.combined(), std::move(forward), std::move(backward)), psi, {}, {}};
  out.jacobian = out.map.jacobian();
  if (omega && psi.source() == omega->chart() && psi.target() == omega->chart() &&
      !equal_zero(pullback(psi, omega->form()) - omega->form(), options)) {
    out.warnings.push_back("the map does not preserve omega");
  }
  return out;
}

ActionReport lifted_action_check(const SmoothMap& psi, const BiLagStructure& s,
                                 std::optional<std::vector<std::string>> fibers, const ZeroTest& options) {
  std::vector<std::string> names = fibers ? std::move(*fibers) : default_fibers(s.chart());
  BiLagStructure hat = lift_structure(push_structure(psi, s, options), names, options).structure;
  LiftedMap psi_hat = lift_map(psi, names, s.omega(), options);
  BiLagStructure tilde = push_structure(psi_hat.map, lift_structure(s, names, options).structure, options);

  ActionReport report{hat, tilde, {}, true, true, true, psi_hat.warnings};
  bool back = true;
  record(report, "F1", "tilde in hat", tilde.f1(), hat.f1(), report.criterion);
  record(report, "F2", "tilde in hat", tilde.f2(), hat.f2(), report.criterion);
  record(report, "F1", "hat in tilde", hat.f1(), tilde.f1(), back);
  record(report, "F2", "hat in tilde", hat.f2(), tilde.f2(), back);
  report.forms_equal = equal_zero(hat.omega().form() - tilde.omega().form(), options);
  report.equal = report.criterion && back && report.forms_equal;
  return report;
}

}  // namespace bilag
