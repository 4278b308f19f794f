#include "bilag/symplectic.hpp"

#include "bilag/errors.hpp"

namespace bilag {

ScalarExpr SymplecticForm::operator()(const VectorField& x, const VectorField& y) const {
  return form_.evaluate({x, y});
}

VectorField SymplecticForm::sharp(const KForm& a) const {
  if (a.degree() != 1 || !(a.chart() == chart())) throw DomainError("sharp needs a 1-form on the chart");
  Vector rhs;
  for (std::size_t j = 0; j < chart().dim(); ++j) rhs.push_back(a.coefficient({static_cast<int>(j)}));
  // (i_Z omega)_j = Z^i Omega_ij, so Omega^T Z = a.
  return VectorField(chart(), multiply(transpose_inverse_, rhs));
}

SymplecticForm validate_symplectic(const KForm& a, const ZeroTest& options) {
  const Chart& chart = a.chart();
  if (a.degree() != 2) throw ValidationError(std::vector<Issue>{{"degree", "a symplectic form has degree 2"}});
  if (chart.dim() % 2 != 0) {
    throw ValidationError(std::vector<Issue>{{"odd dimension", "chart has dimension " + std::to_string(chart.dim())}});
  }
  std::vector<Issue> issues;
  KForm da = exterior_d(a);
  for (const auto& [index, c] : da.terms()) {
    if (equal_zero(c, options)) continue;
    std::string where;
    for (int i : index) where += (where.empty() ? "d" : "^d") + chart.name(static_cast<std::size_t>(i));
    issues.push_back({"not closed", "coefficient of " + where + " in d(omega) is " + c.to_string()});
  }
  SymplecticForm out;
  out.form_ = a;
  out.matrix_ = a.matrix();
  out.determinant_ = determinant(out.matrix_);
  if (equal_zero(out.determinant_, options)) {
    issues.push_back({"degenerate", "det(Omega) normalizes to zero"});
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  if (!out.determinant_.is_constant()) {
    out.warnings_.push_back("degenerate where " + out.determinant_.to_string() + " = 0");
  }
  out.transpose_inverse_ = inverse(transpose(out.matrix_));
  return out;
}

VectorField hamiltonian_field(const ScalarExpr& f, const SymplecticForm& omega) {
  return omega.sharp(-exterior_d(KForm::function(omega.chart(), f)));
}

ScalarExpr poisson_bracket(const ScalarExpr& f, const ScalarExpr& g, const SymplecticForm& omega) {
  return omega(hamiltonian_field(f, omega), hamiltonian_field(g, omega));
}

TrivialBundleChart::TrivialBundleChart(Chart base, std::vector<std::string> fibers)
    : base_(std::move(base)), fibers_(std::move(fibers)) {
  if (fibers_.size() != base_.dim()) {
    throw DomainError("a trivial bundle chart needs " + std::to_string(base_.dim()) +
                      " fiber coordinates, got " + std::to_string(fibers_.size()));
  }
  combined_ = base_.extended(fibers_);
}

KForm tautological_theta(const TrivialBundleChart& bundle) {
  KForm theta(bundle.combined(), 1);
  for (std::size_t i = 0; i < bundle.base().dim(); ++i) theta.add({static_cast<int>(i)}, bundle.fiber(i));
  return theta;
}

KForm include_form(const KForm& a, const TrivialBundleChart& bundle) {
  if (!(a.chart() == bundle.base())) throw DomainError("form does not live on the base chart");
  KForm out(bundle.combined(), a.degree());
  for (const auto& [index, c] : a.terms()) out.add(index, c);
  return out;
}

VectorField include_field(const VectorField& x, const TrivialBundleChart& bundle) {
  if (!(x.chart() == bundle.base())) throw DomainError("field does not live on the base chart");
  Vector c = x.components();
  c.resize(bundle.combined().dim(), ScalarExpr(0));
  return VectorField(bundle.combined(), std::move(c));
}

SymplecticForm trivial_bundle_symplectic(const SymplecticForm& omega, const TrivialBundleChart& bundle,
                                         const ZeroTest& options) {
  if (!(omega.chart() == bundle.base())) {
    throw DomainError("symplectic form and bundle base have different charts");
  }
  return validate_symplectic(include_form(omega.form(), bundle) + exterior_d(tautological_theta(bundle)),
                             options);
}

}  // namespace bilag
