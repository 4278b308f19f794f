#pragma once

#include <string>
#include <vector>

#include "bilag/calculus.hpp"

namespace bilag {

/// A 2-form certified closed and nondegenerate.
class SymplecticForm {
 public:
  const KForm& form() const noexcept { return form_; }
  const Chart& chart() const noexcept { return form_.chart(); }
  /// Omega[i][j] = omega(d_i, d_j).
  const Matrix& matrix() const noexcept { return matrix_; }
  /// Nondegeneracy witness: det(Omega).
  const ScalarExpr& determinant() const noexcept { return determinant_; }
  /// Loci where the form degenerates (det vanishes somewhere).
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  ScalarExpr operator()(const VectorField& x, const VectorField& y) const;

  /// The vector field Z with i_Z omega = a for a 1-form a.
  VectorField sharp(const KForm& a) const;

 private:
  friend SymplecticForm validate_symplectic(const KForm& a, const ZeroTest& options);

  KForm form_;
  Matrix matrix_;
  Matrix transpose_inverse_;
  ScalarExpr determinant_;
  std::vector<std::string> warnings_;
};

/// Throws ValidationError naming the failed condition (odd dimension, not
/// closed, degenerate) with the offending coefficient.
SymplecticForm validate_symplectic(const KForm& a, const ZeroTest& options = {});

/// X_f with omega(X_f, Y) = -df(Y).
VectorField hamiltonian_field(const ScalarExpr& f, const SymplecticForm& omega);
/// {f, g} = omega(X_f, X_g).
ScalarExpr poisson_bracket(const ScalarExpr& f, const ScalarExpr& g, const SymplecticForm& omega);

/// Base chart (x_1..x_m) with fiber coordinates (xi_1..xi_m).
class TrivialBundleChart {
 public:
  TrivialBundleChart(Chart base, std::vector<std::string> fibers);

  const Chart& base() const noexcept { return base_; }
  const std::vector<std::string>& fibers() const noexcept { return fibers_; }
  const Chart& combined() const noexcept { return combined_; }
  /// Fiber coordinate i as an expression.
  ScalarExpr fiber(std::size_t i) const { return ScalarExpr::coordinate(fibers_.at(i)); }
  /// Index of fiber coordinate i in the combined chart.
  std::size_t fiber_index(std::size_t i) const { return base_.dim() + i; }

 private:
  Chart base_;
  std::vector<std::string> fibers_;
  Chart combined_;
};

/// theta = sum xi_i dx_i on the combined chart.
KForm tautological_theta(const TrivialBundleChart& bundle);
/// Coefficient-wise inclusion of a base form into the combined chart.
KForm include_form(const KForm& a, const TrivialBundleChart& bundle);
VectorField include_field(const VectorField& x, const TrivialBundleChart& bundle);
/// omega~ = pi^* omega + d theta, certified.
SymplecticForm trivial_bundle_symplectic(const SymplecticForm& omega, const TrivialBundleChart& bundle,
                                         const ZeroTest& options = {});

}  // namespace bilag
