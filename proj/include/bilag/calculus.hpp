#pragma once

// Vector fields, differential forms and the Cartan calculus on one global
// chart.
//
// Conventions: forms are stored on strictly increasing index tuples and
// evaluate by determinants, a(X_1..X_k) = sum_J a_J det(X_i^{J_r}), so that
// (a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X) for 1-forms and no 1/k! appears.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bilag/linalg.hpp"
#include "bilag/symexpr.hpp"

namespace bilag {

class Chart {
 public:
  Chart() = default;
  /// Throws DomainError on an empty list, a repeated name or a name that is
  /// not an identifier.
  explicit Chart(std::vector<std::string> names);

  std::size_t dim() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  ScalarExpr coordinate(std::size_t i) const { return ScalarExpr::coordinate(names_.at(i)); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Chart with `other`'s coordinates appended.
  Chart extended(const std::vector<std::string>& more) const;

  friend bool operator==(const Chart& a, const Chart& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
};

class VectorField {
 public:
  VectorField() = default;
  VectorField(Chart chart, Vector components);
  static VectorField zero(const Chart& chart);
  /// The coordinate field d/d(chart.name(i)).
  static VectorField coordinate(const Chart& chart, std::size_t i);

  const Chart& chart() const noexcept { return chart_; }
  const Vector& components() const noexcept { return components_; }
  const ScalarExpr& operator[](std::size_t i) const { return components_.at(i); }
  std::size_t dim() const noexcept { return components_.size(); }

  /// Directional derivative X(f) = X^i df/dx^i.
  ScalarExpr apply(const ScalarExpr& f) const;
  bool is_zero() const;

  VectorField operator-() const;
  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);
  friend VectorField operator*(const ScalarExpr& f, const VectorField& x);
  friend bool operator==(const VectorField& a, const VectorField& b);

  /// "(c1, c2, ...)" in canonical printed form.
  std::string to_string() const;

 private:
  Chart chart_;
  Vector components_;
};

/// Every component passes equal_zero.
bool equal_zero(const VectorField& x, const ZeroTest& options = {});

class KForm {
 public:
  using Index = std::vector<int>;

  KForm() = default;
  KForm(Chart chart, int degree);
  static KForm function(const Chart& chart, const ScalarExpr& f);
  /// d(chart.name(i)).
  static KForm differential(const Chart& chart, std::size_t i);

  const Chart& chart() const noexcept { return chart_; }
  int degree() const noexcept { return degree_; }
  /// Nonzero coefficients on strictly increasing tuples.
  const std::map<Index, ScalarExpr>& terms() const noexcept { return terms_; }

  /// Coefficient for an arbitrary index tuple (sign of the sorting
  /// permutation applied; zero when an index repeats).
  ScalarExpr coefficient(Index index) const;
  /// Adds c * dx^{i_1} ^ ... ^ dx^{i_k} for an arbitrary tuple.
  void add(Index index, const ScalarExpr& c);

  /// a(X_1, ..., X_k).
  ScalarExpr evaluate(const std::vector<VectorField>& vectors) const;
  /// Coefficient matrix a(d_i, d_j) of a 2-form.
  Matrix matrix() const;
  bool is_zero() const;

  KForm operator-() const;
  friend KForm operator+(const KForm& a, const KForm& b);
  friend KForm operator-(const KForm& a, const KForm& b);
  friend KForm operator*(const ScalarExpr& f, const KForm& a);
  friend bool operator==(const KForm& a, const KForm& b);

  /// "(c) dx^dy + ..." ; "0" for the zero form.
  std::string to_string() const;

 private:
  Chart chart_;
  int degree_ = 0;
  std::map<Index, ScalarExpr> terms_;
};

bool equal_zero(const KForm& a, const ZeroTest& options = {});

/// Diffeomorphism between charts given by components over the source chart
/// and, optionally, a declared inverse given by components over the target.
class SmoothMap {
 public:
  SmoothMap() = default;
  SmoothMap(Chart source, Chart target, Vector forward, std::optional<Vector> inverse = std::nullopt);
  static SmoothMap identity(const Chart& chart);

  const Chart& source() const noexcept { return source_; }
  const Chart& target() const noexcept { return target_; }
  const Vector& forward() const noexcept { return forward_; }
  const std::optional<Vector>& inverse() const noexcept { return inverse_; }
  bool has_inverse() const noexcept { return inverse_.has_value(); }

  /// J[i][j] = d(forward_i)/d(source_j), over the source chart.
  Matrix jacobian() const;
  /// Jacobian expressed over the target chart (requires the inverse).
  Matrix jacobian_at_target() const;

  /// f o psi for f over the target chart.
  ScalarExpr pull(const ScalarExpr& f) const;
  /// g o psi^{-1} for g over the source chart (requires the inverse).
  ScalarExpr push(const ScalarExpr& g) const;

  /// Swaps forward and inverse (requires the inverse).
  SmoothMap inverse_map() const;

  /// Checks the symbolic round trips and the Jacobian determinant; throws
  /// ValidationError naming every failed condition.
  void validate(const ZeroTest& options = {}) const;

 private:
  Chart source_;
  Chart target_;
  Vector forward_;
  std::optional<Vector> inverse_;
};

/// psi o phi.
SmoothMap compose(const SmoothMap& psi, const SmoothMap& phi);

VectorField lie_bracket(const VectorField& x, const VectorField& y);
KForm wedge(const KForm& a, const KForm& b);
KForm exterior_d(const KForm& a);
KForm interior_product(const VectorField& x, const KForm& a);
/// L_X a = i_X da + d i_X a.
KForm lie_derivative(const VectorField& x, const KForm& a);

/// psi_* X over the target chart; requires the declared inverse.
VectorField pushforward(const SmoothMap& psi, const VectorField& x);
/// psi^* a over the source chart.
KForm pullback(const SmoothMap& psi, const KForm& a);

/// Coefficients c with X = sum c_i E_i for a frame of dim() fields. Throws
/// DomainError when the frame is singular.
Vector frame_decompose(const VectorField& x, const std::vector<VectorField>& frame);
/// Coefficients of X in the span of an independent family, or nullopt when X
/// is not in the span.
std::optional<Vector> span_coefficients(const VectorField& x, const std::vector<VectorField>& family);
/// Columns are the fields of the frame.
Matrix frame_matrix(const std::vector<VectorField>& frame);

}  // namespace bilag
