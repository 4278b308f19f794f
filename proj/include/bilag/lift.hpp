#pragma once

// Lifts of bi-Lagrangian structures and symplectomorphisms to the trivial
// bundle M x R^2n with omega~ = pi^* omega + d theta.
//
// Fibers are split relative to the adapted functions (p, q) of the base:
// eta = J^{-T} xi, J_ai = d_i P_a, are the fiber coordinates of theta in the
// coframe dP, so theta = sum eta_a dP_a. F1^pi is spanned by the horizontal
// lifts of F1 and d/d eta_{n+1..2n}; F2^pi by those of F2 and d/d eta_{1..n}.
// With P the coordinates this is exactly xi and d/d xi.

#include <optional>
#include <string>
#include <vector>

#include "bilag/structure.hpp"

namespace bilag {

struct LiftedStructure {
  BiLagStructure structure;
  BiLagStructure base;
  TrivialBundleChart bundle;
};

/// Fiber names "xi<level>n<i>" that do not clash with the chart.
std::vector<std::string> default_fibers(const Chart& chart, int level = 1);

/// Throws ValidationError when the lifted frames fail certification (for
/// instance when the adapted functions do not fit the foliations).
LiftedStructure lift_structure(const BiLagStructure& s, std::optional<std::vector<std::string>> fibers = std::nullopt,
                               const ZeroTest& options = {});

/// k-fold lift; k = 0 returns s. Throws DomainError when the dimension would
/// exceed max_dim.
BiLagStructure iterate_lift(const BiLagStructure& s, int k, std::size_t max_dim = 16, const ZeroTest& options = {});

struct LiftedMap {
  SmoothMap map;
  SmoothMap base;
  /// Symbolic Jacobian of `map` over its source chart.
  Matrix jacobian;
  std::vector<std::string> warnings;
};

/// psi^(x, xi) = (psi(x), (D psi^{-1})^T(psi(x)) xi), with the lift of
/// psi^{-1} as declared inverse. When omega is given and psi does not
/// preserve it, a warning is recorded.
LiftedMap lift_map(const SmoothMap& psi, const std::vector<std::string>& fibers,
                   const std::optional<SymplecticForm>& omega = std::nullopt, const ZeroTest& options = {});

struct Membership {
  std::string foliation;  // "F1" or "F2"
  std::string side;       // generator of "tilde" tested in "hat", or the reverse
  std::size_t index = 0;
  std::string field;
  bool member = false;
};

struct ActionReport {
  BiLagStructure hat;    // lift of psi |> s
  BiLagStructure tilde;  // psi^ |> lift of s
  std::vector<Membership> memberships;
  /// psi^_* F_i^pi within (psi_* F_i)^pi for both foliations.
  bool criterion = true;
  /// Mutual membership and equal forms.
  bool equal = true;
  bool forms_equal = true;
  std::vector<std::string> warnings;
};

ActionReport lifted_action_check(const SmoothMap& psi, const BiLagStructure& s,
                                 std::optional<std::vector<std::string>> fibers = std::nullopt,
                                 const ZeroTest& options = {});

}  // namespace bilag
