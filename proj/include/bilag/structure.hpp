#pragma once

// Bi-Lagrangian structures, their Hess connection and para-Kaehler companion.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bilag/errors.hpp"
#include "bilag/symplectic.hpp"

namespace bilag {

using Frame = std::vector<VectorField>;

/// A symplectic form with two transversal Lagrangian foliations, each given
/// by a frame of n fields on a 2n-dimensional chart.
///
/// The structure also carries adapted functions (p^1..p^n, q^1..q^n): F1
/// should annihilate every q and F2 every p. They fix the fiber splitting of
/// the lift and default to the chart coordinates in order.
class BiLagStructure {
 public:
  const SymplecticForm& omega() const noexcept { return omega_; }
  const Chart& chart() const noexcept { return omega_.chart(); }
  std::size_t n() const noexcept { return chart().dim() / 2; }
  const Frame& f1() const noexcept { return f1_; }
  const Frame& f2() const noexcept { return f2_; }
  /// F1 fields followed by F2 fields.
  Frame combined_frame() const;
  /// (p^1..p^n, q^1..q^n).
  const Vector& adapted() const noexcept { return adapted_; }
  /// Advisory findings (degenerate loci, adaptedness of the declared
  /// functions); they do not invalidate the structure.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  /// True when the adapted functions pass their checks.
  bool adapted_ok() const noexcept { return adapted_ok_; }

 private:
  friend BiLagStructure validate_bilagrangian(const SymplecticForm&, Frame, Frame, std::optional<Vector>,
                                              const ZeroTest&);
  SymplecticForm omega_;
  Frame f1_;
  Frame f2_;
  Vector adapted_;
  std::vector<std::string> warnings_;
  bool adapted_ok_ = true;
};

/// Certifies the Lagrangian, transversality and involutivity conditions.
/// Throws ValidationError listing every failed condition with witnesses.
BiLagStructure validate_bilagrangian(const SymplecticForm& omega, Frame f1, Frame f2,
                                     std::optional<Vector> adapted = std::nullopt,
                                     const ZeroTest& options = {});

/// X = X1 + X2 with X_i in the span of frame i.
std::pair<VectorField, VectorField> split(const VectorField& x, const BiLagStructure& s);

/// The field D(X, Y) with i_D omega = L_X i_Y omega.
VectorField d_map(const VectorField& x, const VectorField& y, const SymplecticForm& omega);

/// nabla_X Y = D(X1,Y1) + [X2,Y1]_1 + D(X2,Y2) + [X1,Y2]_2.
VectorField hess_nabla(const VectorField& x, const VectorField& y, const BiLagStructure& s);

/// Family of expressions indexed by `rank` indices in [0, dim).
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t dim, std::size_t rank);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return rank_; }
  ScalarExpr& at(const std::vector<std::size_t>& index);
  const ScalarExpr& at(const std::vector<std::size_t>& index) const;
  const std::vector<ScalarExpr>& values() const noexcept { return values_; }
  /// Index tuple of the flat position `k`.
  std::vector<std::size_t> index_of(std::size_t k) const;

 private:
  std::size_t offset(const std::vector<std::size_t>& index) const;

  std::size_t dim_ = 0;
  std::size_t rank_ = 0;
  std::vector<ScalarExpr> values_;
};

bool equal_zero(const Tensor& t, const ZeroTest& options = {});

/// Connection given by Christoffel symbols in a frame:
/// nabla_{E_i} E_j = Gamma^k_ij E_k, stored at gammas().at({k, i, j}).
class Connection {
 public:
  Connection(Frame frame, Tensor gammas);

  const Frame& frame() const noexcept { return frame_; }
  const Chart& chart() const noexcept { return frame_.front().chart(); }
  const Tensor& gammas() const noexcept { return gammas_; }
  const ScalarExpr& gamma(std::size_t k, std::size_t i, std::size_t j) const {
    return gammas_.at({k, i, j});
  }

  /// nabla_X Y for arbitrary fields.
  VectorField nabla(const VectorField& x, const VectorField& y) const;
  /// The same connection expressed in another frame.
  Connection in_frame(const Frame& frame) const;

 private:
  Frame frame_;
  Tensor gammas_;
};

enum class FrameChoice { foliation, coordinate };

/// Christoffel symbols of the Hess connection in the combined foliation frame
/// or in the coordinate frame.
Connection christoffels(const BiLagStructure& s, FrameChoice choice = FrameChoice::foliation);

/// T^k_ij with T(E_i, E_j) = T^k_ij E_k, stored at at({k, i, j}).
Tensor torsion(const Connection& c);
/// R^l_ijk with R(E_i, E_j) E_k = R^l_ijk E_l, stored at at({l, i, j, k}).
Tensor curvature(const Connection& c);

struct FlatnessCertificate {
  bool flat = true;
  /// (l, i, j, k) and the coefficient, for every nonzero R^l_ijk.
  std::vector<std::pair<std::array<std::size_t, 4>, ScalarExpr>> nonzero;
};

FlatnessCertificate is_flat(const BiLagStructure& s, const ZeroTest& options = {});

/// Endomorphism F and metric G in the coordinate frame:
/// F = +1 on F1, -1 on F2; G_ij = omega(F d_i, d_j).
struct ParaKahler {
  Matrix f;
  Matrix g;
};

ParaKahler para_structure(const BiLagStructure& s);
/// Every failed para-Kaehler identity (F^2 = 1, eigenframes, G symmetric,
/// G(FX,FY) = -G(X,Y), omega(X,Y) = G(FX,Y)); empty when all hold.
std::vector<Issue> check_para_kahler(const ParaKahler& pk, const BiLagStructure& s,
                                     const ZeroTest& options = {});
/// Applies an endomorphism given by its coordinate matrix.
VectorField apply_matrix(const Matrix& endomorphism, const VectorField& x);

/// Coordinate-frame Christoffels of the Levi-Civita connection of G.
Connection levi_civita_oracle(const Matrix& g, const Chart& chart);

/// ((psi^{-1})^* omega, psi_* F1, psi_* F2) with adapted functions pushed.
BiLagStructure push_structure(const SmoothMap& psi, const BiLagStructure& s, const ZeroTest& options = {});
/// nabla^psi: frame psi_* E and Christoffels Gamma o psi^{-1}.
Connection push_connection(const SmoothMap& psi, const Connection& c);
/// F^psi = (J F J^{-1}) o psi^{-1}.
Matrix push_paracomplex(const SmoothMap& psi, const Matrix& f);
/// F^psi for the para-complex structure of s.
Matrix push_paracomplex(const SmoothMap& psi, const BiLagStructure& s);

}  // namespace bilag
