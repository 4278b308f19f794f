#include "bilag/structure.hpp"

#include <utility>

#include "bilag/errors.hpp"

namespace bilag {

namespace {

std::string label(const char* frame, std::size_t i) { return std::string(frame) + "_" + std::to_string(i + 1); }

VectorField combine(const Vector& coefficients, const Frame& frame, std::size_t begin, std::size_t end) {
  VectorField out = VectorField::zero(frame.front().chart());
  for (std::size_t i = begin; i < end; ++i) {
    if (!coefficients[i].is_zero()) out = out + coefficients[i] * frame[i];
  }
  return out;
}

void check_frame(const Frame& frame, const Chart& chart, std::size_t n, const char* name) {
  if (frame.size() != n) {
    throw DomainError(std::string(name) + " needs " + std::to_string(n) + " fields, got " +
                      std::to_string(frame.size()));
  }
  for (const auto& e : frame) {
    if (!(e.chart() == chart)) throw DomainError(std::string(name) + " field lives on another chart");
  }
}

void check_lagrangian(const SymplecticForm& omega, const Frame& frame, const char* name,
                      const ZeroTest& options, std::vector<Issue>& issues) {
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (std::size_t j = i + 1; j < frame.size(); ++j) {
      ScalarExpr w = omega(frame[i], frame[j]);
      if (!equal_zero(w, options)) {
        issues.push_back({"not Lagrangian", "omega(" + label(name, i) + ", " + label(name, j) + ") = " + w.to_string()});
      }
    }
  }
}

void check_involutive(const Frame& frame, const char* name, std::vector<Issue>& issues) {
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (std::size_t j = i + 1; j < frame.size(); ++j) {
      VectorField b = lie_bracket(frame[i], frame[j]);
      if (!span_coefficients(b, frame)) {
        issues.push_back({"not involutive",
                          "[" + label(name, i) + ", " + label(name, j) + "] = " + b.to_string() + " leaves the span"});
      }
    }
  }
}

}  // namespace

Frame BiLagStructure::combined_frame() const {
  Frame out = f1_;
  out.insert(out.end(), f2_.begin(), f2_.end());
  return out;
}

BiLagStructure validate_bilagrangian(const SymplecticForm& omega, Frame f1, Frame f2, std::optional<Vector> adapted,
                                     const ZeroTest& options) {
  const Chart& chart = omega.chart();
  const std::size_t n = chart.dim() / 2;
  check_frame(f1, chart, n, "F1");
  check_frame(f2, chart, n, "F2");

  std::vector<Issue> issues;
  check_lagrangian(omega, f1, "F1", options, issues);
  check_lagrangian(omega, f2, "F2", options, issues);

  Frame all = f1;
  all.insert(all.end(), f2.begin(), f2.end());
  ScalarExpr det = determinant(frame_matrix(all));
  if (det.is_zero()) {
    issues.push_back({"not transversal", "the combined frame " + std::to_string(2 * n) + " fields are dependent"});
  }
  bool f1_independent = rank(frame_matrix(f1)) == n;
  bool f2_independent = rank(frame_matrix(f2)) == n;
  if (!f1_independent) issues.push_back({"dependent frame", "F1 has rank below " + std::to_string(n)});
  if (!f2_independent) issues.push_back({"dependent frame", "F2 has rank below " + std::to_string(n)});
  if (f1_independent) check_involutive(f1, "F1", issues);
  if (f2_independent) check_involutive(f2, "F2", issues);
  if (!issues.empty()) throw ValidationError(std::move(issues));

  BiLagStructure s;
  s.omega_ = omega;
  s.f1_ = std::move(f1);
  s.f2_ = std::move(f2);
  s.warnings_ = omega.warnings();
  if (!det.is_constant()) s.warnings_.push_back("frames degenerate where " + det.to_string() + " = 0");

  if (adapted) {
    if (adapted->size() != 2 * n) {
      throw DomainError("adapted functions: expected " + std::to_string(2 * n) + ", got " +
                        std::to_string(adapted->size()));
    }
    s.adapted_ = std::move(*adapted);
  } else {
    for (std::size_t i = 0; i < chart.dim(); ++i) s.adapted_.push_back(chart.coordinate(i));
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!equal_zero(s.f1_[i].apply(s.adapted_[n + a]), options)) {
        s.adapted_ok_ = false;
        s.warnings_.push_back("adapted: " + label("F1", i) + " does not annihilate q" + std::to_string(a + 1));
      }
      if (!equal_zero(s.f2_[i].apply(s.adapted_[a]), options)) {
        s.adapted_ok_ = false;
        s.warnings_.push_back("adapted: " + label("F2", i) + " does not annihilate p" + std::to_string(a + 1));
      }
    }
  }
  SmoothMap adapted_map(chart, chart, s.adapted_);
  if (determinant(adapted_map.jacobian()).is_zero()) {
    s.adapted_ok_ = false;
    s.warnings_.push_back("adapted: functions are dependent");
  }
  return s;
}

std::pair<VectorField, VectorField> split(const VectorField& x, const BiLagStructure& s) {
  Frame frame = s.combined_frame();
  Vector c = frame_decompose(x, frame);
  return {combine(c, frame, 0, s.n()), combine(c, frame, s.n(), 2 * s.n())};
}

VectorField d_map(const VectorField& x, const VectorField& y, const SymplecticForm& omega) {
  return omega.sharp(lie_derivative(x, interior_product(y, omega.form())));
}

VectorField hess_nabla(const VectorField& x, const VectorField& y, const BiLagStructure& s) {
  auto [x1, x2] = split(x, s);
  auto [y1, y2] = split(y, s);
  const SymplecticForm& w = s.omega();
  VectorField out = VectorField::zero(s.chart());
  if (!x1.is_zero() && !y1.is_zero()) out = out + d_map(x1, y1, w);
  if (!x2.is_zero() && !y1.is_zero()) out = out + split(lie_bracket(x2, y1), s).first;
  if (!x2.is_zero() && !y2.is_zero()) out = out + d_map(x2, y2, w);
  if (!x1.is_zero() && !y2.is_zero()) out = out + split(lie_bracket(x1, y2), s).second;
  return out;
}

Tensor::Tensor(std::size_t dim, std::size_t rank) : dim_(dim), rank_(rank) {
  std::size_t size = 1;
  for (std::size_t r = 0; r < rank; ++r) size *= dim;
  values_.assign(size, ScalarExpr(0));
}

std::size_t Tensor::offset(const std::vector<std::size_t>& index) const {
  if (index.size() != rank_) throw DomainError("tensor index has the wrong rank");
  std::size_t k = 0;
  for (std::size_t i : index) {
    if (i >= dim_) throw DomainError("tensor index out of range");
    k = k * dim_ + i;
  }
  return k;
}

ScalarExpr& Tensor::at(const std::vector<std::size_t>& index) { return values_[offset(index)]; }
const ScalarExpr& Tensor::at(const std::vector<std::size_t>& index) const { return values_[offset(index)]; }

std::vector<std::size_t> Tensor::index_of(std::size_t k) const {
  std::vector<std::size_t> index(rank_);
  for (std::size_t r = rank_; r-- > 0;) {
    index[r] = k % dim_;
    k /= dim_;
  }
  return index;
}

bool equal_zero(const Tensor& t, const ZeroTest& options) {
  for (const auto& v : t.values()) {
    if (!equal_zero(v, options)) return false;
  }
  return true;
}

Connection::Connection(Frame frame, Tensor gammas) : frame_(std::move(frame)), gammas_(std::move(gammas)) {
  if (frame_.empty()) throw DomainError("a connection needs a frame");
  if (gammas_.rank() != 3 || gammas_.dim() != frame_.size() || frame_.size() != chart().dim()) {
    throw DomainError("Christoffel table does not match the frame");
  }
}

VectorField Connection::nabla(const VectorField& x, const VectorField& y) const {
  Vector a = frame_decompose(x, frame_);
  Vector b = frame_decompose(y, frame_);
  const std::size_t m = frame_.size();
  Vector c(m, ScalarExpr(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t k = 0; k < m; ++k) {
      ScalarExpr sum = frame_[i].apply(b[k]);
      for (std::size_t j = 0; j < m; ++j) sum += b[j] * gamma(k, i, j);
      c[k] = (c[k] + a[i] * sum).canonical();
    }
  }
  return combine(c, frame_, 0, m);
}

Connection Connection::in_frame(const Frame& frame) const {
  const std::size_t m = frame.size();
  Tensor g(m, 3);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Vector c = frame_decompose(nabla(frame[i], frame[j]), frame);
      for (std::size_t k = 0; k < m; ++k) g.at({k, i, j}) = c[k];
    }
  }
  return Connection(frame, std::move(g));
}

Connection christoffels(const BiLagStructure& s, FrameChoice choice) {
  Frame frame;
  if (choice == FrameChoice::foliation) {
    frame = s.combined_frame();
  } else {
    for (std::size_t i = 0; i < s.chart().dim(); ++i) frame.push_back(VectorField::coordinate(s.chart(), i));
  }
  const std::size_t m = frame.size();
  Tensor g(m, 3);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Vector c = frame_decompose(hess_nabla(frame[i], frame[j], s), frame);
      for (std::size_t k = 0; k < m; ++k) g.at({k, i, j}) = c[k];
    }
  }
  return Connection(std::move(frame), std::move(g));
}

namespace {

// c[k, i, j] with [E_i, E_j] = c^k_ij E_k.
Tensor structure_constants(const Frame& frame) {
  const std::size_t m = frame.size();
  Tensor c(m, 3);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      Vector b = frame_decompose(lie_bracket(frame[i], frame[j]), frame);
      for (std::size_t k = 0; k < m; ++k) {
        c.at({k, i, j}) = b[k];
        c.at({k, j, i}) = (-b[k]).canonical();
      }
    }
  }
  return c;
}

}  // namespace

Tensor torsion(const Connection& conn) {
  const std::size_t m = conn.frame().size();
  Tensor c = structure_constants(conn.frame());
  Tensor t(m, 3);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        t.at({k, i, j}) = (conn.gamma(k, i, j) - conn.gamma(k, j, i) - c.at({k, i, j})).canonical();
      }
    }
  }
  return t;
}

Tensor curvature(const Connection& conn) {
  const Frame& e = conn.frame();
  const std::size_t m = e.size();
  Tensor c = structure_constants(e);
  Tensor r(m, 4);
  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
          ScalarExpr v = e[i].apply(conn.gamma(l, j, k)) - e[j].apply(conn.gamma(l, i, k));
          for (std::size_t s = 0; s < m; ++s) {
            v += conn.gamma(s, j, k) * conn.gamma(l, i, s) - conn.gamma(s, i, k) * conn.gamma(l, j, s) -
                 c.at({s, i, j}) * conn.gamma(l, s, k);
          }
          v = v.canonical();
          r.at({l, j, i, k}) = (-v).canonical();
          r.at({l, i, j, k}) = std::move(v);
        }
      }
    }
  }
  return r;
}

FlatnessCertificate is_flat(const BiLagStructure& s, const ZeroTest& options) {
  Tensor r = curvature(christoffels(s));
  FlatnessCertificate cert;
  for (std::size_t k = 0; k < r.values().size(); ++k) {
    if (equal_zero(r.values()[k], options)) continue;
    auto idx = r.index_of(k);
    cert.flat = false;
    cert.nonzero.push_back({{idx[0], idx[1], idx[2], idx[3]}, r.values()[k]});
  }
  return cert;
}

VectorField apply_matrix(const Matrix& endomorphism, const VectorField& x) {
  return VectorField(x.chart(), multiply(endomorphism, x.components()));
}

ParaKahler para_structure(const BiLagStructure& s) {
  const std::size_t m = s.chart().dim();
  Matrix frame = frame_matrix(s.combined_frame());
  Matrix diag = identity_matrix(m);
  for (std::size_t i = s.n(); i < m; ++i) diag[i][i] = ScalarExpr(-1);
  ParaKahler pk;
  pk.f = multiply(multiply(frame, diag), inverse(frame));
  // G_ij = omega(F d_i, d_j) = F_ai Omega_aj.
  pk.g = multiply(transpose(pk.f), s.omega().matrix());
  return pk;
}

std::vector<Issue> check_para_kahler(const ParaKahler& pk, const BiLagStructure& s, const ZeroTest& options) {
  std::vector<Issue> issues;
  const std::size_t m = s.chart().dim();
  Matrix f2 = multiply(pk.f, pk.f);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      ScalarExpr d = f2[i][j] - ScalarExpr(i == j ? 1 : 0);
      if (!equal_zero(d, options)) {
        issues.push_back({"F^2 != 1", "entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")"});
      }
      if (!equal_zero(pk.g[i][j] - pk.g[j][i], options)) {
        issues.push_back({"G not symmetric", "entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")"});
      }
    }
  }
  Frame frame = s.combined_frame();
  for (std::size_t i = 0; i < m; ++i) {
    VectorField expected = i < s.n() ? frame[i] : -frame[i];
    if (!equal_zero(apply_matrix(pk.f, frame[i]) - expected, options)) {
      issues.push_back({"eigenframe", "F(E_" + std::to_string(i + 1) + ") has the wrong sign"});
    }
  }
  auto metric = [&](const VectorField& x, const VectorField& y) {
    Vector gy = multiply(pk.g, y.components());
    ScalarExpr v(0);
    for (std::size_t a = 0; a < m; ++a) v += x[a] * gy[a];
    return v.canonical();
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      VectorField fx = apply_matrix(pk.f, frame[i]);
      VectorField fy = apply_matrix(pk.f, frame[j]);
      std::string pair = "(E_" + std::to_string(i + 1) + ", E_" + std::to_string(j + 1) + ")";
      if (!equal_zero(metric(fx, fy) + metric(frame[i], frame[j]), options)) {
        issues.push_back({"G(FX,FY) != -G(X,Y)", pair});
      }
      if (!equal_zero(s.omega()(frame[i], frame[j]) - metric(fx, frame[j]), options)) {
        issues.push_back({"omega(X,Y) != G(FX,Y)", pair});
      }
    }
  }
  return issues;
}

Connection levi_civita_oracle(const Matrix& g, const Chart& chart) {
  const std::size_t m = chart.dim();
  if (g.size() != m) throw DomainError("metric does not match the chart");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!(g[i][j] - g[j][i]).is_zero()) throw DomainError("metric is not symmetric");
    }
  }
  if (determinant(g).is_zero()) throw DomainError("metric is degenerate");
  Matrix ginv = inverse(g);
  auto d = [&](const ScalarExpr& e, std::size_t i) { return diff(e, chart.name(i)); };
  Tensor gamma(m, 3);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        ScalarExpr v(0);
        for (std::size_t l = 0; l < m; ++l) {
          if (ginv[k][l].is_zero()) continue;
          v += ginv[k][l] * (d(g[i][l], j) + d(g[l][j], i) - d(g[i][j], l));
        }
        gamma.at({k, i, j}) = (Rational(1, 2) * v).canonical();
      }
    }
  }
  Frame frame;
  for (std::size_t i = 0; i < m; ++i) frame.push_back(VectorField::coordinate(chart, i));
  return Connection(std::move(frame), std::move(gamma));
}

BiLagStructure push_structure(const SmoothMap& psi, const BiLagStructure& s, const ZeroTest& options) {
  if (!(psi.source() == s.chart())) throw DomainError("map source does not match the structure chart");
  if (!psi.has_inverse()) throw DomainError("pushing a structure needs the declared inverse");
  psi.validate(options);
  SymplecticForm omega = validate_symplectic(pullback(psi.inverse_map(), s.omega().form()), options);
  Frame f1;
  Frame f2;
  for (const auto& e : s.f1()) f1.push_back(pushforward(psi, e));
  for (const auto& e : s.f2()) f2.push_back(pushforward(psi, e));
  Vector adapted;
  for (const auto& p : s.adapted()) adapted.push_back(psi.push(p));
  return validate_bilagrangian(omega, std::move(f1), std::move(f2), std::move(adapted), options);
}

Connection push_connection(const SmoothMap& psi, const Connection& c) {
  if (!(psi.source() == c.chart())) throw DomainError("map source does not match the connection chart");
  if (!psi.has_inverse()) throw DomainError("pushing a connection needs the declared inverse");
  Frame frame;
  for (const auto& e : c.frame()) frame.push_back(pushforward(psi, e));
  Tensor g(c.gammas().dim(), 3);
  for (std::size_t k = 0; k < g.values().size(); ++k) {
    g.at(g.index_of(k)) = psi.push(c.gammas().values()[k]);
  }
  return Connection(std::move(frame), std::move(g));
}

Matrix push_paracomplex(const SmoothMap& psi, const Matrix& f) {
  if (!psi.has_inverse()) throw DomainError("pushing F needs the declared inverse");
  Matrix pushed = f;
  for (auto& row : pushed) {
    for (auto& e : row) e = psi.push(e);
  }
  Matrix j = psi.jacobian_at_target();
  Matrix out = multiply(multiply(j, pushed), inverse(j));
  for (auto& row : out) {
    for (auto& e : row) e = e.canonical();
  }
  return out;
}

Matrix push_paracomplex(const SmoothMap& psi, const BiLagStructure& s) {
  return push_paracomplex(psi, para_structure(s).f);
}

}  // namespace bilag
