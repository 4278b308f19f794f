#include "bilag/calculus.hpp"

#include <algorithm>
#include <set>

#include "bilag/errors.hpp"
#include "bilag/parse.hpp"

namespace bilag {

namespace {

void require_same_chart(const Chart& a, const Chart& b, const char* what) {
  if (!(a == b)) throw DomainError(std::string(what) + ": chart mismatch");
}

// Sorts `index` in place; returns the permutation sign, or 0 on a repeat.
int sort_with_sign(KForm::Index& index) {
  int sign = 1;
  for (std::size_t i = 1; i < index.size(); ++i) {
    for (std::size_t j = i; j > 0 && index[j - 1] > index[j]; --j) {
      std::swap(index[j - 1], index[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < index.size(); ++i) {
    if (index[i] == index[i - 1]) return 0;
  }
  return sign;
}

std::map<std::string, ScalarExpr> bind(const Chart& chart, const Vector& values) {
  std::map<std::string, ScalarExpr> out;
  for (std::size_t i = 0; i < chart.dim(); ++i) out.emplace(chart.name(i), values[i]);
  return out;
}

std::string coefficient_prefix(const ScalarExpr& c) {
  if (auto v = c.constant_value()) {
    if (*v == 1) return "";
    if (*v == -1) return "-";
  }
  return "(" + c.to_string() + ") ";
}

}  // namespace

// ---------------------------------------------------------------------------
// Chart

Chart::Chart(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw DomainError("a chart needs at least one coordinate");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!is_identifier(n)) throw DomainError("'" + n + "' is not a valid coordinate name");
    if (!seen.insert(n).second) throw DomainError("coordinate '" + n + "' is declared twice");
  }
}

std::optional<std::size_t> Chart::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

Chart Chart::extended(const std::vector<std::string>& more) const {
  std::vector<std::string> all = names_;
  all.insert(all.end(), more.begin(), more.end());
  return Chart(std::move(all));
}

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(Chart chart, Vector components)
    : chart_(std::move(chart)), components_(std::move(components)) {
  if (components_.size() != chart_.dim()) {
    throw DomainError("vector field has " + std::to_string(components_.size()) +
                      " components on a chart of dimension " + std::to_string(chart_.dim()));
  }
}

VectorField VectorField::zero(const Chart& chart) {
  return VectorField(chart, Vector(chart.dim(), ScalarExpr(0)));
}

VectorField VectorField::coordinate(const Chart& chart, std::size_t i) {
  Vector c(chart.dim(), ScalarExpr(0));
  c.at(i) = ScalarExpr(1);
  return VectorField(chart, std::move(c));
}

ScalarExpr VectorField::apply(const ScalarExpr& f) const {
  ScalarExpr out(0);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].is_zero()) continue;
    ScalarExpr d = diff(f, chart_.name(i));
    if (d.is_zero()) continue;
    out += components_[i] * d;
  }
  return out.canonical();
}

bool VectorField::is_zero() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const ScalarExpr& c) { return c.is_zero(); });
}

VectorField VectorField::operator-() const {
  Vector c;
  for (const auto& e : components_) c.push_back((-e).canonical());
  return VectorField(chart_, std::move(c));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_chart(a.chart_, b.chart_, "vector field sum");
  Vector c;
  for (std::size_t i = 0; i < a.dim(); ++i) c.push_back((a[i] + b[i]).canonical());
  return VectorField(a.chart_, std::move(c));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same_chart(a.chart_, b.chart_, "vector field difference");
  Vector c;
  for (std::size_t i = 0; i < a.dim(); ++i) c.push_back((a[i] - b[i]).canonical());
  return VectorField(a.chart_, std::move(c));
}

VectorField operator*(const ScalarExpr& f, const VectorField& x) {
  Vector c;
  for (const auto& e : x.components_) c.push_back((f * e).canonical());
  return VectorField(x.chart_, std::move(c));
}

bool operator==(const VectorField& a, const VectorField& b) {
  return a.chart_ == b.chart_ && a.components_.size() == b.components_.size() &&
         std::equal(a.components_.begin(), a.components_.end(), b.components_.begin());
}

std::string VectorField::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out += ", ";
    out += components_[i].to_string();
  }
  return out + ")";
}

bool equal_zero(const VectorField& x, const ZeroTest& options) {
  bool zero = true;
  for (const auto& c : x.components()) zero = equal_zero(c, options) && zero;
  return zero;
}

// ---------------------------------------------------------------------------
// KForm

KForm::KForm(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
  if (degree < 0 || static_cast<std::size_t>(degree) > chart_.dim()) {
    throw DomainError("form degree " + std::to_string(degree) + " out of range for dimension " +
                      std::to_string(chart_.dim()));
  }
}

KForm KForm::function(const Chart& chart, const ScalarExpr& f) {
  KForm a(chart, 0);
  a.add({}, f);
  return a;
}

KForm KForm::differential(const Chart& chart, std::size_t i) {
  if (i >= chart.dim()) throw DomainError("differential index out of range");
  KForm a(chart, 1);
  a.add({static_cast<int>(i)}, ScalarExpr(1));
  return a;
}

ScalarExpr KForm::coefficient(Index index) const {
  if (static_cast<int>(index.size()) != degree_) throw DomainError("index length differs from degree");
  int sign = sort_with_sign(index);
  if (sign == 0) return ScalarExpr(0);
  auto it = terms_.find(index);
  if (it == terms_.end()) return ScalarExpr(0);
  return sign > 0 ? it->second : (-it->second).canonical();
}

void KForm::add(Index index, const ScalarExpr& c) {
  if (static_cast<int>(index.size()) != degree_) throw DomainError("index length differs from degree");
  for (int i : index) {
    if (i < 0 || static_cast<std::size_t>(i) >= chart_.dim()) throw DomainError("form index out of range");
  }
  if (c.is_zero()) return;
  int sign = sort_with_sign(index);
  if (sign == 0) return;
  auto it = terms_.find(index);
  ScalarExpr value = sign > 0 ? c : -c;
  if (it == terms_.end()) {
    terms_.emplace(std::move(index), value.canonical());
    return;
  }
  it->second = (it->second + value).canonical();
  if (it->second.is_zero()) terms_.erase(it);
}

ScalarExpr KForm::evaluate(const std::vector<VectorField>& vectors) const {
  if (static_cast<int>(vectors.size()) != degree_) {
    throw DomainError("a " + std::to_string(degree_) + "-form needs " + std::to_string(degree_) +
                      " arguments");
  }
  for (const auto& v : vectors) require_same_chart(chart_, v.chart(), "form evaluation");
  ScalarExpr out(0);
  for (const auto& [index, c] : terms_) {
    Matrix m(vectors.size(), Vector(index.size()));
    for (std::size_t r = 0; r < vectors.size(); ++r) {
      for (std::size_t s = 0; s < index.size(); ++s) {
        m[r][s] = vectors[r][static_cast<std::size_t>(index[s])];
      }
    }
    ScalarExpr d = determinant(m);
    if (!d.is_zero()) out += c * d;
  }
  return out.canonical();
}

Matrix KForm::matrix() const {
  if (degree_ != 2) throw DomainError("coefficient matrix needs a 2-form");
  const std::size_t m = chart_.dim();
  Matrix out(m, Vector(m, ScalarExpr(0)));
  for (const auto& [index, c] : terms_) {
    auto i = static_cast<std::size_t>(index[0]);
    auto j = static_cast<std::size_t>(index[1]);
    out[i][j] = c;
    out[j][i] = (-c).canonical();
  }
  return out;
}

bool KForm::is_zero() const { return terms_.empty(); }

KForm KForm::operator-() const {
  KForm out(chart_, degree_);
  for (const auto& [index, c] : terms_) out.terms_.emplace(index, (-c).canonical());
  return out;
}

KForm operator+(const KForm& a, const KForm& b) {
  require_same_chart(a.chart_, b.chart_, "form sum");
  if (a.degree_ != b.degree_) throw DomainError("form sum: degrees differ");
  KForm out = a;
  for (const auto& [index, c] : b.terms_) out.add(index, c);
  return out;
}

KForm operator-(const KForm& a, const KForm& b) { return a + (-b); }

KForm operator*(const ScalarExpr& f, const KForm& a) {
  KForm out(a.chart_, a.degree_);
  for (const auto& [index, c] : a.terms_) out.add(index, f * c);
  return out;
}

bool operator==(const KForm& a, const KForm& b) {
  return a.chart_ == b.chart_ && a.degree_ == b.degree_ && a.terms_.size() == b.terms_.size() &&
         std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                    [](const auto& x, const auto& y) { return x.first == y.first && x.second == y.second; });
}

std::string KForm::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [index, c] : terms_) {
    if (!out.empty()) out += " + ";
    if (index.empty()) {
      out += c.to_string();
      continue;
    }
    out += coefficient_prefix(c);
    for (std::size_t r = 0; r < index.size(); ++r) {
      if (r) out += '^';
      out += "d" + chart_.name(static_cast<std::size_t>(index[r]));
    }
  }
  return out;
}

bool equal_zero(const KForm& a, const ZeroTest& options) {
  bool zero = true;
  for (const auto& [index, c] : a.terms()) zero = equal_zero(c, options) && zero;
  return zero;
}

// ---------------------------------------------------------------------------
// SmoothMap

SmoothMap::SmoothMap(Chart source, Chart target, Vector forward, std::optional<Vector> inverse)
    : source_(std::move(source)),
      target_(std::move(target)),
      forward_(std::move(forward)),
      inverse_(std::move(inverse)) {
  if (forward_.size() != target_.dim()) {
    throw DomainError("map needs one component per target coordinate");
  }
  if (inverse_ && inverse_->size() != source_.dim()) {
    throw DomainError("inverse needs one component per source coordinate");
  }
}

SmoothMap SmoothMap::identity(const Chart& chart) {
  Vector id;
  for (std::size_t i = 0; i < chart.dim(); ++i) id.push_back(chart.coordinate(i));
  return SmoothMap(chart, chart, id, id);
}

Matrix SmoothMap::jacobian() const {
  Matrix j(target_.dim(), Vector(source_.dim()));
  for (std::size_t i = 0; i < target_.dim(); ++i) {
    for (std::size_t k = 0; k < source_.dim(); ++k) j[i][k] = diff(forward_[i], source_.name(k));
  }
  return j;
}

Matrix SmoothMap::jacobian_at_target() const {
  Matrix j = jacobian();
  for (auto& row : j) {
    for (auto& e : row) e = push(e);
  }
  return j;
}

ScalarExpr SmoothMap::pull(const ScalarExpr& f) const {
  return substitute(f, bind(target_, forward_));
}

ScalarExpr SmoothMap::push(const ScalarExpr& g) const {
  if (!inverse_) throw DomainError("map has no declared inverse");
  return substitute(g, bind(source_, *inverse_));
}

SmoothMap SmoothMap::inverse_map() const {
  if (!inverse_) throw DomainError("map has no declared inverse");
  return SmoothMap(target_, source_, *inverse_, forward_);
}

void SmoothMap::validate(const ZeroTest& options) const {
  std::vector<Issue> issues;
  if (source_.dim() != target_.dim()) {
    issues.push_back({"dimension", "source and target dimensions differ"});
    throw ValidationError(std::move(issues));
  }
  ScalarExpr det = determinant(jacobian());
  if (equal_zero(det, options)) {
    issues.push_back({"singular Jacobian", "determinant normalizes to zero"});
  }
  if (!inverse_) {
    issues.push_back({"missing inverse", "no inverse was declared"});
  } else {
    for (std::size_t i = 0; i < target_.dim(); ++i) {
      ScalarExpr back = push(forward_[i]);
      if (!equal(back, target_.coordinate(i), options)) {
        issues.push_back({"round trip", "forward after inverse gives " + back.to_string() + " for " +
                                            target_.name(i)});
      }
    }
    for (std::size_t i = 0; i < source_.dim(); ++i) {
      ScalarExpr back = pull((*inverse_)[i]);
      if (!equal(back, source_.coordinate(i), options)) {
        issues.push_back({"round trip", "inverse after forward gives " + back.to_string() + " for " +
                                            source_.name(i)});
      }
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

SmoothMap compose(const SmoothMap& psi, const SmoothMap& phi) {
  require_same_chart(psi.source(), phi.target(), "composition");
  Vector forward;
  auto through_phi = bind(psi.source(), phi.forward());
  for (const auto& c : psi.forward()) forward.push_back(substitute(c, through_phi));
  std::optional<Vector> inverse;
  if (psi.has_inverse() && phi.has_inverse()) {
    inverse.emplace();
    auto through_psi = bind(phi.target(), *psi.inverse());
    for (const auto& c : *phi.inverse()) inverse->push_back(substitute(c, through_psi));
  }
  return SmoothMap(phi.source(), psi.target(), std::move(forward), std::move(inverse));
}

// ---------------------------------------------------------------------------
// Cartan calculus

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_chart(x.chart(), y.chart(), "lie_bracket");
  Vector c;
  for (std::size_t j = 0; j < x.dim(); ++j) c.push_back((x.apply(y[j]) - y.apply(x[j])).canonical());
  return VectorField(x.chart(), std::move(c));
}

KForm wedge(const KForm& a, const KForm& b) {
  require_same_chart(a.chart(), b.chart(), "wedge");
  const int degree = a.degree() + b.degree();
  if (static_cast<std::size_t>(degree) > a.chart().dim()) {
    throw DomainError("wedge: degree " + std::to_string(degree) + " exceeds the dimension");
  }
  KForm out(a.chart(), degree);
  for (const auto& [i, ci] : a.terms()) {
    for (const auto& [j, cj] : b.terms()) {
      KForm::Index index = i;
      index.insert(index.end(), j.begin(), j.end());
      out.add(std::move(index), ci * cj);
    }
  }
  return out;
}

KForm exterior_d(const KForm& a) {
  const Chart& chart = a.chart();
  // d of a top-degree form vanishes; it is returned as the zero form.
  if (static_cast<std::size_t>(a.degree()) >= chart.dim()) return KForm(chart, a.degree());
  KForm out(chart, a.degree() + 1);
  for (const auto& [index, c] : a.terms()) {
    for (std::size_t i = 0; i < chart.dim(); ++i) {
      ScalarExpr d = diff(c, chart.name(i));
      if (d.is_zero()) continue;
      KForm::Index with{static_cast<int>(i)};
      with.insert(with.end(), index.begin(), index.end());
      out.add(std::move(with), d);
    }
  }
  return out;
}

KForm interior_product(const VectorField& x, const KForm& a) {
  require_same_chart(x.chart(), a.chart(), "interior_product");
  if (a.degree() == 0) throw DomainError("interior product of a 0-form");
  KForm out(a.chart(), a.degree() - 1);
  for (const auto& [index, c] : a.terms()) {
    for (std::size_t r = 0; r < index.size(); ++r) {
      const ScalarExpr& xr = x[static_cast<std::size_t>(index[r])];
      if (xr.is_zero()) continue;
      KForm::Index rest;
      for (std::size_t s = 0; s < index.size(); ++s) {
        if (s != r) rest.push_back(index[s]);
      }
      ScalarExpr term = c * xr;
      out.add(std::move(rest), r % 2 == 0 ? term : -term);
    }
  }
  return out;
}

KForm lie_derivative(const VectorField& x, const KForm& a) {
  require_same_chart(x.chart(), a.chart(), "lie_derivative");
  if (a.degree() == 0) return KForm::function(a.chart(), x.apply(a.coefficient({})));
  KForm out(a.chart(), a.degree());
  if (static_cast<std::size_t>(a.degree()) < a.chart().dim()) {
    out = out + interior_product(x, exterior_d(a));
  }
  return out + exterior_d(interior_product(x, a));
}

VectorField pushforward(const SmoothMap& psi, const VectorField& x) {
  require_same_chart(psi.source(), x.chart(), "pushforward");
  if (!psi.has_inverse()) throw DomainError("pushforward needs a declared inverse");
  Vector c = multiply(psi.jacobian(), x.components());
  for (auto& e : c) e = psi.push(e);
  return VectorField(psi.target(), std::move(c));
}

KForm pullback(const SmoothMap& psi, const KForm& a) {
  require_same_chart(psi.target(), a.chart(), "pullback");
  const Chart& source = psi.source();
  Matrix j = psi.jacobian();
  std::vector<KForm> pulled_differentials;
  for (std::size_t i = 0; i < psi.target().dim(); ++i) {
    KForm d(source, 1);
    for (std::size_t k = 0; k < source.dim(); ++k) d.add({static_cast<int>(k)}, j[i][k]);
    pulled_differentials.push_back(std::move(d));
  }
  KForm out(source, a.degree());
  for (const auto& [index, c] : a.terms()) {
    KForm term = KForm::function(source, psi.pull(c));
    for (int i : index) term = wedge(term, pulled_differentials[static_cast<std::size_t>(i)]);
    out = out + term;
  }
  return out;
}

Matrix frame_matrix(const std::vector<VectorField>& frame) {
  if (frame.empty()) throw DomainError("empty frame");
  const std::size_t m = frame.front().dim();
  Matrix out(m, Vector(frame.size()));
  for (std::size_t j = 0; j < frame.size(); ++j) {
    require_same_chart(frame.front().chart(), frame[j].chart(), "frame");
    for (std::size_t i = 0; i < m; ++i) out[i][j] = frame[j][i];
  }
  return out;
}

Vector frame_decompose(const VectorField& x, const std::vector<VectorField>& frame) {
  if (frame.size() != x.dim()) {
    throw DomainError("frame_decompose needs " + std::to_string(x.dim()) + " fields, got " +
                      std::to_string(frame.size()));
  }
  try {
    return solve(frame_matrix(frame), x.components());
  } catch (const DomainError&) {
    throw DomainError("frame is singular (its determinant normalizes to zero)");
  }
}

std::optional<Vector> span_coefficients(const VectorField& x, const std::vector<VectorField>& family) {
  if (family.empty()) {
    if (x.is_zero()) return Vector{};
    return std::nullopt;
  }
  require_same_chart(x.chart(), family.front().chart(), "span membership");
  return solve_in_span(frame_matrix(family), x.components());
}

}  // namespace bilag
