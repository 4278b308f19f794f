#include <algorithm>
#include <cstdlib>
#include <functional>
#include <random>
#include <unordered_map>

#include "bilag/errors.hpp"
#include "bilag/symexpr.hpp"

namespace bilag {

struct ScalarExpr::Node {
  Kind kind = Kind::constant;
  NormalForm nf;
  std::optional<Var> var;
  int exponent = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

const ScalarExpr::Node& node_of(const ScalarExpr& e) { return *e.node_; }

namespace {

using NodePtr = std::shared_ptr<const ScalarExpr::Node>;

NodePtr make_node(ScalarExpr::Kind kind, NormalForm nf, NodePtr lhs = nullptr, NodePtr rhs = nullptr,
                  int exponent = 0) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->kind = kind;
  n->nf = std::move(nf);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->exponent = exponent;
  return n;
}

NodePtr constant_node(const Rational& v) {
  return make_node(ScalarExpr::Kind::constant, NormalForm(Polynomial(v)));
}

NodePtr variable_node(const Var& v) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->kind = ScalarExpr::Kind::atom;
  n->nf = NormalForm(Polynomial::variable(v));
  n->var = v;
  return n;
}

}  // namespace

ScalarExpr::ScalarExpr() : node_(constant_node(Rational(0))) {}
ScalarExpr::ScalarExpr(const Rational& value) : node_(constant_node(value)) {}
ScalarExpr::ScalarExpr(int value) : node_(constant_node(Rational(value))) {}
ScalarExpr::ScalarExpr(long value) : node_(constant_node(Rational(value))) {}

ScalarExpr ScalarExpr::coordinate(std::string name) {
  auto atom = std::make_shared<Atom>();
  atom->kind = Atom::Kind::coordinate;
  atom->name = std::move(name);
  return ScalarExpr(variable_node(Var(std::move(atom))));
}

ScalarExpr ScalarExpr::function(std::string name, std::vector<std::string> params,
                                std::vector<int> derivs, std::vector<ScalarExpr> args) {
  if (args.size() != params.size()) {
    throw DomainError("function '" + name + "' expects " + std::to_string(params.size()) +
                      " arguments, got " + std::to_string(args.size()));
  }
  for (int d : derivs) {
    if (d < 0 || static_cast<std::size_t>(d) >= params.size()) {
      throw DomainError("derivative slot out of range for function '" + name + "'");
    }
  }
  std::sort(derivs.begin(), derivs.end());
  auto atom = std::make_shared<Atom>();
  atom->kind = Atom::Kind::function;
  atom->name = std::move(name);
  atom->params = std::move(params);
  atom->derivs = std::move(derivs);
  atom->args.reserve(args.size());
  for (auto& a : args) atom->args.push_back(a.canonical());
  return ScalarExpr(variable_node(Var(std::move(atom))));
}

ScalarExpr ScalarExpr::variable(const Var& v) { return ScalarExpr(variable_node(v)); }

ScalarExpr ScalarExpr::from_normal_form(NormalForm nf) {
  return ScalarExpr(make_node(Kind::canonical, std::move(nf)));
}

ScalarExpr::Kind ScalarExpr::kind() const noexcept { return node_->kind; }
const NormalForm& ScalarExpr::normal_form() const noexcept { return node_->nf; }
int ScalarExpr::exponent() const noexcept { return node_->exponent; }

std::vector<ScalarExpr> ScalarExpr::operands() const {
  std::vector<ScalarExpr> out;
  if (node_->lhs) out.push_back(ScalarExpr(node_->lhs));
  if (node_->rhs) out.push_back(ScalarExpr(node_->rhs));
  return out;
}

std::optional<Var> ScalarExpr::as_variable() const {
  if (node_->var) return node_->var;
  const NormalForm& nf = node_->nf;
  if (!nf.is_polynomial() || nf.numerator().size() != 1) return std::nullopt;
  const auto& [m, c] = *nf.numerator().terms().begin();
  if (c != 1 || m.factors().size() != 1 || m.factors().front().second != 1) return std::nullopt;
  return m.factors().front().first;
}

std::optional<Rational> ScalarExpr::constant_value() const {
  if (!is_constant()) return std::nullopt;
  return normal_form().numerator().constant_value();
}

ScalarExpr ScalarExpr::canonical() const {
  if (node_->kind == Kind::canonical || node_->kind == Kind::constant || node_->kind == Kind::atom) {
    return *this;
  }
  return from_normal_form(node_->nf);
}

std::string ScalarExpr::to_string() const { return node_->nf.to_string(); }

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(make_node(ScalarExpr::Kind::sum, a.node_->nf + b.node_->nf, a.node_, b.node_));
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(
      make_node(ScalarExpr::Kind::difference, a.node_->nf - b.node_->nf, a.node_, b.node_));
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(make_node(ScalarExpr::Kind::product, a.node_->nf * b.node_->nf, a.node_, b.node_));
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  if (b.is_zero()) throw DomainError("division by an expression that is identically zero");
  return ScalarExpr(make_node(ScalarExpr::Kind::quotient, a.node_->nf / b.node_->nf, a.node_, b.node_));
}

ScalarExpr ScalarExpr::operator-() const {
  return ScalarExpr(make_node(Kind::negation, -node_->nf, node_));
}

bool operator==(const ScalarExpr& a, const ScalarExpr& b) {
  return a.node_ == b.node_ || a.node_->nf == b.node_->nf;
}

int compare(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.node_ == b.node_) return 0;
  return compare(a.node_->nf, b.node_->nf);
}

ScalarExpr pow(const ScalarExpr& base, int exponent) {
  if (exponent < 0 && base.is_zero()) throw DomainError("negative power of zero");
  return ScalarExpr(make_node(ScalarExpr::Kind::power, base.node_->nf.pow(exponent), base.node_,
                              nullptr, exponent));
}

// ---------------------------------------------------------------------------
// Differentiation and substitution act on normal forms.

namespace {

NormalForm evaluate_polynomial(const Polynomial& p,
                               const std::function<NormalForm(const Var&)>& value_of) {
  std::map<Var, NormalForm> cache;
  NormalForm total;
  for (const auto& [m, c] : p.terms()) {
    NormalForm term{Polynomial(c)};
    for (const auto& [v, e] : m.factors()) {
      auto it = cache.find(v);
      if (it == cache.end()) it = cache.emplace(v, value_of(v)).first;
      term = term * it->second.pow(e);
    }
    total = total + term;
  }
  return total;
}

NormalForm derivative_of_var(const Var& v, std::string_view coordinate) {
  const Atom& a = v.atom();
  if (a.kind == Atom::Kind::coordinate) {
    return NormalForm(Polynomial(Rational(a.name == coordinate ? 1 : 0)));
  }
  NormalForm total;
  for (std::size_t k = 0; k < a.args.size(); ++k) {
    ScalarExpr inner = diff(a.args[k], coordinate);
    if (inner.is_zero()) continue;
    std::vector<int> derivs = a.derivs;
    derivs.push_back(static_cast<int>(k));
    ScalarExpr jet = ScalarExpr::function(a.name, a.params, std::move(derivs), a.args);
    total = total + jet.normal_form() * inner.normal_form();
  }
  return total;
}

NormalForm derivative_of_polynomial(const Polynomial& p, std::string_view coordinate) {
  NormalForm total;
  for (const Var& v : p.variables()) {
    NormalForm dv = derivative_of_var(v, coordinate);
    if (dv.is_zero()) continue;
    total = total + NormalForm(p.partial(v)) * dv;
  }
  return total;
}

}  // namespace

ScalarExpr diff(const ScalarExpr& e, std::string_view coordinate) {
  const NormalForm& nf = e.normal_form();
  NormalForm dn = derivative_of_polynomial(nf.numerator(), coordinate);
  if (nf.is_polynomial()) return ScalarExpr::from_normal_form(dn);
  NormalForm dd = derivative_of_polynomial(nf.denominator(), coordinate);
  NormalForm num(nf.numerator());
  NormalForm den(nf.denominator());
  return ScalarExpr::from_normal_form((dn * den - num * dd) / (den * den));
}

ScalarExpr substitute(const ScalarExpr& e, const std::map<std::string, ScalarExpr>& values) {
  std::function<NormalForm(const Var&)> value_of = [&](const Var& v) -> NormalForm {
    const Atom& a = v.atom();
    if (a.kind == Atom::Kind::coordinate) {
      auto it = values.find(a.name);
      return it == values.end() ? NormalForm(Polynomial::variable(v)) : it->second.normal_form();
    }
    std::vector<ScalarExpr> args;
    args.reserve(a.args.size());
    for (const auto& arg : a.args) args.push_back(substitute(arg, values));
    return ScalarExpr::function(a.name, a.params, a.derivs, std::move(args)).normal_form();
  };
  const NormalForm& nf = e.normal_form();
  NormalForm num = evaluate_polynomial(nf.numerator(), value_of);
  if (nf.is_polynomial()) return ScalarExpr::from_normal_form(num);
  NormalForm den = evaluate_polynomial(nf.denominator(), value_of);
  if (den.is_zero()) throw DomainError("substitution makes a denominator vanish identically");
  return ScalarExpr::from_normal_form(num / den);
}

ScalarExpr bind_function(const ScalarExpr& e, std::string_view name, const ScalarExpr& body) {
  std::function<NormalForm(const Var&)> value_of = [&](const Var& v) -> NormalForm {
    const Atom& a = v.atom();
    if (a.kind == Atom::Kind::coordinate) return NormalForm(Polynomial::variable(v));
    std::vector<ScalarExpr> args;
    args.reserve(a.args.size());
    for (const auto& arg : a.args) args.push_back(bind_function(arg, name, body));
    if (a.name != name) return ScalarExpr::function(a.name, a.params, a.derivs, std::move(args)).normal_form();
    ScalarExpr jet = body;
    for (int k : a.derivs) jet = diff(jet, a.params[k]);
    std::map<std::string, ScalarExpr> at;
    for (std::size_t k = 0; k < a.params.size(); ++k) at.emplace(a.params[k], args[k]);
    return substitute(jet, at).normal_form();
  };
  const NormalForm& nf = e.normal_form();
  NormalForm num = evaluate_polynomial(nf.numerator(), value_of);
  if (nf.is_polynomial()) return ScalarExpr::from_normal_form(num);
  NormalForm den = evaluate_polynomial(nf.denominator(), value_of);
  if (den.is_zero()) throw DomainError("binding " + std::string(name) + " makes a denominator vanish identically");
  return ScalarExpr::from_normal_form(num / den);
}

// ---------------------------------------------------------------------------
// Exact evaluation of the DAG.

namespace {

using Lookup = std::function<Rational(const Var&)>;

std::optional<Rational> eval_polynomial(const Polynomial& p, const Lookup& lookup) {
  Rational total = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational term = c;
    for (const auto& [v, e] : m.factors()) {
      Rational x = lookup(v);
      Rational power = 1;
      for (int i = 0; i < e; ++i) power *= x;
      term *= power;
    }
    total += term;
  }
  return total;
}

class Evaluator {
 public:
  explicit Evaluator(Lookup lookup) : lookup_(std::move(lookup)) {}

  // nullopt when a denominator vanishes at the point.
  std::optional<Rational> eval(const ScalarExpr::Node& n) {
    auto it = memo_.find(&n);
    if (it != memo_.end()) return it->second;
    std::optional<Rational> r = compute(n);
    memo_.emplace(&n, r);
    return r;
  }

 private:
  std::optional<Rational> compute(const ScalarExpr::Node& n) {
    using K = ScalarExpr::Kind;
    switch (n.kind) {
      case K::constant:
      case K::canonical: {
        auto num = eval_polynomial(n.nf.numerator(), lookup_);
        auto den = eval_polynomial(n.nf.denominator(), lookup_);
        if (!num || !den || *den == 0) return std::nullopt;
        return Rational(*num / *den);
      }
      case K::atom:
        return lookup_(*n.var);
      case K::negation: {
        auto a = eval(*n.lhs);
        if (!a) return std::nullopt;
        return Rational(-*a);
      }
      case K::power: {
        auto a = eval(*n.lhs);
        if (!a) return std::nullopt;
        if (n.exponent < 0 && *a == 0) return std::nullopt;
        Rational r = 1;
        for (int i = 0; i < std::abs(n.exponent); ++i) r *= *a;
        if (n.exponent < 0) r = 1 / r;
        return r;
      }
      default:
        break;
    }
    auto a = eval(*n.lhs);
    auto b = eval(*n.rhs);
    if (!a || !b) return std::nullopt;
    switch (n.kind) {
      case K::sum:
        return Rational(*a + *b);
      case K::difference:
        return Rational(*a - *b);
      case K::product:
        return Rational(*a * *b);
      case K::quotient:
        if (*b == 0) return std::nullopt;
        return Rational(*a / *b);
      default:
        throw ConsistencyError("unknown expression node");
    }
  }

  Lookup lookup_;
  std::unordered_map<const ScalarExpr::Node*, std::optional<Rational>> memo_;
};

void collect_variables(const ScalarExpr::Node& n, std::vector<Var>& out,
                       std::unordered_map<const ScalarExpr::Node*, bool>& seen) {
  if (!seen.emplace(&n, true).second) return;
  if (n.var) out.push_back(*n.var);
  if (n.kind == ScalarExpr::Kind::canonical || n.kind == ScalarExpr::Kind::constant) {
    for (const auto& v : n.nf.numerator().variables()) out.push_back(v);
    for (const auto& v : n.nf.denominator().variables()) out.push_back(v);
  }
  if (n.lhs) collect_variables(*n.lhs, out, seen);
  if (n.rhs) collect_variables(*n.rhs, out, seen);
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-60, 60);
  std::uniform_int_distribution<long> den(1, 17);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

}  // namespace

std::vector<Var> free_variables(const ScalarExpr& e) {
  std::vector<Var> vars;
  std::unordered_map<const ScalarExpr::Node*, bool> seen;
  collect_variables(node_of(e), vars, seen);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

Rational eval_num(const ScalarExpr& e, const Assignment& assignment) {
  Evaluator ev([&](const Var& v) -> Rational {
    std::string key = v.name();
    auto it = assignment.find(key);
    if (it == assignment.end()) throw DomainError("missing assignment for '" + key + "'");
    return it->second;
  });
  auto r = ev.eval(node_of(e));
  if (!r) throw DomainError("division by zero at the evaluation point");
  return *r;
}

bool equal_zero(const ScalarExpr& e, const ZeroTest& options) {
  const bool decided_zero = e.is_zero();
  if (options.samples <= 0) return decided_zero;
  if (e.kind() == ScalarExpr::Kind::constant) return decided_zero;

  std::vector<Var> vars = free_variables(e);
  std::mt19937_64 rng(options.seed);
  int evaluated = 0;
  int nonzero = 0;
  const int max_attempts = options.samples * 10;
  for (int attempt = 0; attempt < max_attempts && evaluated < options.samples; ++attempt) {
    std::map<Var, Rational> point;
    for (const auto& v : vars) point.emplace(v, random_rational(rng));
    Evaluator ev([&](const Var& v) -> Rational {
      auto it = point.find(v);
      if (it == point.end()) it = point.emplace(v, random_rational(rng)).first;
      return it->second;
    });
    auto r = ev.eval(node_of(e));
    if (!r) continue;
    ++evaluated;
    if (*r != 0) ++nonzero;
  }
  if (decided_zero && nonzero > 0) {
    throw ConsistencyError("normal form is zero but the expression evaluates to a nonzero value: " +
                           e.to_string());
  }
  if (!decided_zero && evaluated > 0 && nonzero == 0) {
    throw ConsistencyError("normal form " + e.to_string() +
                           " is nonzero but vanishes at every sampled point");
  }
  return decided_zero;
}

bool equal(const ScalarExpr& a, const ScalarExpr& b, const ZeroTest& options) {
  return equal_zero(a - b, options);
}

}  // namespace bilag
