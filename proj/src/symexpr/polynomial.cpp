#include <algorithm>
#include <optional>
#include <sstream>

#include "bilag/errors.hpp"
#include "bilag/symexpr.hpp"

namespace bilag {

// ---------------------------------------------------------------------------
// Var

Var::Var(std::shared_ptr<const Atom> atom) : atom_(std::move(atom)) {}

bool Var::is_coordinate() const noexcept { return atom_->kind == Atom::Kind::coordinate; }

namespace {

bool single_char_params(const std::vector<std::string>& params) {
  return std::all_of(params.begin(), params.end(),
                     [](const std::string& p) { return p.size() == 1; });
}

bool natural_arguments(const Atom& a) {
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    auto v = a.args[i].as_variable();
    if (!v || !v->is_coordinate() || v->atom().name != a.params[i]) return false;
  }
  return true;
}

template <typename T>
int three_way(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

std::string Var::name() const {
  const Atom& a = *atom_;
  if (a.kind == Atom::Kind::coordinate) return a.name;
  std::string out = a.name;
  if (!a.derivs.empty()) {
    out += '_';
    if (single_char_params(a.params)) {
      for (int d : a.derivs) out += a.params[static_cast<std::size_t>(d)];
    } else {
      out += '{';
      for (std::size_t i = 0; i < a.derivs.size(); ++i) {
        if (i) out += ',';
        out += a.params[static_cast<std::size_t>(a.derivs[i])];
      }
      out += '}';
    }
  }
  if (!natural_arguments(a)) {
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ", ";
      out += a.args[i].to_string();
    }
    out += ')';
  }
  return out;
}

int compare(const Var& a, const Var& b) {
  if (a.atom_ == b.atom_) return 0;
  const Atom& x = *a.atom_;
  const Atom& y = *b.atom_;
  if (x.kind != y.kind) return x.kind == Atom::Kind::coordinate ? -1 : 1;
  if (int c = x.name.compare(y.name)) return c < 0 ? -1 : 1;
  if (x.kind == Atom::Kind::coordinate) return 0;
  if (int c = three_way(x.derivs, y.derivs)) return c;
  if (int c = three_way(x.params, y.params)) return c;
  if (x.args.size() != y.args.size()) return x.args.size() < y.args.size() ? -1 : 1;
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (int c = compare(x.args[i], y.args[i])) return c;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::of(const Var& v, int exponent) {
  Monomial m;
  if (exponent > 0) m.factors_.emplace_back(v, exponent);
  return m;
}

int Monomial::degree_in(const Var& v) const {
  for (const auto& [var, e] : factors_) {
    int c = compare(var, v);
    if (c == 0) return e;
    if (c > 0) break;
  }
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  auto i = factors_.begin();
  auto j = other.factors_.begin();
  while (i != factors_.end() && j != other.factors_.end()) {
    int c = compare(i->first, j->first);
    if (c < 0) {
      out.factors_.push_back(*i++);
    } else if (c > 0) {
      out.factors_.push_back(*j++);
    } else {
      out.factors_.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  out.factors_.insert(out.factors_.end(), i, factors_.end());
  out.factors_.insert(out.factors_.end(), j, other.factors_.end());
  return out;
}

bool Monomial::divides(const Monomial& other) const {
  auto j = other.factors_.begin();
  for (const auto& [v, e] : factors_) {
    while (j != other.factors_.end() && compare(j->first, v) < 0) ++j;
    if (j == other.factors_.end() || compare(j->first, v) != 0 || j->second < e) return false;
  }
  return true;
}

Monomial Monomial::operator/(const Monomial& divisor) const {
  Monomial out;
  auto j = divisor.factors_.begin();
  for (const auto& [v, e] : factors_) {
    int exp = e;
    if (j != divisor.factors_.end() && compare(j->first, v) == 0) {
      exp -= j->second;
      ++j;
    }
    if (exp < 0) throw DomainError("monomial division is not exact");
    if (exp > 0) out.factors_.emplace_back(v, exp);
  }
  if (j != divisor.factors_.end()) throw DomainError("monomial division is not exact");
  return out;
}

Monomial Monomial::without(const Var& v) const {
  Monomial out;
  for (const auto& f : factors_) {
    if (compare(f.first, v) != 0) out.factors_.push_back(f);
  }
  return out;
}

Monomial Monomial::common(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto j = b.factors_.begin();
  for (const auto& [v, e] : a.factors_) {
    while (j != b.factors_.end() && compare(j->first, v) < 0) ++j;
    if (j != b.factors_.end() && compare(j->first, v) == 0) {
      out.factors_.emplace_back(v, std::min(e, j->second));
    }
  }
  return out;
}

int compare(const Monomial& a, const Monomial& b) {
  auto i = a.factors_.begin();
  auto j = b.factors_.begin();
  while (i != a.factors_.end() && j != b.factors_.end()) {
    int c = compare(i->first, j->first);
    if (c < 0) return 1;
    if (c > 0) return -1;
    if (i->second != j->second) return i->second > j->second ? 1 : -1;
    ++i;
    ++j;
  }
  if (i != a.factors_.end()) return 1;
  if (j != b.factors_.end()) return -1;
  return 0;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(const Rational& constant) {
  if (constant != 0) terms_.emplace(Monomial(), constant);
}

Polynomial Polynomial::variable(const Var& v) { return term(Monomial::of(v), Rational(1)); }

Polynomial Polynomial::term(const Monomial& m, const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.emplace(m, c);
  return p;
}

bool Polynomial::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_value() const {
  if (!is_constant()) throw DomainError("polynomial is not constant");
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

const Monomial& Polynomial::leading_monomial() const {
  if (terms_.empty()) throw DomainError("leading monomial of the zero polynomial");
  return terms_.begin()->first;
}

const Rational& Polynomial::leading_coefficient() const {
  if (terms_.empty()) throw DomainError("leading coefficient of the zero polynomial");
  return terms_.begin()->second;
}

std::vector<Var> Polynomial::variables() const {
  std::vector<Var> vars;
  for (const auto& [m, c] : terms_) {
    for (const auto& f : m.factors()) vars.push_back(f.first);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

int Polynomial::degree_in(const Var& v) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree_in(v));
  return d;
}

std::vector<Polynomial> Polynomial::coefficients_in(const Var& v) const {
  std::vector<Polynomial> out(static_cast<std::size_t>(degree_in(v)) + 1);
  for (const auto& [m, c] : terms_) {
    out[static_cast<std::size_t>(m.degree_in(v))].add_term(m.without(v), c);
  }
  return out;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  }
  return out;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return {};
  Polynomial out = *this;
  for (auto& [m, k] : out.terms_) k *= c;
  return out;
}

Polynomial Polynomial::times(const Monomial& m) const {
  Polynomial out;
  for (const auto& [mm, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), mm * m, c);
  return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result(Rational(1));
  Polynomial base = *this;
  while (exponent) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent) base = base * base;
  }
  return result;
}

Polynomial Polynomial::partial(const Var& v) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    int e = m.degree_in(v);
    if (e == 0) continue;
    Monomial reduced = m.without(v) * Monomial::of(v, e - 1);
    out.add_term(reduced, c * e);
  }
  return out;
}

Polynomial Polynomial::monic() const {
  if (terms_.empty()) return {};
  Rational lc = leading_coefficient();
  if (lc == 1) return *this;
  return scaled(1 / lc);
}

int compare(const Polynomial& a, const Polynomial& b) {
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  for (; i != a.terms_.end() && j != b.terms_.end(); ++i, ++j) {
    if (int c = compare(i->first, j->first)) return c;
    if (int c = cmp(i->second, j->second)) return c < 0 ? -1 : 1;
  }
  if (i != a.terms_.end()) return 1;
  if (j != b.terms_.end()) return -1;
  return 0;
}

namespace {

void print_factor(std::ostream& os, const Monomial::Factor& f) {
  os << f.first.name();
  if (f.second != 1) os << '^' << f.second;
}

void print_monomial(std::ostream& os, const Monomial& m) {
  bool first = true;
  for (const auto& f : m.factors()) {
    if (!first) os << '*';
    print_factor(os, f);
    first = false;
  }
}

}  // namespace

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational magnitude = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (m.is_one()) {
      os << magnitude.get_str();
    } else {
      if (magnitude != 1) os << magnitude.get_str() << '*';
      print_monomial(os, m);
    }
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Division and gcd

namespace {

// Quotient when b divides a exactly, else nullopt. Quotient terms are confined
// to the degree box deg(a) - deg(b), which bounds the work when b does not
// divide a.
std::optional<Polynomial> divide_exactly(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  if (b.is_constant()) return a.scaled(1 / b.constant_value());
  if (a.is_zero()) return Polynomial();
  std::vector<std::pair<Var, int>> box;
  for (const Var& v : a.variables()) box.emplace_back(v, a.degree_in(v) - b.degree_in(v));
  for (const Var& v : b.variables()) {
    if (a.degree_in(v) < b.degree_in(v)) return std::nullopt;
  }
  auto within_box = [&](const Monomial& m) {
    for (const auto& [v, e] : m.factors()) {
      auto it = std::find_if(box.begin(), box.end(), [&](const auto& p) { return p.first == v; });
      if (it == box.end() || e > it->second) return false;
    }
    return true;
  };
  Polynomial quotient;
  Polynomial rest = a;
  const Monomial& lm = b.leading_monomial();
  const Rational& lc = b.leading_coefficient();
  while (!rest.is_zero()) {
    const Monomial& top = rest.leading_monomial();
    if (!lm.divides(top)) return std::nullopt;
    Monomial qm = top / lm;
    if (!within_box(qm)) return std::nullopt;
    Polynomial t = Polynomial::term(qm, rest.leading_coefficient() / lc);
    rest -= t * b;
    quotient += t;
  }
  return quotient;
}

}  // namespace

Polynomial exact_quotient(const Polynomial& a, const Polynomial& b) {
  auto q = divide_exactly(a, b);
  if (!q) throw DomainError("polynomial division is not exact");
  return *std::move(q);
}

namespace {

Polynomial monomial_gcd(const Monomial& m, const Polynomial& p) {
  Monomial g = m;
  for (const auto& [mm, c] : p.terms()) {
    g = Monomial::common(g, mm);
    if (g.is_one()) break;
  }
  return Polynomial::term(g, Rational(1));
}

Polynomial content_in(const Polynomial& p, const Var& v) {
  Polynomial g;
  for (const auto& c : p.coefficients_in(v)) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

Polynomial primitive_part(const Polynomial& p, const Var& v) {
  Polynomial c = content_in(p, v);
  return exact_quotient(p, c).monic();
}

// Pseudo-remainder of a by b as polynomials in v.
Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, const Var& v) {
  const int db = b.degree_in(v);
  const Polynomial lcb = b.coefficients_in(v).back();
  Polynomial r = a;
  int dr = r.degree_in(v);
  while (!r.is_zero() && dr >= db) {
    Polynomial lcr = r.coefficients_in(v).back();
    r = lcb * r - (lcr * b).times(Monomial::of(v, dr - db));
    dr = r.degree_in(v);
  }
  return r;
}

// Heuristic gcd over Z (evaluate the main variable at a large integer,
// recurse, interpolate the result in that base, confirm by division).
// Inputs have integer coefficients.

mpz_class integer_of(const Rational& r) { return r.get_num(); }

Rational ratio(const mpz_class& num, const mpz_class& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

bool has_integer_coefficients(const Polynomial& p) {
  return std::all_of(p.terms().begin(), p.terms().end(),
                     [](const auto& t) { return t.second.get_den() == 1; });
}

std::optional<Polynomial> divide_over_integers(const Polynomial& a, const Polynomial& b) {
  auto q = divide_exactly(a, b);
  if (!q || !has_integer_coefficients(*q)) return std::nullopt;
  return q;
}

mpz_class max_norm(const Polynomial& p) {
  mpz_class m = 0;
  for (const auto& [mono, c] : p.terms()) {
    mpz_class a = abs(c.get_num());
    if (a > m) m = a;
  }
  return m;
}

mpz_class integer_content(const Polynomial& p) {
  mpz_class g = 0;
  for (const auto& [m, c] : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    if (g == 1) break;
  }
  return g;
}

// Integer polynomial with coprime coefficients and positive leading term.
Polynomial integer_primitive(const Polynomial& p) {
  if (p.is_zero()) return p;
  mpz_class lcm = 1;
  for (const auto& [m, c] : p.terms()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  Polynomial q = p.scaled(Rational(lcm));
  mpz_class g = integer_content(q);
  if (q.leading_coefficient() < 0) g = -g;
  return q.scaled(ratio(1, g));
}

Polynomial evaluate_at(const Polynomial& p, const Var& v, const mpz_class& xi) {
  std::vector<mpz_class> powers{1};
  Polynomial out;
  for (const auto& [m, c] : p.terms()) {
    auto k = static_cast<std::size_t>(m.degree_in(v));
    while (powers.size() <= k) powers.push_back(powers.back() * xi);
    out += Polynomial::term(m.without(v), c * Rational(powers[k]));
  }
  return out;
}

mpz_class symmetric_mod(const mpz_class& c, const mpz_class& xi) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
  if (r > xi / 2) r -= xi;
  return r;
}

Polynomial interpolate(Polynomial h, const Var& v, const mpz_class& xi) {
  Polynomial out;
  int k = 0;
  while (!h.is_zero()) {
    Polynomial digit;
    for (const auto& [m, c] : h.terms()) {
      mpz_class r = symmetric_mod(integer_of(c), xi);
      if (r != 0) digit += Polynomial::term(m, Rational(r));
    }
    out += digit.times(Monomial::of(v, k));
    h = (h - digit).scaled(ratio(1, xi));
    ++k;
  }
  return out;
}

struct GcdTriple {
  Polynomial g;
  Polynomial cofactor_a;
  Polynomial cofactor_b;
};

std::optional<GcdTriple> heuristic_gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() && b.is_zero()) return GcdTriple{Polynomial(), Polynomial(), Polynomial()};
  if (a.is_zero()) {
    Polynomial g = integer_primitive(b);
    return GcdTriple{g, Polynomial(), *divide_over_integers(b, g)};
  }
  if (b.is_zero()) {
    Polynomial g = integer_primitive(a);
    return GcdTriple{g, *divide_over_integers(a, g), Polynomial()};
  }
  mpz_class common = integer_content(a);
  mpz_class cb = integer_content(b);
  mpz_gcd(common.get_mpz_t(), common.get_mpz_t(), cb.get_mpz_t());
  const Rational inv = ratio(1, common);
  Polynomial f = a.scaled(inv);
  Polynomial g = b.scaled(inv);
  if (f.is_constant() || g.is_constant()) {
    return GcdTriple{Polynomial(Rational(common)), f, g};
  }

  std::vector<Var> vf = f.variables();
  std::vector<Var> vg = g.variables();
  const Var v = std::min(vf.front(), vg.front());

  mpz_class nf = max_norm(f);
  mpz_class ng = max_norm(g);
  mpz_class bound = 2 * std::min(nf, ng) + 29;
  mpz_class root = sqrt(bound);
  mpz_class xi = 99 * root;
  if (bound < xi) xi = bound;
  mpz_class lead = std::min(nf / abs(integer_of(f.leading_coefficient())),
                            ng / abs(integer_of(g.leading_coefficient()))) * 2 + 4;
  xi = std::max(xi, lead);

  const Polynomial scale{Rational(common)};
  for (int attempt = 0; attempt < 6; ++attempt) {
    Polynomial ff = evaluate_at(f, v, xi);
    Polynomial gg = evaluate_at(g, v, xi);
    if (!ff.is_zero() && !gg.is_zero()) {
      auto inner = heuristic_gcd(ff, gg);
      if (!inner) return std::nullopt;
      Polynomial h = integer_primitive(interpolate(inner->g, v, xi));
      if (auto qa = divide_over_integers(f, h)) {
        if (auto qb = divide_over_integers(g, h)) return GcdTriple{h * scale, *qa, *qb};
      }
      Polynomial ca = interpolate(inner->cofactor_a, v, xi);
      if (auto hh = divide_over_integers(f, ca)) {
        if (auto qb = divide_over_integers(g, *hh)) return GcdTriple{*hh * scale, ca, *qb};
      }
      Polynomial cg = interpolate(inner->cofactor_b, v, xi);
      if (auto hh = divide_over_integers(g, cg)) {
        if (auto qa = divide_over_integers(f, *hh)) return GcdTriple{*hh * scale, *qa, cg};
      }
    }
    mpz_class r4 = sqrt(sqrt(xi));
    xi = 73794 * xi * r4 / 27011;
  }
  return std::nullopt;
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial(Rational(1));
  if (a.size() == 1) return monomial_gcd(a.leading_monomial(), b);
  if (b.size() == 1) return monomial_gcd(b.leading_monomial(), a);
  if (a.monic() == b.monic()) return a.monic();
  if (a.size() <= b.size()) {
    if (divide_exactly(b, a)) return a.monic();
  } else if (divide_exactly(a, b)) {
    return b.monic();
  }
  if (auto h = heuristic_gcd(integer_primitive(a), integer_primitive(b))) return h->g.monic();

  std::vector<Var> va = a.variables();
  std::vector<Var> vb = b.variables();
  const Var& v = std::min(va.front(), vb.front());

  const int da = a.degree_in(v);
  const int db = b.degree_in(v);
  if (da == 0) return gcd(a, content_in(b, v));
  if (db == 0) return gcd(content_in(a, v), b);

  Polynomial ca = content_in(a, v);
  Polynomial cb = content_in(b, v);
  Polynomial content = gcd(ca, cb);
  Polynomial p = exact_quotient(a, ca);
  Polynomial q = exact_quotient(b, cb);
  if (p.degree_in(v) < q.degree_in(v)) std::swap(p, q);
  while (!q.is_zero()) {
    Polynomial r = pseudo_remainder(p, q, v);
    p = std::move(q);
    q = r.is_zero() ? Polynomial() : primitive_part(r, v);
  }
  Polynomial g = p.degree_in(v) == 0 ? Polynomial(Rational(1)) : primitive_part(p, v);
  return (content * g).monic();
}

// ---------------------------------------------------------------------------
// NormalForm

NormalForm::NormalForm(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw DomainError("division by zero");
  if (num.is_zero()) {
    den_ = Polynomial(Rational(1));
    return;
  }
  Polynomial g = gcd(num, den);
  if (!g.is_constant()) {
    num = exact_quotient(num, g);
    den = exact_quotient(den, g);
  }
  Rational lc = den.leading_coefficient();
  num_ = num.scaled(1 / lc);
  den_ = den.scaled(1 / lc);
}

NormalForm::NormalForm(const Polynomial& p) : num_(p), den_(Rational(1)) {}

NormalForm NormalForm::operator-() const { return NormalForm(NormalForm::Reduced{}, -num_, den_); }

NormalForm operator+(const NormalForm& a, const NormalForm& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    if (a.is_polynomial()) return NormalForm(a.num_ + b.num_);
    return NormalForm(a.num_ + b.num_, a.den_);
  }
  Polynomial g = gcd(a.den_, b.den_);
  Polynomial ad = exact_quotient(a.den_, g);
  Polynomial bd = exact_quotient(b.den_, g);
  return NormalForm(a.num_ * bd + b.num_ * ad, a.den_ * bd);
}

NormalForm operator-(const NormalForm& a, const NormalForm& b) { return a + (-b); }

NormalForm operator*(const NormalForm& a, const NormalForm& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_polynomial() && b.is_polynomial()) return NormalForm(a.num_ * b.num_);
  Polynomial g1 = gcd(a.num_, b.den_);
  Polynomial g2 = gcd(b.num_, a.den_);
  Polynomial num = exact_quotient(a.num_, g1) * exact_quotient(b.num_, g2);
  Polynomial den = exact_quotient(a.den_, g2) * exact_quotient(b.den_, g1);
  Rational lc = den.leading_coefficient();
  return NormalForm(NormalForm::Reduced{}, num.scaled(1 / lc), den.scaled(1 / lc));
}

NormalForm operator/(const NormalForm& a, const NormalForm& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  Rational lc = b.num_.leading_coefficient();
  NormalForm inverse(NormalForm::Reduced{}, b.den_.scaled(1 / lc), b.num_.scaled(1 / lc));
  return a * inverse;
}

NormalForm NormalForm::pow(int exponent) const {
  if (exponent == 0) return NormalForm(Polynomial(Rational(1)));
  if (exponent < 0) {
    if (is_zero()) throw DomainError("division by zero");
    return NormalForm(Polynomial(Rational(1))) / pow(-exponent);
  }
  auto e = static_cast<unsigned>(exponent);
  return NormalForm(NormalForm::Reduced{}, num_.pow(e), den_.pow(e));
}

int compare(const NormalForm& a, const NormalForm& b) {
  if (int c = compare(a.num_, b.num_)) return c;
  return compare(a.den_, b.den_);
}

std::string NormalForm::to_string() const {
  if (is_polynomial()) return num_.to_string();
  std::string num = num_.to_string();
  if (num_.size() > 1) num = "(" + num + ")";
  std::string den = den_.to_string();
  bool bare = den_.size() == 1 && den_.leading_coefficient() == 1 &&
              den_.leading_monomial().factors().size() == 1;
  if (!bare) den = "(" + den + ")";
  return num + "/" + den;
}

}  // namespace bilag
