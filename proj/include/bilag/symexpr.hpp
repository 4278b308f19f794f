#pragma once

// Exact symbolic scalars over a coordinate chart.
//
// A ScalarExpr is an immutable expression DAG whose every node carries its
// canonical rational normal form: a reduced quotient of two polynomials with
// rational coefficients over coordinates and jets of opaque functions. The
// normal form is the decision procedure for equality; the DAG is kept so that
// randomized evaluation can cross-check it along an independent path.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace bilag {

using Rational = mpq_class;

class ScalarExpr;
struct Atom;

/// Indeterminate of the polynomial ring: either a coordinate or a jet
/// `h_{i1..ik}(args)` of an opaque function.
class Var {
 public:
  explicit Var(std::shared_ptr<const Atom> atom);

  const Atom& atom() const noexcept { return *atom_; }
  bool is_coordinate() const noexcept;

  /// Printed form; re-parses to the same variable.
  std::string name() const;

  friend int compare(const Var& a, const Var& b);
  friend bool operator==(const Var& a, const Var& b) { return compare(a, b) == 0; }
  friend bool operator<(const Var& a, const Var& b) { return compare(a, b) < 0; }

 private:
  std::shared_ptr<const Atom> atom_;
};

/// Power product of variables, kept sorted by variable order.
class Monomial {
 public:
  using Factor = std::pair<Var, int>;

  Monomial() = default;
  static Monomial of(const Var& v, int exponent = 1);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  bool is_one() const noexcept { return factors_.empty(); }
  int degree_in(const Var& v) const;

  Monomial operator*(const Monomial& other) const;
  bool divides(const Monomial& other) const;
  /// Precondition: divisor.divides(*this).
  Monomial operator/(const Monomial& divisor) const;
  Monomial without(const Var& v) const;
  /// Componentwise minimum of exponents.
  static Monomial common(const Monomial& a, const Monomial& b);

  /// Pure lexicographic order, the smallest variable being most significant.
  friend int compare(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) { return compare(a, b) == 0; }

 private:
  std::vector<Factor> factors_;
};

struct MonomialDescending {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }
};

/// Sparse multivariate polynomial with rational coefficients. Terms are kept in
/// descending lex order, so the first term is the leading one.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, MonomialDescending>;

  Polynomial() = default;
  Polynomial(const Rational& constant);  // NOLINT(google-explicit-constructor)
  static Polynomial variable(const Var& v);
  static Polynomial term(const Monomial& m, const Rational& c);

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  Rational constant_value() const;
  std::size_t size() const noexcept { return terms_.size(); }

  const Monomial& leading_monomial() const;
  const Rational& leading_coefficient() const;

  /// Sorted distinct variables.
  std::vector<Var> variables() const;
  int degree_in(const Var& v) const;
  /// Coefficient of v^k, viewed as a polynomial in the remaining variables.
  std::vector<Polynomial> coefficients_in(const Var& v) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  Polynomial scaled(const Rational& c) const;
  Polynomial times(const Monomial& m) const;
  Polynomial pow(unsigned exponent) const;
  Polynomial partial(const Var& v) const;
  /// Scaled so that the leading coefficient is 1 (zero stays zero).
  Polynomial monic() const;

  friend int compare(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return compare(a, b) == 0; }

  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const Rational& c);

  Terms terms_;
};

/// a / b; throws DomainError unless b divides a exactly.
Polynomial exact_quotient(const Polynomial& a, const Polynomial& b);

/// Monic greatest common divisor over Q (content / primitive-part recursion on
/// the most significant variable, primitive remainder sequences).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// Canonical rational function: gcd(num, den) = 1, den has leading coefficient
/// 1, and zero is represented as 0/1.
class NormalForm {
 public:
  NormalForm() : den_(Rational(1)) {}
  NormalForm(Polynomial num, Polynomial den);
  NormalForm(const Polynomial& p);  // NOLINT(google-explicit-constructor)

  const Polynomial& numerator() const noexcept { return num_; }
  const Polynomial& denominator() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.is_constant(); }
  bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }

  NormalForm operator-() const;
  friend NormalForm operator+(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator-(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator*(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator/(const NormalForm& a, const NormalForm& b);
  NormalForm pow(int exponent) const;

  friend int compare(const NormalForm& a, const NormalForm& b);
  friend bool operator==(const NormalForm& a, const NormalForm& b) { return compare(a, b) == 0; }

  std::string to_string() const;

 private:
  struct Reduced {};
  NormalForm(Reduced, Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {}

  Polynomial num_;
  Polynomial den_;
};

class ScalarExpr {
 public:
  enum class Kind : std::uint8_t {
    constant,
    atom,
    sum,
    difference,
    product,
    quotient,
    negation,
    power,
    canonical,
  };

  ScalarExpr();
  ScalarExpr(const Rational& value);  // NOLINT(google-explicit-constructor)
  ScalarExpr(int value);              // NOLINT(google-explicit-constructor)
  ScalarExpr(long value);             // NOLINT(google-explicit-constructor)

  static ScalarExpr coordinate(std::string name);
  /// Jet `name_{derivs}(args)` of an opaque function with the given formal
  /// parameters. `derivs` are parameter slots; order does not matter.
  static ScalarExpr function(std::string name, std::vector<std::string> params,
                             std::vector<int> derivs, std::vector<ScalarExpr> args);
  static ScalarExpr variable(const Var& v);
  /// Leaf wrapping an already-normalized value.
  static ScalarExpr from_normal_form(NormalForm nf);

  Kind kind() const noexcept;
  const NormalForm& normal_form() const noexcept;
  /// Operands of a compound node (empty for leaves).
  std::vector<ScalarExpr> operands() const;
  std::optional<Var> as_variable() const;
  int exponent() const noexcept;

  bool is_zero() const noexcept { return normal_form().is_zero(); }
  bool is_constant() const noexcept { return normal_form().is_constant(); }
  std::optional<Rational> constant_value() const;

  /// Drops the construction history, keeping only the normal form.
  ScalarExpr canonical() const;

  /// Canonical printed form; re-parses to an equal expression.
  std::string to_string() const;

  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  /// Throws DomainError when b normalizes to zero.
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  ScalarExpr operator-() const;
  ScalarExpr& operator+=(const ScalarExpr& b) { return *this = *this + b; }
  ScalarExpr& operator-=(const ScalarExpr& b) { return *this = *this - b; }
  ScalarExpr& operator*=(const ScalarExpr& b) { return *this = *this * b; }

  /// Structural identity of normal forms.
  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b);
  friend int compare(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr pow(const ScalarExpr& base, int exponent);

  struct Node;

 private:
  explicit ScalarExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend const Node& node_of(const ScalarExpr& e);

  std::shared_ptr<const Node> node_;
};

struct Atom {
  enum class Kind : std::uint8_t { coordinate, function };

  Kind kind = Kind::coordinate;
  std::string name;
  std::vector<std::string> params;  // function only
  std::vector<int> derivs;          // function only; sorted parameter slots
  std::vector<ScalarExpr> args;     // function only; one per parameter
};

/// Integer power; negative exponents divide (DomainError on a zero base).
ScalarExpr pow(const ScalarExpr& base, int exponent);

/// Partial derivative by a coordinate. Jets of opaque functions follow the
/// chain rule through their arguments.
ScalarExpr diff(const ScalarExpr& e, std::string_view coordinate);

/// Simultaneous substitution of coordinates; opaque-function arguments are
/// substituted too, so `h` becomes `h(e1, e2)`.
ScalarExpr substitute(const ScalarExpr& e, const std::map<std::string, ScalarExpr>& values);

/// Replaces every jet of the opaque function `name` by the matching
/// derivative of `body`, an expression over the function's parameters.
ScalarExpr bind_function(const ScalarExpr& e, std::string_view name, const ScalarExpr& body);

/// Options for the randomized cross-check performed by equal_zero.
struct ZeroTest {
  int samples = 20;
  std::uint64_t seed = 0x5eed'b11a'5eedULL;
};

/// True iff the normal form is 0/1. Also evaluates the expression DAG at
/// `samples` random rational points and throws ConsistencyError when the two
/// disagree.
bool equal_zero(const ScalarExpr& e, const ZeroTest& options = {});
bool equal(const ScalarExpr& a, const ScalarExpr& b, const ZeroTest& options = {});

/// Values keyed by printed variable name ("x", "h", "h_x", ...).
using Assignment = std::map<std::string, Rational>;

/// Evaluates the expression DAG with exact arithmetic. Throws DomainError on a
/// missing variable or on division by zero at the point.
Rational eval_num(const ScalarExpr& e, const Assignment& assignment);

/// Every variable occurring in the DAG, sorted.
std::vector<Var> free_variables(const ScalarExpr& e);

}  // namespace bilag
