#pragma once

// Seeded random generators for property tests.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bilag/calculus.hpp"
#include "bilag/parse.hpp"
#include "bilag/symexpr.hpp"

namespace test {

inline constexpr std::uint64_t kSeed = 20240611;

class ExprGenerator {
 public:
  ExprGenerator(std::mt19937_64& rng, std::vector<std::string> coordinates, bool with_h = false)
      : rng_(rng), coordinates_(std::move(coordinates)), with_h_(with_h) {}

  bilag::Rational small_rational(int bound = 5) {
    std::uniform_int_distribution<int> num(-bound, bound);
    std::uniform_int_distribution<int> den(1, 4);
    bilag::Rational r(num(rng_), den(rng_));
    r.canonicalize();
    return r;
  }

  bilag::Rational nonzero_rational(int bound = 5) {
    for (;;) {
      auto r = small_rational(bound);
      if (r != 0) return r;
    }
  }

  bilag::ScalarExpr atom() {
    std::uniform_int_distribution<std::size_t> pick(0, coordinates_.size() + (with_h_ ? 1 : 0) - 1);
    std::size_t k = pick(rng_);
    if (k < coordinates_.size()) return bilag::ScalarExpr::coordinate(coordinates_[k]);
    return h();
  }

  bilag::ScalarExpr h() const {
    std::vector<bilag::ScalarExpr> args;
    for (std::size_t i = 0; i < 2 && i < coordinates_.size(); ++i) {
      args.push_back(bilag::ScalarExpr::coordinate(coordinates_[i]));
    }
    std::vector<std::string> params(coordinates_.begin(),
                                    coordinates_.begin() + static_cast<long>(args.size()));
    return bilag::ScalarExpr::function("h", params, {}, args);
  }

  /// Sum of up to `terms` monomials of total degree at most `degree`.
  bilag::ScalarExpr polynomial(int degree, int terms = 3) {
    std::uniform_int_distribution<int> count(1, terms);
    std::uniform_int_distribution<int> deg(0, degree);
    bilag::ScalarExpr out(0);
    int n = count(rng_);
    for (int i = 0; i < n; ++i) {
      bilag::ScalarExpr term(small_rational());
      int d = deg(rng_);
      for (int j = 0; j < d; ++j) term = term * atom();
      out = out + term;
    }
    return out;
  }

  /// Quotient whose denominator is positive at every rational point.
  bilag::ScalarExpr rational_function(int degree) {
    std::bernoulli_distribution polynomial_only(0.3);
    auto num = polynomial(degree);
    if (polynomial_only(rng_)) return num;
    auto d = polynomial(degree - 1 > 0 ? degree - 1 : 1, 2);
    auto shared = polynomial(1, 2);
    return (num * (shared * shared + 1)) / ((d * d + 1) * (shared * shared + 1));
  }

  bilag::Assignment point() {
    bilag::Assignment at;
    for (const auto& c : coordinates_) at[c] = small_rational(9);
    if (with_h_) {
      for (const char* jet : {"h", "h_x", "h_y", "h_xx", "h_xy", "h_yy", "h_xxx", "h_xxy", "h_xyy",
                              "h_yyy"}) {
        at[jet] = nonzero_rational(9);
      }
    }
    return at;
  }

  bilag::VectorField field(const bilag::Chart& chart, int degree) {
    bilag::Vector c;
    for (std::size_t i = 0; i < chart.dim(); ++i) c.push_back(polynomial(degree));
    return bilag::VectorField(chart, std::move(c));
  }

  bilag::KForm form(const bilag::Chart& chart, int k, bool rational) {
    bilag::KForm a(chart, k);
    std::vector<int> index(static_cast<std::size_t>(k));
    // Every increasing tuple gets a random coefficient.
    std::function<void(std::size_t, int)> fill = [&](std::size_t pos, int start) {
      if (pos == index.size()) {
        a.add(index, rational ? rational_function(2) : polynomial(2));
        return;
      }
      for (int i = start; i < static_cast<int>(chart.dim()); ++i) {
        index[pos] = i;
        fill(pos + 1, i + 1);
      }
    };
    fill(0, 0);
    return a;
  }

  /// Affine map x -> A x + b with random rational A of determinant one
  /// (2-dimensional) and its inverse.
  bilag::SmoothMap affine_symplectic(const bilag::Chart& chart) {
    bilag::Rational a, b, c, d;
    for (;;) {
      a = small_rational();
      b = small_rational();
      c = small_rational();
      if (a != 0) break;
    }
    d = (1 + b * c) / a;
    bilag::Rational e = small_rational(), f = small_rational();
    auto x = chart.coordinate(0);
    auto y = chart.coordinate(1);
    using bilag::ScalarExpr;
    bilag::Vector forward{ScalarExpr(a) * x + ScalarExpr(b) * y + ScalarExpr(e),
                          ScalarExpr(c) * x + ScalarExpr(d) * y + ScalarExpr(f)};
    bilag::Vector inverse{ScalarExpr(d) * (x - ScalarExpr(e)) - ScalarExpr(b) * (y - ScalarExpr(f)),
                          ScalarExpr(-c) * (x - ScalarExpr(e)) + ScalarExpr(a) * (y - ScalarExpr(f))};
    return bilag::SmoothMap(chart, chart, forward, inverse);
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64& rng_;
  std::vector<std::string> coordinates_;
  bool with_h_;
};

}  // namespace test
