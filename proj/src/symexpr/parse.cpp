#include "bilag/parse.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "bilag/errors.hpp"

namespace bilag {

bool SymbolTable::is_coordinate(std::string_view name) const {
  return std::find(coordinates.begin(), coordinates.end(), name) != coordinates.end();
}

bool SymbolTable::is_function(std::string_view name) const {
  return functions.find(std::string(name)) != functions.end();
}

ScalarExpr SymbolTable::function(const std::string& name, std::vector<int> derivs) const {
  auto it = functions.find(name);
  if (it == functions.end()) throw DomainError("undeclared function '" + name + "'");
  std::vector<ScalarExpr> args;
  for (const auto& p : it->second) args.push_back(ScalarExpr::coordinate(p));
  return ScalarExpr::function(name, it->second, std::move(derivs), std::move(args));
}

bool is_identifier(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const SymbolTable& symbols) : text_(text), symbols_(symbols) {}

  ScalarExpr parse() {
    ScalarExpr e = expr();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { fail_at(message, pos_); }
  [[noreturn]] void fail_at(const std::string& message, std::size_t pos) const {
    throw ParseError(message, 0, pos + 1);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(pos_ < text_.size() ? "expected '" + std::string(1, c) + "'"
                               : "expected '" + std::string(1, c) + "' before end of input");
    }
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  ScalarExpr expr() {
    ScalarExpr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  ScalarExpr term() {
    ScalarExpr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (peek() == '/') {
        std::size_t at = pos_;
        ++pos_;
        ScalarExpr d = unary();
        if (d.is_zero()) fail_at("zero denominator", at);
        e = e / d;
      } else {
        return e;
      }
    }
  }

  ScalarExpr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  ScalarExpr power() {
    ScalarExpr base = primary();
    if (peek() != '^') return base;
    std::size_t at = pos_;
    ++pos_;
    int exponent = 0;
    if (accept('(')) {
      exponent = integer_exponent();
      expect(')');
    } else {
      exponent = integer_exponent();
    }
    if (exponent < 0 && base.is_zero()) fail_at("zero denominator", at);
    return pow(base, exponent);
  }

  int integer_exponent() {
    bool negative = accept('-');
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    if (pos_ - start > 4) fail_at("exponent too large", start);
    int value = std::stoi(std::string(text_.substr(start, pos_ - start)));
    return negative ? -value : value;
  }

  ScalarExpr primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      ScalarExpr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return reference();
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  ScalarExpr number() {
    std::size_t start = pos_;
    std::string digits;
    std::size_t fraction = 0;
    bool seen_point = false;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits += c;
        if (seen_point) ++fraction;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (digits.empty()) fail_at("malformed number", start);
    mpz_class numerator(digits, 10);
    mpz_class denominator = 1;
    for (std::size_t i = 0; i < fraction; ++i) denominator *= 10;
    Rational value(numerator, denominator);
    value.canonicalize();
    return ScalarExpr(value);
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  ScalarExpr reference() {
    std::size_t start = pos_;
    std::string name = identifier();
    std::optional<std::vector<std::string>> jet;
    if (pos_ < text_.size() && text_[pos_] == '_') {
      ++pos_;
      jet.emplace();
      if (pos_ < text_.size() && text_[pos_] == '{') {
        ++pos_;
        do {
          skip_space();
          std::string p = identifier();
          if (p.empty()) fail("expected a parameter name in derivative list");
          jet->push_back(p);
        } while (accept(','));
        expect('}');
      } else {
        std::string letters = identifier();
        if (letters.empty()) fail("expected derivative letters after '_'");
        for (char l : letters) jet->emplace_back(1, l);
      }
    }

    if (symbols_.is_coordinate(name)) {
      if (jet) fail_at("coordinate '" + name + "' cannot carry derivatives", start);
      if (peek() == '(') fail_at("coordinate '" + name + "' used as a function", start);
      return ScalarExpr::coordinate(name);
    }
    auto fn = symbols_.functions.find(name);
    if (fn == symbols_.functions.end()) fail_at("unknown identifier '" + name + "'", start);
    const auto& params = fn->second;

    std::vector<int> derivs;
    if (jet) {
      for (const auto& p : *jet) {
        auto it = std::find(params.begin(), params.end(), p);
        if (it == params.end()) {
          fail_at("'" + p + "' is not a parameter of '" + name + "'", start);
        }
        derivs.push_back(static_cast<int>(it - params.begin()));
      }
    }

    std::vector<ScalarExpr> args;
    if (accept('(')) {
      std::size_t open = pos_;
      do {
        args.push_back(expr());
      } while (accept(','));
      expect(')');
      if (args.size() != params.size()) {
        fail_at("'" + name + "' takes " + std::to_string(params.size()) + " arguments", open);
      }
    } else {
      for (const auto& p : params) args.push_back(ScalarExpr::coordinate(p));
    }
    return ScalarExpr::function(name, params, std::move(derivs), std::move(args));
  }

  std::string_view text_;
  const SymbolTable& symbols_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarExpr parse_expr(std::string_view text, const SymbolTable& symbols) {
  return Parser(text, symbols).parse();
}

}  // namespace bilag
