#pragma once

// Infix expression language.
//
//   expr      := term (('+' | '-') term)*
//   term      := unary (('*' | '/') unary)*
//   unary     := ('-' | '+') unary | power
//   power     := primary ('^' exponent)?
//   exponent  := ['-'] INT | '(' ['-'] INT ')'
//   primary   := NUMBER | reference | '(' expr ')'
//   reference := IDENT [jet] ['(' expr (',' expr)* ')']
//   jet       := '_' letters | '_{' IDENT (',' IDENT)* '}'
//
// IDENT is [A-Za-z][A-Za-z0-9]*; NUMBER is a decimal literal and is read
// exactly. An opaque function written without arguments is applied to its
// declared parameters.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bilag/symexpr.hpp"

namespace bilag {

struct SymbolTable {
  std::vector<std::string> coordinates;
  /// Opaque function name -> formal parameter names.
  std::map<std::string, std::vector<std::string>> functions;

  bool is_coordinate(std::string_view name) const;
  bool is_function(std::string_view name) const;
  /// Jet of a declared function at its natural arguments.
  ScalarExpr function(const std::string& name, std::vector<int> derivs = {}) const;
};

/// Throws ParseError (line 0, 1-based column) on malformed input, unknown
/// identifiers and zero denominators.
ScalarExpr parse_expr(std::string_view text, const SymbolTable& symbols);

bool is_identifier(std::string_view name);

}  // namespace bilag
