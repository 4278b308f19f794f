#pragma once

// Declarative scene files.
//
//   # comment
//   name = parabola
//   chart = x, y
//   symbol h(x, y)
//   bind h = 1                      optional; replaces h and its jets everywhere
//   omega = (h) dy^dx
//   field U = (1, 2*x)
//   foliation P = U                 n field names
//   structure = P, Fy               first and second foliation
//   adapted = x, y - x^2            optional (p^1..p^n, q^1..q^n)
//   fibers = s, t                   optional fiber names for the first lift
//   map psi = (2*x + y, x + y) inverse (x - y, -x + 2*y)
//   window = -2, 2, -2, 2           plot window xmin, xmax, ymin, ymax
//   task gamma = christoffels frame=(U,V)
//
// Forms are sums of terms [sign] [(expr) | NUMBER] [*] dA^dB^..., all of the
// same degree, or 0.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bilag/parse.hpp"
#include "bilag/structure.hpp"

namespace bilag {

struct TaskSpec {
  std::string name;
  std::string op;
  std::map<std::string, std::string> options;
  std::size_t line = 0;
};

/// Operations a task may name.
const std::vector<std::string>& task_ops();

class Scene {
 public:
  std::string name;
  std::string origin;
  Chart chart;
  SymbolTable symbols;
  /// Opaque function name -> bound body over its parameters.
  std::map<std::string, ScalarExpr> bindings;
  KForm omega;
  std::map<std::string, VectorField> fields;
  std::map<std::string, Frame> foliations;
  std::string first;
  std::string second;
  std::optional<Vector> adapted;
  std::optional<std::vector<std::string>> fibers;
  std::map<std::string, SmoothMap> maps;
  std::array<double, 4> window{-2, 2, -2, 2};
  std::vector<TaskSpec> tasks;

  /// Parses an expression over `chart` (default: the scene chart) with the
  /// scene's functions and bindings.
  ScalarExpr expr(std::string_view text, const Chart* chart = nullptr) const;
  KForm form(std::string_view text, const Chart* chart = nullptr) const;
  /// A declared field name or an inline tuple "(a, b, ...)".
  VectorField field(std::string_view ref) const;
  /// A parenthesized, comma separated list of field references, or one
  /// foliation name, or several foliation names separated by commas.
  Frame frame(std::string_view ref) const;
  const SmoothMap& map(const std::string& name) const;

  /// The certified structure; throws ValidationError.
  BiLagStructure structure(const ZeroTest& options = {}) const;
  /// Opaque functions still unbound in omega or in the fields.
  std::vector<std::string> unbound_symbols() const;
};

/// Throws ParseError with the line and column of the offending text.
Scene parse_scene(std::string_view text, std::string origin = "<scene>");
/// `extra` is appended to the file text (for instance "bind h = 1").
Scene load_scene(const std::string& path, const std::string& extra = {});

/// Splits on `sep` outside parentheses and trims each piece.
std::vector<std::string> split_top(std::string_view text, char sep);

}  // namespace bilag
