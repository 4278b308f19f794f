#include "bilag/scene.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "bilag/errors.hpp"

namespace bilag {

namespace {

struct Piece {
  std::string text;
  std::size_t offset = 0;  // 0-based, into the split text
};

bool space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

Piece trimmed(std::string_view text, std::size_t offset) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && space(text[b])) ++b;
  while (e > b && space(text[e - 1])) --e;
  return {std::string(text.substr(b, e - b)), offset + b};
}

// Pieces separated by `sep` at parenthesis depth zero; `sep` = ' ' splits on
// any run of whitespace.
std::vector<Piece> pieces(std::string_view text, char sep) {
  std::vector<Piece> out;
  int depth = 0;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    Piece p = trimmed(text.substr(start, end - start), start);
    if (sep != ' ' || !p.text.empty()) out.push_back(std::move(p));
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (sep == ' ' ? space(c) : c == sep)) {
      flush(i);
      start = i + 1;
    }
  }
  flush(text.size());
  return out;
}

// Rethrows a ParseError raised on a substring at its position in the line.
template <class F>
auto located(std::size_t line, std::size_t column, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    if (e.line() != 0) throw;
    throw ParseError(e.reason(), line, column + e.column() - 1);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), line, column);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), line, column);
  }
}

// The items of "(a, b, ...)".
std::vector<Piece> tuple_items(std::string_view text) {
  Piece t = trimmed(text, 0);
  if (t.text.size() < 2 || t.text.front() != '(' || t.text.back() != ')') {
    throw ParseError("expected a parenthesized list", 0, t.offset + 1);
  }
  auto items = pieces(std::string_view(t.text).substr(1, t.text.size() - 2), ',');
  for (auto& p : items) {
    p.offset += t.offset + 1;
    if (p.text.empty()) throw ParseError("empty list item", 0, p.offset + 1);
  }
  return items;
}

Vector parse_tuple(const Scene& scene, std::string_view text, const Chart* chart) {
  Vector out;
  for (const auto& p : tuple_items(text)) {
    out.push_back(located(0, p.offset + 1, [&] { return scene.expr(p.text, chart); }));
  }
  return out;
}

struct Record {
  std::string keyword;
  std::string name;
  std::size_t name_column = 0;
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;  // 1-based column of value
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"name",      "chart",     "symbol",  "bind",   "omega", "field", "foliation",
                                       "structure", "adapted",   "fibers",  "map",    "window", "task"};
  return k;
}

bool named(const std::string& keyword) {
  return keyword == "bind" || keyword == "field" || keyword == "foliation" || keyword == "map" || keyword == "task";
}

Record read_record(const std::string& raw, std::size_t line) {
  Record r;
  r.line = line;
  std::size_t i = 0;
  while (i < raw.size() && space(raw[i])) ++i;
  std::size_t k = i;
  while (i < raw.size() && (std::isalnum(static_cast<unsigned char>(raw[i])) != 0)) ++i;
  r.keyword = raw.substr(k, i - k);
  if (!keywords().count(r.keyword)) throw ParseError("unknown keyword '" + r.keyword + "'", line, k + 1);
  if (r.keyword == "symbol") {
    Piece rest = trimmed(std::string_view(raw).substr(i), i);
    r.value = rest.text;
    r.column = rest.offset + 1;
    return r;
  }
  std::size_t eq = raw.find('=', i);
  if (eq == std::string::npos) throw ParseError("expected '='", line, raw.size() + 1);
  Piece name = trimmed(std::string_view(raw).substr(i, eq - i), i);
  if (named(r.keyword)) {
    if (!is_identifier(name.text)) throw ParseError("expected a name", line, name.offset + 1);
    r.name = name.text;
    r.name_column = name.offset + 1;
  } else if (!name.text.empty()) {
    throw ParseError("unexpected '" + name.text + "'", line, name.offset + 1);
  }
  Piece value = trimmed(std::string_view(raw).substr(eq + 1), eq + 1);
  if (value.text.empty()) throw ParseError("missing value", line, eq + 2);
  r.value = value.text;
  r.column = value.offset + 1;
  return r;
}

class FormParser {
 public:
  FormParser(const Scene& scene, std::string_view text, const Chart& chart)
      : scene_(scene), text_(text), chart_(chart) {}

  KForm parse() {
    skip();
    if (text_.substr(pos_) == "0") return KForm(chart_, 2);
    std::optional<KForm> out;
    bool first = true;
    while (pos_ < text_.size()) {
      int sign = 1;
      if (text_[pos_] == '+' || text_[pos_] == '-') {
        sign = text_[pos_] == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      std::size_t term_start = pos_;
      ScalarExpr c = coefficient();
      std::vector<int> index = differentials();
      KForm term(chart_, static_cast<int>(index.size()));
      term.add(index, sign < 0 ? -c : c);
      if (out && out->degree() != term.degree()) {
        throw ParseError("terms of different degree", 0, term_start + 1);
      }
      out = out ? *out + term : term;
      skip();
    }
    if (!out) fail("empty form");
    return *out;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, 0, pos_ + 1); }

  void skip() {
    while (pos_ < text_.size() && space(text_[pos_])) ++pos_;
  }

  ScalarExpr coefficient() {
    ScalarExpr c(1);
    if (pos_ < text_.size() && text_[pos_] == '(') {
      int depth = 0;
      std::size_t start = pos_;
      for (; pos_ < text_.size(); ++pos_) {
        if (text_[pos_] == '(') ++depth;
        if (text_[pos_] == ')' && --depth == 0) break;
      }
      if (pos_ >= text_.size()) fail("unbalanced parenthesis");
      ++pos_;
      c = located(0, start + 1, [&] { return scene_.expr(text_.substr(start, pos_ - start), &chart_); });
    } else if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '.' || text_[pos_] == '/')) {
        ++pos_;
      }
      c = located(0, start + 1, [&] { return scene_.expr(text_.substr(start, pos_ - start), &chart_); });
    } else {
      return c;
    }
    skip();
    if (pos_ < text_.size() && text_[pos_] == '*') {
      ++pos_;
      skip();
    }
    return c;
  }

  std::vector<int> differentials() {
    std::vector<int> index;
    for (;;) {
      skip();
      if (pos_ >= text_.size() || text_[pos_] != 'd') fail("expected a differential dX");
      std::size_t start = ++pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0)) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto i = chart_.index_of(name);
      if (!i) throw ParseError("'" + name + "' is not a coordinate", 0, start + 1);
      index.push_back(static_cast<int>(*i));
      skip();
      if (pos_ >= text_.size() || text_[pos_] != '^') return index;
      ++pos_;
    }
  }

  const Scene& scene_;
  std::string_view text_;
  const Chart& chart_;
  std::size_t pos_ = 0;
};

void parse_symbol(Scene& scene, const Record& r) {
  auto open = r.value.find('(');
  std::string name = trimmed(std::string_view(r.value).substr(0, open), 0).text;
  if (!is_identifier(name)) throw ParseError("expected a symbol name", r.line, r.column);
  if (scene.chart.index_of(name) || scene.symbols.is_function(name)) {
    throw ParseError("'" + name + "' is already declared", r.line, r.column);
  }
  std::vector<std::string> params;
  if (open == std::string::npos) {
    params = scene.chart.names();
  } else {
    auto items = located(r.line, r.column + open, [&] { return tuple_items(r.value.substr(open)); });
    for (const auto& p : items) {
      if (!is_identifier(p.text)) throw ParseError("expected a parameter name", r.line, r.column + open + p.offset);
      params.push_back(p.text);
    }
  }
  scene.symbols.functions[name] = params;
}

void parse_task(Scene& scene, const Record& r) {
  auto words = pieces(r.value, ' ');
  TaskSpec task;
  task.name = r.name;
  task.line = r.line;
  task.op = words.front().text;
  const auto& ops = task_ops();
  if (std::find(ops.begin(), ops.end(), task.op) == ops.end()) {
    throw ParseError("unknown operation '" + task.op + "'", r.line, r.column);
  }
  for (std::size_t i = 1; i < words.size(); ++i) {
    const auto& w = words[i];
    auto eq = w.text.find('=');
    std::size_t column = r.column + w.offset;
    if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value", r.line, column);
    std::string key = w.text.substr(0, eq);
    if (task.options.count(key)) throw ParseError("repeated option '" + key + "'", r.line, column);
    task.options[key] = w.text.substr(eq + 1);
    if (key == "map" && !scene.maps.count(task.options[key])) {
      throw ParseError("unknown map '" + task.options[key] + "'", r.line, column + eq + 1);
    }
  }
  for (const auto& t : scene.tasks) {
    if (t.name == task.name) throw ParseError("repeated task '" + task.name + "'", r.line, r.name_column);
  }
  scene.tasks.push_back(std::move(task));
}

}  // namespace

std::vector<std::string> split_top(std::string_view text, char sep) {
  std::vector<std::string> out;
  for (auto& p : pieces(text, sep)) out.push_back(std::move(p.text));
  return out;
}

const std::vector<std::string>& task_ops() {
  static const std::vector<std::string> ops{"validate", "hess", "christoffels", "curvature", "flat",
                                            "para",     "push", "lift",         "act-check", "plot"};
  return ops;
}

ScalarExpr Scene::expr(std::string_view text, const Chart* on) const {
  SymbolTable t = symbols;
  t.coordinates = (on ? *on : chart).names();
  ScalarExpr e = parse_expr(text, t);
  for (const auto& [name, body] : bindings) e = bind_function(e, name, body);
  return e;
}

KForm Scene::form(std::string_view text, const Chart* on) const {
  return FormParser(*this, text, on ? *on : chart).parse();
}

VectorField Scene::field(std::string_view ref) const {
  std::string r = trimmed(ref, 0).text;
  if (!r.empty() && r.front() == '(') return VectorField(chart, parse_tuple(*this, r, nullptr));
  auto it = fields.find(r);
  if (it == fields.end()) throw DomainError("unknown field '" + r + "'");
  return it->second;
}

Frame Scene::frame(std::string_view ref) const {
  std::string r = trimmed(ref, 0).text;
  Frame out;
  if (r == "coordinate") {
    for (std::size_t i = 0; i < chart.dim(); ++i) out.push_back(VectorField::coordinate(chart, i));
    return out;
  }
  if (!r.empty() && r.front() == '(' && r.back() == ')') {
    for (const auto& p : tuple_items(r)) out.push_back(field(p.text));
    return out;
  }
  for (const auto& name : split_top(r, ',')) {
    if (auto it = foliations.find(name); it != foliations.end()) {
      out.insert(out.end(), it->second.begin(), it->second.end());
    } else {
      out.push_back(field(name));
    }
  }
  return out;
}

const SmoothMap& Scene::map(const std::string& name) const {
  auto it = maps.find(name);
  if (it == maps.end()) throw DomainError("unknown map '" + name + "'");
  return it->second;
}

BiLagStructure Scene::structure(const ZeroTest& options) const {
  SymplecticForm w = validate_symplectic(omega, options);
  return validate_bilagrangian(w, foliations.at(first), foliations.at(second), adapted, options);
}

std::vector<std::string> Scene::unbound_symbols() const {
  std::set<std::string> names;
  auto scan = [&](const ScalarExpr& e) {
    for (const auto& v : free_variables(e)) {
      if (!v.is_coordinate()) names.insert(v.atom().name);
    }
  };
  for (const auto& [index, c] : omega.terms()) scan(c);
  for (const auto& [name, f] : fields) {
    for (const auto& c : f.components()) scan(c);
  }
  return {names.begin(), names.end()};
}

Scene parse_scene(std::string_view text, std::string origin) {
  Scene scene;
  scene.origin = origin;
  std::vector<Record> records;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (trimmed(raw, 0).text.empty()) continue;
    records.push_back(read_record(raw, number));
  }

  std::set<std::string> seen;
  for (const auto& r : records) {
    if (!named(r.keyword) && r.keyword != "symbol" && !seen.insert(r.keyword).second) {
      throw ParseError("repeated '" + r.keyword + "'", r.line, 1);
    }
  }
  auto find = [&](const char* keyword) -> const Record* {
    for (const auto& r : records) {
      if (r.keyword == keyword) return &r;
    }
    return nullptr;
  };
  for (const char* required : {"chart", "omega", "structure"}) {
    if (!find(required)) throw ParseError(std::string("scene declares no ") + required, number + 1, 1);
  }

  const Record& chart = *find("chart");
  std::vector<std::string> names;
  for (const auto& p : pieces(chart.value, ',')) {
    if (!is_identifier(p.text)) throw ParseError("expected a coordinate name", chart.line, chart.column + p.offset);
    names.push_back(p.text);
  }
  scene.chart = located(chart.line, chart.column, [&] { return Chart(names); });

  for (const auto& r : records) {
    if (r.keyword == "symbol") parse_symbol(scene, r);
  }
  for (const auto& r : records) {
    if (r.keyword != "bind") continue;
    if (!scene.symbols.is_function(r.name)) throw ParseError("'" + r.name + "' is not a symbol", r.line, r.name_column);
    Chart params(scene.symbols.functions.at(r.name));
    Scene bare = scene;
    bare.bindings.clear();
    scene.bindings[r.name] = located(r.line, r.column, [&] { return bare.expr(r.value, &params); });
  }

  const std::size_t dim = scene.chart.dim();
  auto handle = [&](const Record& r) {
    const std::string& k = r.keyword;
    if (k == "name") {
      scene.name = r.value;
    } else if (k == "omega") {
      scene.omega = located(r.line, r.column, [&] { return scene.form(r.value); });
    } else if (k == "field") {
      if (scene.fields.count(r.name)) throw ParseError("repeated field '" + r.name + "'", r.line, r.name_column);
      Vector c = located(r.line, r.column, [&] { return parse_tuple(scene, r.value, nullptr); });
      if (c.size() != dim) {
        throw ParseError("field needs " + std::to_string(dim) + " components, got " + std::to_string(c.size()),
                         r.line, r.column);
      }
      scene.fields.emplace(r.name, VectorField(scene.chart, std::move(c)));
    } else if (k == "foliation") {
      Frame f;
      for (const auto& p : pieces(r.value, ',')) {
        auto it = scene.fields.find(p.text);
        if (it == scene.fields.end()) {
          throw ParseError("unknown field '" + p.text + "'", r.line, r.column + p.offset);
        }
        f.push_back(it->second);
      }
      if (f.size() * 2 != dim) {
        throw ParseError("foliation needs " + std::to_string(dim / 2) + " fields, got " + std::to_string(f.size()),
                         r.line, r.column);
      }
      scene.foliations[r.name] = std::move(f);
    } else if (k == "structure") {
      auto p = pieces(r.value, ',');
      if (p.size() != 2) throw ParseError("structure names two foliations", r.line, r.column);
      for (const auto& q : p) {
        if (!scene.foliations.count(q.text)) {
          throw ParseError("unknown foliation '" + q.text + "'", r.line, r.column + q.offset);
        }
      }
      scene.first = p[0].text;
      scene.second = p[1].text;
    } else if (k == "adapted") {
      Vector a;
      for (const auto& p : pieces(r.value, ',')) {
        a.push_back(located(r.line, r.column + p.offset, [&] { return scene.expr(p.text); }));
      }
      if (a.size() != dim) {
        throw ParseError("adapted needs " + std::to_string(dim) + " functions, got " + std::to_string(a.size()),
                         r.line, r.column);
      }
      scene.adapted = std::move(a);
    } else if (k == "fibers") {
      std::vector<std::string> f;
      for (const auto& p : pieces(r.value, ',')) {
        if (!is_identifier(p.text) || scene.chart.index_of(p.text)) {
          throw ParseError("bad fiber name '" + p.text + "'", r.line, r.column + p.offset);
        }
        f.push_back(p.text);
      }
      if (f.size() != dim) {
        throw ParseError("fibers needs " + std::to_string(dim) + " names, got " + std::to_string(f.size()), r.line,
                         r.column);
      }
      scene.fibers = std::move(f);
    } else if (k == "map") {
      auto at = r.value.find(" inverse ");
      if (at == std::string::npos) throw ParseError("map needs 'inverse (...)'", r.line, r.column + r.value.size());
      Vector fwd = located(r.line, r.column, [&] { return parse_tuple(scene, r.value.substr(0, at), nullptr); });
      Vector inv =
          located(r.line, r.column + at + 9, [&] { return parse_tuple(scene, r.value.substr(at + 9), nullptr); });
      if (fwd.size() != dim || inv.size() != dim) {
        throw ParseError("map needs " + std::to_string(dim) + " components each way", r.line, r.column);
      }
      scene.maps[r.name] = SmoothMap(scene.chart, scene.chart, std::move(fwd), std::move(inv));
    } else if (k == "window") {
      auto p = pieces(r.value, ',');
      if (p.size() != 4) throw ParseError("window needs xmin, xmax, ymin, ymax", r.line, r.column);
      for (std::size_t i = 0; i < 4; ++i) {
        try {
          std::size_t used = 0;
          scene.window[i] = std::stod(p[i].text, &used);
          if (used != p[i].text.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw ParseError("expected a number", r.line, r.column + p[i].offset);
        }
      }
      if (!(scene.window[0] < scene.window[1] && scene.window[2] < scene.window[3])) {
        throw ParseError("empty window", r.line, r.column);
      }
    } else if (k == "task") {
      parse_task(scene, r);
    }
  };
  // Declarations may appear in any order; references resolve by category.
  for (const char* keyword : {"name", "omega", "field", "foliation", "structure", "adapted", "fibers", "map",
                              "window", "task"}) {
    for (const auto& r : records) {
      if (r.keyword == keyword) handle(r);
    }
  }
  if (scene.name.empty()) scene.name = std::filesystem::path(origin).stem().string();
  return scene;
}

Scene load_scene(const std::string& path, const std::string& extra) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read scene '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scene(buffer.str() + "\n" + extra, path);
}

}  // namespace bilag
