#include "bilag/report.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bilag/errors.hpp"
#include "bilag/lift.hpp"
#include "bilag/plot.hpp"

namespace bilag {

namespace {

using json = nlohmann::ordered_json;

json vec_json(const VectorField& v) {
  json out = json::array();
  for (const auto& c : v.components()) out.push_back(c.to_string());
  return out;
}

json frame_json(const Frame& frame) {
  json out = json::array();
  for (const auto& e : frame) out.push_back(vec_json(e));
  return out;
}

json form_json(const KForm& a) {
  json out = json::object();
  for (const auto& [index, c] : a.terms()) {
    std::string key;
    for (int i : index) key += (key.empty() ? "d" : "^d") + a.chart().name(static_cast<std::size_t>(i));
    out[key] = c.to_string();
  }
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& e : row) r.push_back(e.to_string());
    out.push_back(std::move(r));
  }
  return out;
}

json structure_json(const BiLagStructure& s) {
  json out = json::object();
  out["omega"] = form_json(s.omega().form());
  out["F1"] = frame_json(s.f1());
  out["F2"] = frame_json(s.f2());
  json adapted = json::array();
  for (const auto& a : s.adapted()) adapted.push_back(a.to_string());
  out["adapted"] = std::move(adapted);
  return out;
}

// "G^1_12"; indices are 1-based and comma separated beyond dimension 9.
std::string label(const char* symbol, const std::vector<std::size_t>& index, std::size_t dim) {
  std::string out = std::string(symbol) + "^" + std::to_string(index[0] + 1) + "_";
  for (std::size_t k = 1; k < index.size(); ++k) {
    if (k > 1 && dim > 9) out += ",";
    out += std::to_string(index[k] + 1);
  }
  return out;
}

void check(TaskResult& r, std::string name, bool ok, std::string detail = {}) {
  r.checks.push_back({std::move(name), ok ? "pass" : "fail", std::move(detail)});
}

const std::map<std::string, std::set<std::string>>& allowed_options() {
  static const std::map<std::string, std::set<std::string>> m{
      {"validate", {}},
      {"hess", {"x", "y", "expect"}},
      {"christoffels", {"frame"}},
      {"curvature", {"frame"}},
      {"flat", {"expect"}},
      {"para", {}},
      {"push", {"map"}},
      {"lift", {"k", "expect"}},
      {"act-check", {"map"}},
      {"plot", {"families", "leaves", "step", "steps", "out"}},
  };
  return m;
}

class Options {
 public:
  explicit Options(const TaskSpec& t) : t_(t) {
    auto it = allowed_options().find(t.op);
    if (it == allowed_options().end()) throw DomainError("unknown operation '" + t.op + "'");
    for (const auto& [key, value] : t.options) {
      if (!it->second.count(key)) throw DomainError("operation " + t.op + " takes no option '" + key + "'");
    }
  }

  bool has(const std::string& key) const { return t_.options.count(key) > 0; }
  const std::string& get(const std::string& key) const {
    auto it = t_.options.find(key);
    if (it == t_.options.end()) throw DomainError("operation " + t_.op + " needs " + key + "=");
    return it->second;
  }
  std::string get(const std::string& key, const std::string& fallback) const { return has(key) ? get(key) : fallback; }
  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    try {
      std::size_t used = 0;
      long v = std::stol(get(key), &used);
      if (used == get(key).size()) return v;
    } catch (const std::exception&) {
    }
    throw DomainError("option " + key + " must be an integer");
  }
  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    try {
      std::size_t used = 0;
      double v = std::stod(get(key), &used);
      if (used == get(key).size()) return v;
    } catch (const std::exception&) {
    }
    throw DomainError("option " + key + " must be a number");
  }
  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    if (get(key) == "true") return true;
    if (get(key) == "false") return false;
    throw DomainError("option " + key + " must be true or false");
  }

 private:
  const TaskSpec& t_;
};

Connection connection_for(const Scene& scene, const BiLagStructure& s, const Options& o) {
  std::string frame = o.get("frame", "foliation");
  if (frame == "foliation") return christoffels(s);
  if (frame == "coordinate") return christoffels(s, FrameChoice::coordinate);
  return christoffels(s).in_frame(scene.frame(frame));
}

json connection_json(const Connection& c) {
  json gamma = json::object();
  const auto& g = c.gammas();
  for (std::size_t k = 0; k < g.values().size(); ++k) gamma[label("G", g.index_of(k), g.dim())] = g.values()[k].to_string();
  return json{{"frame", frame_json(c.frame())}, {"gamma", std::move(gamma)}};
}

std::string pair_name(std::size_t i, std::size_t j) {
  return "(E" + std::to_string(i + 1) + ", E" + std::to_string(j + 1) + ")";
}

void hess_checks(TaskResult& r, const BiLagStructure& s, const ZeroTest& z) {
  Connection conn = christoffels(s);
  check(r, "torsion-free", equal_zero(torsion(conn), z));

  Frame frame = s.combined_frame();
  const auto& w = s.omega();
  std::string parallel;
  std::string preserves;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (std::size_t j = 0; j < frame.size(); ++j) {
      VectorField nij = conn.nabla(frame[i], frame[j]);
      const Frame& leaf = j < s.n() ? s.f1() : s.f2();
      if (preserves.empty() && !span_coefficients(nij, leaf)) preserves = "nabla" + pair_name(i, j) + " leaves the foliation";
      for (std::size_t k = 0; k < frame.size() && parallel.empty(); ++k) {
        ScalarExpr v = w(nij, frame[k]) + w(frame[j], conn.nabla(frame[i], frame[k])) - frame[i].apply(w(frame[j], frame[k]));
        if (!equal_zero(v, z)) parallel = "fails on E" + std::to_string(i + 1) + pair_name(j, k);
      }
    }
  }
  check(r, "omega parallel", parallel.empty(), parallel);
  check(r, "foliations preserved", preserves.empty(), preserves);

  Connection lc = levi_civita_oracle(para_structure(s).g, s.chart());
  std::string oracle;
  for (std::size_t i = 0; i < frame.size() && oracle.empty(); ++i) {
    for (std::size_t j = 0; j < frame.size() && oracle.empty(); ++j) {
      if (!equal_zero(hess_nabla(frame[i], frame[j], s) - lc.nabla(frame[i], frame[j]), z)) {
        oracle = "differs on " + pair_name(i, j);
      }
    }
  }
  check(r, "Levi-Civita of G", oracle.empty(), oracle);
}

void lift_invariants(TaskResult& r, const BiLagStructure& s, const ZeroTest& z) {
  const auto& w = s.omega();
  check(r, "d omega~ = 0", equal_zero(exterior_d(w.form()), z));
  bool isotropic = true;
  for (const auto& frame : {s.f1(), s.f2()}) {
    for (std::size_t a = 0; a < frame.size() && isotropic; ++a) {
      for (std::size_t b = a + 1; b < frame.size() && isotropic; ++b) {
        VectorField bracket = lie_bracket(frame[a], frame[b]);
        for (const auto& c : frame) isotropic = isotropic && equal_zero(w(bracket, c), z);
      }
    }
  }
  check(r, "omega~([E,E'],E'') = 0", isotropic);
}

void run(const Scene& scene, const TaskSpec& task, const RunOptions& run_options, TaskResult& r) {
  const Options o(task);
  const ZeroTest& z = run_options.zero;
  r.chart = scene.chart.names();
  json& p = r.payload;

  if (task.op == "plot") {
    if (scene.chart.dim() != 2) throw DomainError("plotting needs a 2-dimensional chart");
    auto unbound = scene.unbound_symbols();
    if (!unbound.empty()) throw DomainError("plotting needs '" + unbound.front() + "' bound (bind " + unbound.front() + " = ...)");
    std::vector<PlotFamily> families;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (const auto& name : split_top(o.get("families", scene.first + "," + scene.second), ',')) {
      auto it = scene.foliations.find(name);
      if (it == scene.foliations.end()) throw DomainError("unknown foliation '" + name + "'");
      families.push_back({name, it->second.front(), colors[families.size() % 4]});
    }
    PlotOptions po;
    po.window = scene.window;
    po.leaves = static_cast<int>(o.integer("leaves", po.leaves));
    po.step = o.number("step", po.step);
    po.steps = static_cast<int>(o.integer("steps", po.steps));
    Plot plot = plot_leaves(families, po);
    p["curves"] = plot.curves;
    p["points"] = plot.points;
    if (o.has("out")) {
      std::ofstream out(o.get("out"));
      if (!out) throw Error("cannot write '" + o.get("out") + "'");
      out << plot.svg;
    }
    r.svg = std::move(plot.svg);
    return;
  }

  BiLagStructure s = [&] {
    try {
      return scene.structure(z);
    } catch (const ValidationError& e) {
      for (const auto& issue : e.issues()) check(r, issue.condition, false, issue.detail);
      throw;
    }
  }();
  r.warnings = s.warnings();

  if (task.op == "validate") {
    check(r, "bi-Lagrangian", true);
    p = structure_json(s);
    p["determinant"] = s.omega().determinant().to_string();
  } else if (task.op == "hess") {
    if (o.has("x") || o.has("y")) {
      VectorField v = hess_nabla(scene.field(o.get("x")), scene.field(o.get("y")), s);
      p["nabla"] = vec_json(v);
      if (o.has("expect")) check(r, "expected value", equal_zero(v - scene.field(o.get("expect")), z));
    } else {
      Frame frame = s.combined_frame();
      json table = json::object();
      for (std::size_t i = 0; i < frame.size(); ++i) {
        for (std::size_t j = 0; j < frame.size(); ++j) table[pair_name(i, j)] = vec_json(hess_nabla(frame[i], frame[j], s));
      }
      p["frame"] = frame_json(frame);
      p["nabla"] = std::move(table);
      hess_checks(r, s, z);
    }
  } else if (task.op == "christoffels") {
    p = connection_json(connection_for(scene, s, o));
  } else if (task.op == "curvature") {
    Connection c = connection_for(scene, s, o);
    Tensor t = curvature(c);
    json nonzero = json::object();
    for (std::size_t k = 0; k < t.values().size(); ++k) {
      if (!equal_zero(t.values()[k], z)) nonzero[label("R", t.index_of(k), t.dim())] = t.values()[k].to_string();
    }
    p["frame"] = frame_json(c.frame());
    p["R"] = std::move(nonzero);
  } else if (task.op == "flat") {
    FlatnessCertificate cert = is_flat(s, z);
    bool expect = o.flag("expect", true);
    check(r, expect ? "flat" : "not flat", cert.flat == expect,
          cert.flat ? "" : std::to_string(cert.nonzero.size()) + " nonzero curvature coefficients");
    json nonzero = json::object();
    for (const auto& [idx, v] : cert.nonzero) {
      nonzero[label("R", {idx[0], idx[1], idx[2], idx[3]}, s.chart().dim())] = v.to_string();
    }
    p["R"] = std::move(nonzero);
  } else if (task.op == "para") {
    ParaKahler pk = para_structure(s);
    auto issues = check_para_kahler(pk, s, z);
    for (const auto& issue : issues) check(r, issue.condition, false, issue.detail);
    if (issues.empty()) check(r, "para-Kaehler identities", true);
    p["F"] = matrix_json(pk.f);
    p["G"] = matrix_json(pk.g);
  } else if (task.op == "push") {
    const SmoothMap& psi = scene.map(o.get("map"));
    BiLagStructure pushed = push_structure(psi, s, z);
    check(r, "pushed structure is bi-Lagrangian", true);
    Connection direct = christoffels(pushed);
    Connection moved = push_connection(psi, christoffels(s));
    bool same = true;
    for (std::size_t k = 0; k < direct.gammas().values().size(); ++k) {
      same = same && equal(direct.gammas().values()[k], moved.gammas().values()[k], z);
    }
    for (std::size_t i = 0; i < direct.frame().size(); ++i) same = same && equal_zero(direct.frame()[i] - moved.frame()[i], z);
    check(r, "Hess connection of the push = pushed Hess connection", same);
    Matrix fp = push_paracomplex(psi, s);
    Matrix fd = para_structure(pushed).f;
    bool para = true;
    for (std::size_t i = 0; i < fp.size(); ++i) {
      for (std::size_t j = 0; j < fp.size(); ++j) para = para && equal(fp[i][j], fd[i][j], z);
    }
    check(r, "pushed F = F of the push", para);
    p = structure_json(pushed);
    p["F"] = matrix_json(fp);
    r.warnings = pushed.warnings();
  } else if (task.op == "lift") {
    long k = o.integer("k", 1);
    if (k < 0) throw DomainError("k must be nonnegative");
    BiLagStructure lifted = s;
    for (long level = 1; level <= k; ++level) {
      std::size_t dim = 2 * lifted.chart().dim();
      if (dim > run_options.max_dim) {
        throw DomainError("lift " + std::to_string(level) + " would reach dimension " + std::to_string(dim) +
                          ", above the cap " + std::to_string(run_options.max_dim));
      }
      auto names = level == 1 && scene.fibers ? *scene.fibers : default_fibers(lifted.chart(), static_cast<int>(level));
      lifted = lift_structure(lifted, names, z).structure;
    }
    check(r, "lifted structure is bi-Lagrangian", true);
    lift_invariants(r, lifted, z);
    if (o.has("expect")) {
      KForm expected = scene.form(o.get("expect"), &lifted.chart());
      check(r, "expected omega~", equal_zero(lifted.omega().form() - expected, z));
    }
    r.chart = lifted.chart().names();
    r.warnings = lifted.warnings();
    p = structure_json(lifted);
  } else if (task.op == "act-check") {
    const SmoothMap& psi = scene.map(o.get("map"));
    ActionReport rep = lifted_action_check(psi, s, scene.fibers, z);
    check(r, "psi^ pushes F^pi into (psi F)^pi", rep.criterion);
    check(r, "hat action = tilde action", rep.equal);
    json members = json::object();
    for (const auto& m : rep.memberships) {
      members[m.foliation + " " + m.side + " " + std::to_string(m.index + 1)] = json{
          {"member", m.member},
          {"field", vec_json(m.side == "tilde in hat" ? (m.foliation == "F1" ? rep.tilde.f1() : rep.tilde.f2())[m.index]
                                                       : (m.foliation == "F1" ? rep.hat.f1() : rep.hat.f2())[m.index])}};
    }
    r.chart = rep.hat.chart().names();
    r.warnings = rep.warnings;
    p["hat"] = structure_json(rep.hat);
    p["tilde"] = structure_json(rep.tilde);
    p["memberships"] = std::move(members);
  }
}

}  // namespace

bool Report::passed() const {
  for (const auto& t : tasks) {
    if (t.verdict == "fail") return false;
  }
  return true;
}

TaskResult run_task(const Scene& scene, const TaskSpec& task, const RunOptions& options) {
  TaskResult r;
  r.name = task.name;
  r.op = task.op;
  auto start = std::chrono::steady_clock::now();
  try {
    run(scene, task, options, r);
  } catch (const std::exception& e) {
    r.error = e.what();
    r.payload = json::object();
    r.svg.clear();
  }
  r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  bool fail = !r.error.empty();
  bool pass = false;
  for (const auto& c : r.checks) {
    fail = fail || c.verdict == "fail";
    pass = pass || c.verdict == "pass";
  }
  r.verdict = fail ? "fail" : pass ? "pass" : "computed";
  return r;
}

Report run_scene(const Scene& scene, const std::vector<TaskSpec>& tasks, const RunOptions& options) {
  Report report;
  report.scene = scene.name;
  report.seed = options.zero.seed;
  auto start = std::chrono::steady_clock::now();
  for (const auto& t : tasks) report.tasks.push_back(run_task(scene, t, options));
  report.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

json to_json(const Report& report, bool with_timing) {
  json out = json::object();
  out["format"] = "bilag-report";
  out["version"] = 1;
  out["scene"] = report.scene;
  out["seed"] = report.seed;
  json tasks = json::array();
  std::map<std::string, int> summary{{"pass", 0}, {"fail", 0}, {"computed", 0}};
  for (const auto& t : report.tasks) {
    json j = json::object();
    j["name"] = t.name;
    j["op"] = t.op;
    j["verdict"] = t.verdict;
    j["chart"] = t.chart;
    json checks = json::array();
    for (const auto& c : t.checks) checks.push_back(json{{"name", c.name}, {"verdict", c.verdict}, {"detail", c.detail}});
    j["checks"] = std::move(checks);
    j["warnings"] = t.warnings;
    if (!t.error.empty()) j["error"] = t.error;
    j["payload"] = t.payload;
    tasks.push_back(std::move(j));
    ++summary[t.verdict];
  }
  out["tasks"] = std::move(tasks);
  out["summary"] = json{{"pass", summary["pass"]}, {"fail", summary["fail"]}, {"computed", summary["computed"]}};
  if (with_timing) {
    json per = json::object();
    for (const auto& t : report.tasks) per[t.name] = t.millis;
    out["timing"] = json{{"total_ms", report.millis}, {"tasks", std::move(per)}};
  }
  return out;
}

namespace {

void print_payload(std::ostringstream& out, const json& j, const std::string& path) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) print_payload(out, value, path.empty() ? key : path + "." + key);
  } else if (j.is_array() && !j.empty() && j.front().is_string()) {
    out << "  " << path << " = (";
    for (std::size_t i = 0; i < j.size(); ++i) out << (i ? ", " : "") << j[i].get<std::string>();
    out << ")\n";
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) print_payload(out, j[i], path + "[" + std::to_string(i + 1) + "]");
  } else if (j.is_string()) {
    out << "  " << path << " = " << j.get<std::string>() << "\n";
  } else {
    out << "  " << path << " = " << j.dump() << "\n";
  }
}

}  // namespace

std::string to_text(const Report& report) {
  std::ostringstream out;
  out << "scene " << report.scene << "\n";
  int counts[3] = {0, 0, 0};
  for (const auto& t : report.tasks) {
    out << "[" << t.verdict << "] " << t.name << " (" << t.op << ")\n";
    if (!t.error.empty()) out << "  error: " << t.error << "\n";
    for (const auto& c : t.checks) {
      out << "  " << c.verdict << ": " << c.name;
      if (!c.detail.empty()) out << " (" << c.detail << ")";
      out << "\n";
    }
    for (const auto& w : t.warnings) out << "  warning: " << w << "\n";
    print_payload(out, t.payload, "");
    ++counts[t.verdict == "pass" ? 0 : t.verdict == "fail" ? 1 : 2];
  }
  out << counts[0] << " pass, " << counts[1] << " fail, " << counts[2] << " computed\n";
  return out.str();
}

}  // namespace bilag
