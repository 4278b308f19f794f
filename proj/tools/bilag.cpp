// bilag: run scene tasks and emit reports.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bilag/errors.hpp"
#include "bilag/report.hpp"
#include "bilag/scene.hpp"

namespace {

struct Args {
  std::string scene;
  std::string task;
  std::string format = "text";
  std::string out;
  std::size_t max_dim = 16;
  std::uint64_t seed = bilag::ZeroTest{}.seed;
  std::vector<std::string> binds;
};

bool write(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "bilag: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  return true;
}

int run(const std::string& command, const Args& args) {
  bilag::Scene scene;
  try {
    std::string extra;
    for (const auto& b : args.binds) {
      auto eq = b.find('=');
      if (eq == std::string::npos) {
        std::cerr << "bilag: --bind expects NAME=EXPR\n";
        return 2;
      }
      extra += "bind " + b.substr(0, eq) + " = " + b.substr(eq + 1) + "\n";
    }
    scene = bilag::load_scene(args.scene, extra);
  } catch (const bilag::ParseError& e) {
    std::cerr << args.scene << ":" << e.line() << ":" << e.column() << ": " << e.reason() << "\n";
    return 2;
  } catch (const bilag::Error& e) {
    std::cerr << "bilag: " << e.what() << "\n";
    return 2;
  }

  std::vector<bilag::TaskSpec> tasks;
  for (const auto& t : scene.tasks) {
    if ((command == "report" || t.op == command) && (args.task.empty() || t.name == args.task)) tasks.push_back(t);
  }
  if (!args.task.empty() && tasks.empty()) {
    std::cerr << "bilag: no task '" << args.task << "'" << (command == "report" ? "" : " for " + command) << " in "
              << args.scene << "\n";
    return 2;
  }
  if (tasks.empty() && command != "report") tasks.push_back({command, command, {}, 0});

  bilag::RunOptions options;
  options.zero.seed = args.seed;
  options.max_dim = args.max_dim;

  if (command == "plot") {
    bilag::TaskResult r = bilag::run_task(scene, tasks.front(), options);
    if (r.verdict == "fail") {
      std::cerr << "bilag: " << r.error << "\n";
      return 1;
    }
    return write(args.out, r.svg) ? 0 : 2;
  }

  bilag::Report report = bilag::run_scene(scene, tasks, options);
  std::string text = args.format == "machine" ? bilag::to_json(report).dump(2) + "\n" : bilag::to_text(report);
  if (!write(args.out, text)) return 2;
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-Lagrangian structure engine"};
  app.require_subcommand(1);
  Args args;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"validate", "certify the structure"},
      {"hess", "Hess connection and its defining properties"},
      {"christoffels", "Christoffel symbols in a frame"},
      {"curvature", "curvature tensor"},
      {"flat", "flatness with certificate"},
      {"para", "para-Kaehler companion (F, G)"},
      {"push", "push the structure along a map"},
      {"lift", "lift to the trivial bundle"},
      {"act-check", "compare the two lifted actions"},
      {"plot", "SVG leaf plot"},
      {"report", "run every task of the scene"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--scene", args.scene, "scene file")->required()->check(CLI::ExistingFile);
    sub->add_option("--task", args.task, "run only this task");
    sub->add_option("--format", args.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    sub->add_option("--out", args.out, "output path (report, or SVG for plot)");
    sub->add_option("--max-dim", args.max_dim, "dimension cap for iterated lifts");
    sub->add_option("--seed", args.seed, "seed of the randomized cross-check");
    sub->add_option("--bind", args.binds, "bind an opaque symbol, NAME=EXPR (repeatable)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (const auto* sub : app.get_subcommands()) return run(sub->get_name(), args);
  return 2;
}
