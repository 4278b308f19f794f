#pragma once

// Task execution and report emission.
//
// Machine format (version 1):
//   {"format": "bilag-report", "version": 1, "scene": NAME, "seed": N,
//    "tasks": [{"name", "op", "verdict": "pass" | "fail" | "computed",
//               "chart": [coordinate names], "checks": [{"name", "verdict", "detail"}],
//               "warnings": [...], "error": TEXT (only on failure),
//               "payload": {...}}],
//    "summary": {"pass": N, "fail": N, "computed": N},
//    "timing": {"total_ms": T, "tasks": {NAME: T}}}
// Every string inside a payload is an expression over the task's chart in
// canonical printed form. Everything except "timing" is deterministic.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bilag/scene.hpp"

namespace bilag {

struct Check {
  std::string name;
  std::string verdict;  // "pass" or "fail"
  std::string detail;
};

struct TaskResult {
  std::string name;
  std::string op;
  std::string verdict = "computed";
  std::vector<std::string> chart;
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  std::string error;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();
  double millis = 0;
  /// SVG document of a plot task; not part of the report.
  std::string svg;
};

struct RunOptions {
  ZeroTest zero;
  std::size_t max_dim = 16;
};

struct Report {
  std::string scene;
  std::uint64_t seed = 0;
  std::vector<TaskResult> tasks;
  double millis = 0;

  bool passed() const;
};

/// Never throws for operation failures: they become a failed verdict with
/// the error text.
TaskResult run_task(const Scene& scene, const TaskSpec& task, const RunOptions& options = {});
Report run_scene(const Scene& scene, const std::vector<TaskSpec>& tasks, const RunOptions& options = {});

nlohmann::ordered_json to_json(const Report& report, bool with_timing = true);
std::string to_text(const Report& report);

}  // namespace bilag
