#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <string>

#include "bilag/errors.hpp"
#include "bilag/plot.hpp"
#include "bilag/report.hpp"
#include "bilag/scene.hpp"

using namespace bilag;

namespace {

std::string scene_path(const char* name) { return std::string(BILAG_SCENES_DIR) + "/" + name; }

const char* kMinimal =
    "name = tiny\n"
    "chart = x, y\n"
    "omega = dy^dx\n"
    "field X = (1, 0)\n"
    "field Y = (0, 1)\n"
    "foliation A = X\n"
    "foliation B = Y\n"
    "structure = A, B\n";

void expect_parse_error(const std::string& text, std::size_t line, std::size_t column) {
  try {
    parse_scene(text);
    FAIL("no error for:\n" << text);
  } catch (const ParseError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
  }
}

TaskResult run_one(const Scene& scene, const std::string& name) {
  for (const auto& t : scene.tasks) {
    if (t.name == name) return run_task(scene, t);
  }
  FAIL("no task " << name);
  return {};
}

// Every string leaf of a payload.
void each_string(const nlohmann::ordered_json& j, const std::function<void(const std::string&)>& f) {
  if (j.is_string()) {
    f(j.get<std::string>());
  } else if (j.is_array() || j.is_object()) {
    for (const auto& v : j) each_string(v, f);
  }
}

}  // namespace

TEST_CASE("minimal scene parses") {
  auto s = parse_scene(kMinimal);
  CHECK(s.name == "tiny");
  CHECK(s.chart.dim() == 2);
  CHECK(s.structure().n() == 1);
  CHECK(s.unbound_symbols().empty());
}

TEST_CASE("scene errors carry line and column") {
  std::string body(kMinimal);
  auto with = [&](const std::string& from, const std::string& to) {
    auto text = body;
    text.replace(text.find(from), from.size(), to);
    return text;
  };
  // g is never declared
  expect_parse_error(with("omega = dy^dx", "omega = (g) dy^dx"), 3, 10);
  expect_parse_error(with("field X = (1, 0)", "field X = (1, 0"), 4, 11);
  expect_parse_error(body + "bogus = 3\n", 9, 1);
  expect_parse_error(std::string(kMinimal) + "task t = frobnicate\n", 9, 10);
  expect_parse_error(std::string(kMinimal) + "task t = push map=nowhere\n", 9, 19);
}

TEST_CASE("scene errors name missing declarations") {
  CHECK_THROWS_AS(parse_scene("chart = x, y\n"), ParseError);
  CHECK_THROWS_AS(parse_scene("chart = x, y, z\nomega = dy^dx\n"), ParseError);
}

TEST_CASE("declaration order does not matter") {
  auto a = parse_scene(kMinimal);
  auto b = parse_scene(
      "structure = A, B\nfoliation B = Y\nfoliation A = X\nfield Y = (0, 1)\nfield X = (1, 0)\n"
      "omega = dy^dx\nchart = x, y\n");
  CHECK(equal_zero(a.omega - b.omega));
}

TEST_CASE("bundled scenes load and pass") {
  for (const char* name : {"standard.scene", "lifted-standard.scene", "affine-action.scene"}) {
    CAPTURE(name);
    auto scene = load_scene(scene_path(name));
    auto report = run_scene(scene, scene.tasks);
    CHECK(report.passed());
  }
  auto parabola = load_scene(scene_path("parabola.scene"));
  CHECK(parabola.unbound_symbols() == std::vector<std::string>{"h"});
  CHECK(run_scene(parabola, parabola.tasks).passed());
}

TEST_CASE("christoffel payload on the parabola") {
  auto scene = load_scene(scene_path("parabola.scene"));
  auto r = run_one(scene, "gamma");
  REQUIRE(r.error.empty());
  const auto& g = r.payload["gamma"];
  CHECK(equal_zero(scene.expr(g["G^1_11"].get<std::string>()) - scene.expr("(h_x + 2*x*h_y)/h")));
  CHECK(equal_zero(scene.expr(g["G^2_22"].get<std::string>()) - scene.expr("h_y/h")));
  int zeros = 0;
  for (const auto& [k, v] : g.items()) zeros += v.get<std::string>() == "0";
  CHECK(zeros == 6);
}

TEST_CASE("payload strings reparse over the task chart") {
  for (const char* name : {"standard.scene", "parabola.scene", "lifted-standard.scene", "affine-action.scene"}) {
    CAPTURE(name);
    auto scene = load_scene(scene_path(name));
    auto report = run_scene(scene, scene.tasks);
    for (const auto& t : report.tasks) {
      if (t.op == "plot") continue;
      Chart chart(t.chart);
      each_string(t.payload, [&](const std::string& s) {
        if (s == "true" || s == "false") return;
        CAPTURE(s);
        auto e = scene.expr(s, &chart);
        CHECK(e.to_string() == s);
      });
    }
  }
}

TEST_CASE("machine report is deterministic") {
  auto scene = load_scene(scene_path("parabola.scene"));
  auto a = to_json(run_scene(scene, scene.tasks), false).dump(2);
  auto b = to_json(run_scene(scene, scene.tasks), false).dump(2);
  CHECK(a == b);
  auto j = nlohmann::json::parse(a);
  CHECK(j["format"] == "bilag-report");
  CHECK(j["version"] == 1);
  CHECK_FALSE(j.contains("timing"));
  CHECK(j["summary"]["fail"] == 0);
}

TEST_CASE("failing expectation fails the report") {
  auto scene = load_scene(scene_path("parabola.scene"), "task wrong = hess x=U y=V expect=(1,0)\n");
  auto r = run_one(scene, "wrong");
  CHECK(r.verdict == "fail");
  Report report;
  report.tasks.push_back(r);
  CHECK_FALSE(report.passed());

  auto flat = load_scene(scene_path("parabola.scene"), "task wrongflat = flat expect=true\n");
  CHECK(run_one(flat, "wrongflat").verdict == "fail");
}

TEST_CASE("operation errors become failed tasks") {
  auto scene = load_scene(scene_path("standard.scene"), "task big = lift k=4\n");
  auto r = run_one(scene, "big");
  CHECK(r.verdict == "fail");
  CHECK_FALSE(r.error.empty());
}

TEST_CASE("bind replaces an opaque function") {
  auto scene = load_scene(scene_path("parabola.scene"), "bind h = 3\n");
  CHECK(scene.unbound_symbols().empty());
  CHECK(run_one(scene, "flat").verdict == "fail");  // the file expects a curved connection
  auto flat = load_scene(scene_path("parabola.scene"), "bind h = 3\ntask isflat = flat expect=true\n");
  CHECK(run_one(flat, "isflat").verdict == "pass");
}

TEST_CASE("plot") {
  auto scene = load_scene(scene_path("standard.scene"));
  auto a = run_one(scene, "leaves");
  auto b = run_one(scene, "leaves");
  REQUIRE(a.error.empty());
  CHECK(a.svg == b.svg);
  CHECK(a.svg.rfind("<svg", 0) == 0);
  CHECK(a.payload["curves"] == 18);

  auto unbound = load_scene(scene_path("parabola.scene"), "task p = plot\n");
  auto r = run_one(unbound, "p");
  CHECK(r.verdict == "fail");
  CHECK(r.error.find("'h'") != std::string::npos);

  auto bound = load_scene(scene_path("parabola.scene"), "bind h = 1\ntask p = plot\n");
  CHECK(run_one(bound, "p").error.empty());

  Chart four({"x", "y", "s", "t"});
  CHECK_THROWS_AS(plot_leaves({{"X", VectorField::coordinate(four, 0), "black"}}, {}), DomainError);
}
