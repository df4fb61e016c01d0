#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sipcert/commands.hpp"

#include <cmath>
#include <string>

using namespace sipcert;

namespace {

model::Problem fixture(const std::string& name) { return io::parse_problem(commands::bundled_fixture(name).text); }

std::string input_error_path(const std::string& text) {
  try {
    io::parse_problem(text);
  } catch (const io::InputError& e) {
    return e.path().empty() ? "<root>" : e.path();
  }
  return "";
}

}  // namespace

TEST_CASE("problem files: schema errors carry a path") {
  CHECK(input_error_path("{\"dimension\": 2,") == "<root>");
  CHECK(input_error_path(R"({"dimension": 1, "objective": "x1", "colour": 1})") == "colour");
  CHECK(input_error_path(R"({"dimension": 2, "objective": "x1",
      "constraints": {"finite": ["x1", "x2 +"]}})") == "constraints.finite[1]");
  CHECK(input_error_path(R"({"dimension": 2, "objective": "x3"})") == "objective");
  CHECK(input_error_path(R"({"dimension": 1, "objective": "x1",
      "constraints": {"finite": ["x1"], "polyhedral": {"normals": [[1]], "offsets": [0]}}})") == "constraints");
  CHECK(input_error_path(R"({"dimension": 1, "objective": "x1",
      "constraints": {"parametric": {"h": ["1 - t1*x1"], "t_dim": 1,
                      "box": {"lower": [0], "upper": [1]}, "grid": 1}}})") != "");
  CHECK(input_error_path(R"({"dimension": 1, "objective": "x1", "options": {"shrink": "half"}})") != "");
}

TEST_CASE("problem files: every bundled fixture loads") {
  CHECK(commands::bundled_fixtures().size() >= 14);
  for (const auto& f : commands::bundled_fixtures()) {
    CAPTURE(f.name);
    CHECK_NOTHROW(io::parse_problem(f.text));
  }
  CHECK_THROWS_AS(commands::bundled_fixture("nope"), std::invalid_argument);
}

TEST_CASE("overrides take precedence over file options") {
  auto prob = fixture("countable");
  io::OptionOverrides o;
  o.eps0 = 0.25;
  o.k_max = 20;
  io::apply_overrides(prob.options, o);
  CHECK(prob.options.eps0 == 0.25);
  CHECK(prob.options.k_max == 20);
}

TEST_CASE("exit codes by verdict") {
  CHECK(io::exit_code(commands::certify(fixture("countable"))) == 0);
  CHECK(io::exit_code(commands::certify(fixture("countable_strict"))) == 2);
  CHECK(io::exit_code(commands::certify(fixture("countable_infeasible"))) == 3);
  CHECK(io::exit_code(commands::from_file("certify", "/nonexistent.json", {}, commands::certify)) == 4);
  CHECK(io::exit_code(commands::tcset(fixture("countable_interior"))) == 0);
}

TEST_CASE("countable fixture certify report") {
  const auto r = commands::certify(fixture("countable"));
  CHECK(r.verdict == "KKT");
  CHECK(r.lambda == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.beta == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(r.witness.size() == 2);
  CHECK(std::abs(r.witness[0]) < 1e-12);
  CHECK(r.witness[1] == doctest::Approx(1.0));
  CHECK(r.objective_gradient == std::vector<double>{0.0, -1.0});
  CHECK(r.timings_ms.count("total") == 1);
}

TEST_CASE("reports round-trip through JSON") {
  for (const auto& f : commands::bundled_fixtures()) {
    CAPTURE(f.name);
    const auto prob = io::parse_problem(f.text);
    for (const auto& r : {commands::certify(prob), commands::tcset(prob), commands::admissible(prob)}) {
      const auto text = io::emit(r);
      CHECK(io::parse_report(text) == r);
      CHECK(text.find(": inf") == std::string::npos);
      CHECK(text.find(": -inf") == std::string::npos);
      CHECK(text.find("nan") == std::string::npos);
      for (const char* bad : {": null", "[null", ", null"}) CHECK(text.find(bad) == std::string::npos);
    }
  }
}

TEST_CASE("floats are written with 17 significant digits") {
  io::Json doc = {{"third", 1.0 / 3.0}};
  CHECK(io::dump(doc).find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("infeasible certify keeps only feasibility data") {
  const auto r = commands::certify(fixture("countable_infeasible"));
  CHECK(r.verdict == "Infeasible");
  CHECK(r.witness.empty());
  CHECK(r.coefficients.empty());
  REQUIRE(!r.violated.empty());
  CHECK(r.violated.front() == "c0");
  const auto j = io::to_json(r);
  CHECK_FALSE(j.contains("witness"));
}

TEST_CASE("scan ranks feasible grid points") {
  const auto prob = fixture("countable");
  const auto r = commands::scan(prob, {{-1, 1, -1, 1}, 101, 3});
  CHECK(r.verdict == "Candidates");
  REQUIRE(r.candidates.size() == 3);
  CHECK(r.candidates[0].point == std::vector<double>{0.0, 0.0});
  CHECK(r.candidates[0].objective >= r.candidates[1].objective);
  CHECK(r.candidates[1].objective >= r.candidates[2].objective);

  const auto empty = commands::scan(prob, {{-2, -1, -2, -1}, 11, 3});
  CHECK(empty.verdict == "Infeasible");
  const auto bad = commands::scan(prob, {{0, 1}, 11, 3});
  CHECK(bad.verdict == "InputError");
}

TEST_CASE("text rendering names the verdict") {
  const auto text = io::render_text(commands::certify(fixture("finite_orthant")));
  CHECK(text.find("KKT") != std::string::npos);
}
