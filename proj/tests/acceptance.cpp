// One PASS/FAIL line per acceptance criterion; exit status is the number of
// failed criteria.
#include "sipcert/checks.hpp"
#include "sipcert/commands.hpp"
#include "sipcert/multipliers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace sipcert;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

model::Problem fixture(const std::string& name) { return io::parse_problem(commands::bundled_fixture(name).text); }

// Collects failed expectations for one criterion.
struct Criterion {
  std::vector<std::string> problems;
  std::ostringstream notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " = %.12g, want %.12g", got, want);
      problems.push_back(what + buf);
    }
  }
  void outcome(const checks::Outcome& o, const std::string& what) {
    expect(o.pass, what + ": " + o.detail);
    notes << " " << what << " " << (o.instances - o.failures) << "/" << o.instances << ";";
  }
};

bool has_generator(const std::vector<io::TaggedVector>& gens, double a, double b, double tol) {
  for (const auto& g : gens)
    if (g.vector.size() == 2 && std::abs(g.vector[0] - a) <= tol && std::abs(g.vector[1] - b) <= tol) return true;
  return false;
}

// Euclidean distance from v to the segment [(-1,0), (0,-1)].
double distance_to_segment(const std::vector<double>& v) {
  const double ax = -1, ay = 0, dx = 1, dy = -1;
  double s = ((v[0] - ax) * dx + (v[1] - ay) * dy) / (dx * dx + dy * dy);
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(v[0] - (ax + s * dx), v[1] - (ay + s * dy));
}

void countable(Criterion& c) {
  const auto start = Clock::now();
  const auto prob = fixture("countable");
  const auto tc = commands::tcset(prob);
  const auto cert = commands::certify(prob);
  const auto strict = commands::certify(fixture("countable_strict"));
  const double elapsed = seconds_since(start);

  c.expect(tc.final_generators.size() == 2, "final hull has " + std::to_string(tc.final_generators.size()) + " generators");
  c.expect(has_generator(tc.final_generators, 1, 0, 1e-9), "(1,0) missing from the final hull");
  c.expect(has_generator(tc.final_generators, 0, 1, 1e-9), "(0,1) missing from the final hull");
  c.expect(cert.verdict == "KKT", "certify verdict " + cert.verdict);
  if (cert.witness.size() == 2) {
    c.near(cert.witness[0], 0, 1e-9, "witness x1");
    c.near(cert.witness[1], 1, 1e-9, "witness x2");
  } else {
    c.expect(false, "no witness");
  }
  c.near(cert.lambda, 0.5, 1e-9, "lambda");
  c.near(cert.beta, 0.5, 1e-9, "beta");
  c.expect(strict.verdict == "NoCertificate", "strict variant verdict " + strict.verdict);
  c.expect(strict.final_generators.size() == 1 && has_generator(strict.final_generators, 1, 0, 1e-12),
           "strict hull is not {(1,0)}");
  c.expect(elapsed < 0.1, "runtime " + std::to_string(elapsed) + " s");
  c.notes << " runtime " << elapsed << " s";
}

void semi_infinite(Criterion& c) {
  const auto start = Clock::now();
  const auto prob = fixture("linear_sip");
  const auto tc = commands::tcset(prob);
  const auto sip = multipliers::sip_multipliers(prob, *prob.candidate, prob.options);
  const double elapsed = seconds_since(start);

  double hausdorff = 0;
  for (const auto& g : tc.final_generators) hausdorff = std::max(hausdorff, distance_to_segment(g.vector));
  c.expect(!tc.final_generators.empty(), "empty final hull");
  c.expect(hausdorff <= 1e-6, "one-sided Hausdorff distance " + std::to_string(hausdorff));
  c.expect(sip.weights.size() == 1, "k = " + std::to_string(sip.weights.size()));
  c.near(sip.lambda0, 1.0 / 3, 1e-6, "lambda0");
  if (sip.weights.size() == 1) {
    c.near(sip.weights[0], 2.0 / 3, 1e-6, "lambda1");
    c.near(sip.params[0](0), 0.5, 1e-6, "t1");
  }
  c.expect(sip.residual <= 1e-9, "residual " + std::to_string(sip.residual));
  c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
  c.notes << " hausdorff " << hausdorff << ", residual " << sip.residual << ", runtime " << elapsed << " s";
}

void equality(Criterion& c) {
  const auto circle = commands::certify(fixture("circle_equality"));
  c.expect(circle.branch == "OntoNoA", "circle branch " + circle.branch);
  c.near(circle.lambda0.value_or(-1), 1, 1e-9, "lambda0");
  c.expect(circle.w0.size() == 1, "w0 has the wrong size");
  if (circle.w0.size() == 1) c.near(circle.w0[0], -0.5, 1e-9, "w0");
  c.expect(circle.residual <= 1e-9, "circle residual " + std::to_string(circle.residual));

  const auto dup = commands::certify(fixture("duplicated_rows"));
  c.expect(dup.branch == "NotOnto", "duplicated rows branch " + dup.branch);
  c.expect(dup.jacobian.has_value(), "no Jacobian block");
  if (dup.jacobian && dup.w0.size() == 2) {
    const auto& w = dup.w0;
    c.near(std::hypot(w[0], w[1]), 1, 1e-9, "|w0|");
    // The Jacobian is [[1,0],[1,0]], so w^T J = 0 means w1 + w2 = 0.
    c.near(w[0] * 1 + w[1] * 1, 0, 1e-9, "w0 against the first column");
  } else {
    c.expect(false, "no left-null vector");
  }
}

void convex_clause(Criterion& c) {
  int checked = 0;
  for (const auto& f : commands::bundled_fixtures()) {
    const auto prob = io::parse_problem(f.text);
    if (!prob.inequality || prob.inequality->kind != model::FamilyKind::Polyhedral) continue;
    const auto r = commands::certify(prob);
    if (r.z0.empty()) continue;
    c.expect(!r.convex_set.empty(), f.name + ": z0 emitted without a convex-set check");
    for (const auto& block : r.convex_set) {
      ++checked;
      c.expect(block.pass, f.name + ": convex-set check failed");
      c.expect(block.dual_ok && block.dual_margin >= -1e-8, f.name + ": z0 outside the dual cone");
      c.expect(block.min_ok, f.name + ": minimum not attained at the point");
    }
  }
  c.expect(checked >= 4, "only " + std::to_string(checked) + " polyhedral multipliers checked");
  c.notes << " " << checked << " multipliers checked";
}

void properties(Criterion& c) {
  const auto start = Clock::now();
  const auto seed = model::sampling_seed();
  c.outcome(checks::gradient_vs_differences(200, seed), "gradients");
  c.outcome(checks::hull_vs_grid_oracle(100, seed + 1), "hull oracle");
  int fixtures = 0;
  for (const auto& f : commands::bundled_fixtures()) {
    const auto prob = io::parse_problem(f.text);
    if (!prob.inequality || !prob.candidate || !prob.equality.empty()) continue;
    if (!model::feasibility(prob, *prob.candidate, prob.options).feasible) continue;
    ++fixtures;
    const auto o = checks::ladder_nesting(prob, *prob.candidate, prob.options);
    c.expect(o.pass, "ladder nesting on " + f.name + ": " + o.detail);
    if (prob.inner_map.empty()) {
      const auto s = checks::objective_scaling(prob, *prob.candidate, prob.options);
      c.expect(s.pass, "objective scaling on " + f.name + ": " + s.detail);
    }
  }
  c.notes << " nesting/scaling on " << fixtures << " fixtures;";
  c.outcome(checks::ladder_nesting_random(50, seed + 2), "random nesting");
  c.outcome(checks::caratheodory_random(100, seed + 3), "Caratheodory");
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 30, "suite took " + std::to_string(elapsed) + " s");
  c.notes << " runtime " << elapsed << " s";
}

void cones(Criterion& c) {
  const auto o = checks::cone_interior_vs_sampling(50, 10000, model::sampling_seed() + 5);
  c.expect(o.pass, o.detail);
  c.notes << " " << o.detail;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Criterion&)>> criteria[] = {
      {"1 countable family reproduction", countable},
      {"2 semi-infinite closed form", semi_infinite},
      {"3 equality branches", equality},
      {"4 convex-set multipliers", convex_clause},
      {"5 property suites", properties},
      {"6 cone interior vs sampling", cones},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Criterion c;
    try {
      run(c);
    } catch (const std::exception& e) {
      c.problems.push_back(std::string("exception: ") + e.what());
    }
    const bool pass = c.problems.empty();
    failed += pass ? 0 : 1;
    std::printf("%s criterion %s:%s\n", pass ? "PASS" : "FAIL", name, c.notes.str().c_str());
    for (const auto& p : c.problems) std::printf("    %s\n", p.c_str());
  }
  return failed;
}
