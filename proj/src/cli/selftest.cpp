#include "sipcert/checks.hpp"
#include "sipcert/commands.hpp"

#include <chrono>
#include <cmath>
#include <functional>

namespace sipcert::commands {

namespace {

using Report = io::CertificateReport;
// Returns an empty string on success, else what went wrong.
using Expectation = std::function<std::string(const model::Problem&)>;

std::string near(const char* what, double got, double want, double tol) {
  if (std::abs(got - want) <= tol) return "";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s = %.12g, expected %.12g", what, got, want);
  return buf;
}

std::string verdict_is(const Report& r, const std::string& want) {
  if (r.verdict == want) return "";
  return r.command + " verdict " + r.verdict + ", expected " + want + (r.message.empty() ? "" : " (" + r.message + ")");
}

bool has_generator(const Report& r, std::initializer_list<double> v, double tol) {
  for (const auto& g : r.final_generators) {
    if (g.vector.size() != v.size()) continue;
    bool same = true;
    std::size_t i = 0;
    for (double d : v) same = same && std::abs(g.vector[i++] - d) <= tol;
    if (same) return true;
  }
  return false;
}

// Chains checks, stopping at the first failure.
std::string all(std::initializer_list<std::function<std::string()>> checks) {
  for (const auto& c : checks) {
    auto e = c();
    if (!e.empty()) return e;
  }
  return "";
}

std::string convex_ok(const Report& r) {
  if (r.convex_set.empty()) return "no convex-set check in the report";
  for (const auto& c : r.convex_set)
    if (!c.pass) return "convex-set check failed";
  return "";
}

std::string round_trip(const Report& r) {
  if (io::parse_report(io::emit(r)) != r) return r.command + " report does not survive emit/parse";
  return "";
}

std::string deterministic(const std::function<Report()>& run) {
  Report a = run(), b = run();
  a.timings_ms.clear();
  b.timings_ms.clear();
  return io::emit(a) == io::emit(b) ? "" : "two runs produced different reports";
}

const std::vector<std::pair<std::string, Expectation>>& expectations() {
  static const std::vector<std::pair<std::string, Expectation>> table = {
      {"countable",
       [](const model::Problem& p) {
         const auto c = certify(p);
         const auto t = tcset(p);
         const auto a = admissible(p);
         return all({[&] { return verdict_is(c, "KKT"); },
                     [&] { return near("lambda", c.lambda, 0.5, 1e-9); },
                     [&] { return near("beta", c.beta, 0.5, 1e-9); },
                     [&] { return near("witness x1", c.witness.at(0), 0.0, 1e-9); },
                     [&] { return near("witness x2", c.witness.at(1), 1.0, 1e-9); },
                     [&] { return exit_code(c) == 0 ? "" : "certify exit code is not 0"; },
                     [&] {
                       return t.final_generators.size() == 2 && has_generator(t, {1, 0}, 1e-9) &&
                                      has_generator(t, {0, 1}, 1e-9)
                                  ? ""
                                  : "final generators are not {(1,0), (0,1)}";
                     },
                     [&] { return verdict_is(a, "Admissible"); },
                     [&] { return round_trip(c) + round_trip(t) + round_trip(a); },
                     [&] { return deterministic([&] { return certify(p); }); }});
       }},
      {"countable_infeasible",
       [](const model::Problem& p) {
         const auto c = certify(p);
         return all({[&] { return verdict_is(c, "Infeasible"); },
                     [&] { return exit_code(c) == 3 ? "" : "exit code is not 3"; },
                     [&] { return c.violated.empty() || c.violated.front() != "c0" ? "c0 not reported violated" : ""; },
                     [&] { return round_trip(c); }});
       }},
      {"countable_interior",
       [](const model::Problem& p) {
         const auto t = tcset(p);
         const auto c = certify(p);
         return all({[&] { return t.interior && t.final_generators.empty() ? "" : "interior indicator missing"; },
                     [&] { return verdict_is(c, "NoCertificate"); },
                     [&] { return round_trip(t); }});
       }},
      {"countable_strict",
       [](const model::Problem& p) {
         const auto c = certify(p);
         return all({[&] { return verdict_is(c, "NoCertificate"); },
                     [&] { return exit_code(c) == 2 ? "" : "exit code is not 2"; },
                     [&] {
                       return c.final_generators.size() == 1 && has_generator(c, {1, 0}, 1e-12)
                                  ? ""
                                  : "strict hull is not {(1,0)}";
                     }});
       }},
      {"finite_orthant",
       [](const model::Problem& p) {
         const auto c = certify(p);
         return all({[&] { return verdict_is(c, "KKT"); }, [&] { return near("lambda", c.lambda, 1.0 / 3, 1e-9); },
                     [&] { return c.shortcut ? "" : "finite shortcut not taken"; }});
       }},
      {"linear_sip",
       [](const model::Problem& p) {
         const auto c = certify(p);
         const auto t = tcset(p);
         return all({[&] { return verdict_is(c, "KKT"); },
                     [&] { return c.sip ? "" : "no semi-infinite multipliers"; },
                     [&] { return near("lambda0", c.sip->lambda0, 1.0 / 3, 1e-6); },
                     [&] { return c.sip->weights.size() == 1 ? "" : "expected one active parameter"; },
                     [&] { return near("lambda1", c.sip->weights[0], 2.0 / 3, 1e-6); },
                     [&] { return near("t1", c.sip->params[0].at(0), 0.5, 1e-6); },
                     [&] { return c.sip->residual <= 1e-9 ? "" : "multiplier residual above 1e-9"; },
                     [&] {
                       return has_generator(t, {-1, 0}, 1e-9) && has_generator(t, {0, -1}, 1e-9)
                                  ? ""
                                  : "segment endpoints missing from the final generators";
                     },
                     [&] { return round_trip(c); }});
       }},
      {"trig_sip",
       [](const model::Problem& p) {
         const auto c = certify(p);
         return all({[&] { return verdict_is(c, "KKT"); },
                     [&] { return c.residual <= 1e-9 ? "" : "residual above 1e-9"; }});
       }},
      {"circle_equality",
       [](const model::Problem& p) {
         const auto c = certify(p);
         return all({[&] { return verdict_is(c, "KKT"); },
                     [&] { return c.branch == "OntoNoA" ? "" : "branch " + c.branch + ", expected OntoNoA"; },
                     [&] { return near("lambda0", c.lambda0.value_or(-1), 1.0, 1e-9); },
                     [&] { return near("w0", c.w0.at(0), -0.5, 1e-9); },
                     [&] { return c.residual <= 1e-9 ? "" : "residual above 1e-9"; },
                     [&] { return round_trip(c); }});
       }},
      {"duplicated_rows",
       [](const model::Problem& p) {
         const auto c = certify(p);
         return all({[&] { return c.branch == "NotOnto" ? "" : "branch " + c.branch + ", expected NotOnto"; },
                     [&] { return near("|w0|", std::hypot(c.w0.at(0), c.w0.at(1)), 1.0, 1e-9); },
                     [&] { return near("row-space component", c.w0.at(0) + c.w0.at(1), 0.0, 1e-9); }});
       }},
      {"equality_orthant",
       [](const model::Problem& p) {
         const auto c = certify(p);
         return all({[&] { return c.branch == "OntoWithA" ? "" : "branch " + c.branch + ", expected OntoWithA"; },
                     [&] { return verdict_is(c, "KKT"); }, [&] { return near("w0", c.w0.at(0), 0.0, 1e-9); },
                     [&] { return convex_ok(c); }});
       }},
      {"orthant_composed",
       [](const model::Problem& p) {
         const auto c = certify(p);
         return all({[&] { return c.verdict == "FJ" || c.verdict == "KKT" ? "" : "verdict " + c.verdict; },
                     [&] { return near("y*1", c.y_star.at(0), 0.0, 1e-9); },
                     [&] { return near("y*2", c.y_star.at(1), 1.0, 1e-9); }, [&] { return convex_ok(c); }});
       }},
      {"polyhedral_halfplane",
       [](const model::Problem& p) {
         const auto c = certify(p);
         return all({[&] { return verdict_is(c, "KKT"); }, [&] { return convex_ok(c); }});
       }},
      {"orthant_cone",
       [](const model::Problem& p) {
         const auto c = certify(p);
         const auto a = admissible(p);
         return all({[&] { return verdict_is(c, "KKT"); }, [&] { return convex_ok(c); },
                     [&] { return verdict_is(a, "Admissible"); },
                     [&] {
                       return a.admissible && a.admissible->cone_interior_nonempty.value_or(false)
                                  ? ""
                                  : "cone interior should be nonempty";
                     }});
       }},
      {"hyperplane_cone",
       [](const model::Problem& p) {
         const auto a = admissible(p);
         const auto c = certify(p);
         return all({[&] {
                       return a.admissible && a.admissible->cone_interior_nonempty == false
                                  ? ""
                                  : "cone interior should be empty";
                     },
                     [&] { return convex_ok(c); }});
       }},
  };
  return table;
}

}  // namespace

SelftestSummary selftest(const io::OptionOverrides& overrides, std::ostream* progress) {
  SelftestSummary out;
  auto record = [&](const std::string& name, const std::function<std::string()>& body) {
    const auto start = std::chrono::steady_clock::now();
    SuiteLine line;
    line.name = name;
    try {
      line.detail = body();
      line.pass = line.detail.empty();
    } catch (const std::exception& e) {
      line.detail = std::string("exception: ") + e.what();
    }
    line.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (progress) *progress << (line.pass ? "PASS " : "FAIL ") << name << (line.detail.empty() ? "" : ": " + line.detail) << "\n";
    out.lines.push_back(std::move(line));
  };
  auto outcome = [](const checks::Outcome& o) { return o.pass ? std::string() : o.detail; };

  for (const auto& [name, expect] : expectations()) {
    record("fixture " + name, [&, &expect = expect, &name = name] {
      auto prob = io::parse_problem(bundled_fixture(name).text);
      io::apply_overrides(prob.options, overrides);
      return expect(prob);
    });
  }

  record("input: malformed JSON is an input error", [] {
    const auto r = from_file("certify", "/nonexistent/problem.json", {}, certify);
    if (exit_code(r) != 4) return std::string("missing file did not give exit 4");
    try {
      io::parse_problem("{\"dimension\": 2,");
      return std::string("truncated JSON was accepted");
    } catch (const io::InputError&) {
    }
    try {
      io::parse_problem(R"({"dimension": 1, "objective": "x1", "colour": "red"})");
      return std::string("unknown key was accepted");
    } catch (const io::InputError&) {
    }
    return std::string();
  });

  record("scan: countable box finds the origin", [&] {
    auto prob = io::parse_problem(bundled_fixture("countable").text);
    io::apply_overrides(prob.options, overrides);
    const auto r = scan(prob, {{-1, 1, -1, 1}, 101, 1});
    if (r.candidates.size() != 1) return "scan returned " + std::to_string(r.candidates.size()) + " candidates";
    const auto& x = r.candidates.front().point;
    return all({[&] { return near("x1", x[0], 0.0, 1e-12); }, [&] { return near("x2", x[1], 0.0, 1e-12); }});
  });

  for (const auto& [name, expect] : expectations()) {
    (void)expect;
    auto prob = io::parse_problem(bundled_fixture(name).text);
    io::apply_overrides(prob.options, overrides);
    if (!prob.inequality || !prob.candidate || !prob.equality.empty()) continue;
    if (!model::feasibility(prob, *prob.candidate, prob.options).feasible) continue;
    record("ladder nesting on " + name,
           [&, prob] { return outcome(checks::ladder_nesting(prob, *prob.candidate, prob.options)); });
    if (prob.inner_map.empty())
      record("objective scaling on " + name,
             [&, prob] { return outcome(checks::objective_scaling(prob, *prob.candidate, prob.options)); });
  }

  const auto seed = model::sampling_seed();
  record("property: gradients vs central differences (50)", [&] { return outcome(checks::gradient_vs_differences(50, seed)); });
  record("property: hull membership vs grid oracle (25)", [&] { return outcome(checks::hull_vs_grid_oracle(25, seed + 1)); });
  record("property: ladder nesting on random families (10)", [&] { return outcome(checks::ladder_nesting_random(10, seed + 2)); });
  record("property: Caratheodory support and residual (25)", [&] { return outcome(checks::caratheodory_random(25, seed + 3)); });
  record("property: certificates vs grid oracle (10)", [&] { return outcome(checks::fj_vs_grid_oracle(10, seed + 4)); });
  record("property: cone interior vs sampled directions (10)",
         [&] { return outcome(checks::cone_interior_vs_sampling(10, 2000, seed + 5)); });
  record("property: composed gradients vs central differences (25)",
         [&] { return outcome(checks::compose_vs_differences(25, seed + 6)); });
  return out;
}

}  // namespace sipcert::commands
