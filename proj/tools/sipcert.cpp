#include "sipcert/commands.hpp"

#include "CLI11.hpp"

#include <iomanip>
#include <iostream>

using namespace sipcert;

namespace {

void add_overrides(CLI::App* cmd, io::OptionOverrides& o) {
  cmd->add_option("--tol", o.tol, "hull and activity tolerance");
  cmd->add_option("--eps0", o.eps0, "first ladder step");
  cmd->add_option("--shrink", o.shrink, "ladder ratio in (0,1)");
  cmd->add_option("--max-steps", o.max_steps, "ladder length");
  cmd->add_option("--refine", o.refine, "coordinate refinement depth");
  cmd->add_option("--k-max", o.k_max, "truncation of countable families");
}

int print(const io::CertificateReport& r, bool json) {
  std::cout << (json ? io::emit(r) : io::render_text(r));
  if (json) std::cout << "\n";
  return io::exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify first-order optimality at a candidate point"};
  app.require_subcommand(1);

  io::OptionOverrides overrides;
  std::string path;
  bool json = false;

  struct Simple {
    const char* name;
    const char* help;
    io::CertificateReport (*run)(const model::Problem&);
  };
  const Simple simple[] = {
      {"certify", "KKT or Fritz John certificate at the candidate", &commands::certify},
      {"tcset", "approximate the tangent-cone generators along the eps ladder", &commands::tcset},
      {"admissible", "admissibility and cone-interior diagnostics", &commands::admissible},
  };
  std::vector<std::pair<CLI::App*, const Simple*>> simple_cmds;
  for (const auto& s : simple) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    cmd->add_option("problem", path, "problem file (JSON)")->required();
    cmd->add_option("--grid", overrides.grid, "points per axis of the index-set grid");
    cmd->add_flag("--json", json, "print the JSON report");
    add_overrides(cmd, overrides);
    simple_cmds.emplace_back(cmd, &s);
  }

  commands::ScanSpec spec;
  auto* scan = app.add_subcommand("scan", "rank feasible grid points of a box by objective value");
  scan->add_option("problem", path, "problem file (JSON)")->required();
  scan->add_option("--box", spec.box, "lower1 upper1 lower2 upper2 ...")->required();
  scan->add_option("--grid", spec.grid, "points per axis")->check(CLI::Range(2, 100000));
  scan->add_option("--top", spec.top, "candidates to report")->check(CLI::PositiveNumber);
  scan->add_flag("--json", json, "print the JSON report");
  add_overrides(scan, overrides);

  auto* self = app.add_subcommand("selftest", "bundled fixtures and reduced property suites");
  add_overrides(self, overrides);
  self->add_option("--grid", overrides.grid, "points per axis of the index-set grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 4;
  }

  for (const auto& [cmd, s] : simple_cmds)
    if (cmd->parsed()) return print(commands::from_file(s->name, path, overrides, s->run), json);

  if (scan->parsed()) {
    auto r = commands::from_file("scan", path, overrides,
                                 [&](const model::Problem& prob) { return commands::scan(prob, spec); });
    return print(r, json);
  }

  const auto summary = commands::selftest(overrides, &std::cout);
  std::cout << summary.passed() << " passed, " << summary.failed() << " failed\n";
  return summary.failed() == 0 ? 0 : 1;
}
