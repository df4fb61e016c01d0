#pragma once

#include "sipcert/io.hpp"

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace sipcert::commands {

/// Reports never throw out of these entry points: failures become verdicts.
io::CertificateReport certify(const model::Problem& prob);
io::CertificateReport tcset(const model::Problem& prob);
io::CertificateReport admissible(const model::Problem& prob);

struct ScanSpec {
  std::vector<double> box;  // lower1, upper1, lower2, upper2, ...
  int grid = 101;
  int top = 5;
};
io::CertificateReport scan(const model::Problem& prob, const ScanSpec& spec);

/// Loads `path`, applies the overrides and runs `run`; load failures become
/// an InputError report.
io::CertificateReport from_file(const std::string& command, const std::string& path,
                                const io::OptionOverrides& overrides,
                                const std::function<io::CertificateReport(const model::Problem&)>& run);

struct Fixture {
  std::string name;  // file stem
  std::string text;  // JSON source
};
/// Problem files compiled into the binary from the fixtures directory.
const std::vector<Fixture>& bundled_fixtures();
const Fixture& bundled_fixture(const std::string& name);

struct SuiteLine {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SelftestSummary {
  std::vector<SuiteLine> lines;
  int passed() const;
  int failed() const;
};

/// Bundled fixtures against their expected outcomes, then every property
/// suite at reduced sample counts. `overrides` is applied to each fixture.
SelftestSummary selftest(const io::OptionOverrides& overrides, std::ostream* progress = nullptr);

}  // namespace sipcert::commands
