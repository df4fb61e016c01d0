#pragma once

#include "sipcert/model.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sipcert::io {

using Json = nlohmann::ordered_json;

/// Malformed JSON, schema violation or unparsable expression. `path` points
/// at the offending key ("constraints.finite[2]").
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Validates the document against the problem-file schema and builds the
/// problem. Unknown keys are rejected.
model::Problem problem_from_json(const Json& doc);
model::Problem parse_problem(std::string_view text);
model::Problem load_problem(const std::string& path);

/// Command-line values that take precedence over the file's "options".
struct OptionOverrides {
  std::optional<double> tol;
  std::optional<double> eps0;
  std::optional<double> shrink;
  std::optional<int> max_steps;
  std::optional<int> grid;
  std::optional<int> refine;
  std::optional<int> k_max;
};

void apply_overrides(model::Options& opts, const OptionOverrides& o);

/// Pretty JSON with every float written with 17 significant digits.
std::string dump(const Json& doc);

struct TaggedVector {
  std::string tag;
  std::vector<double> vector;
  std::vector<double> param;  // t, or (k) for countable members; empty otherwise
  bool limit = false;
  double weight = 0.0;
  bool operator==(const TaggedVector&) const = default;
};

struct LadderRow {
  double eps = 0.0;
  int generators = 0;
  double gap = 0.0;
  bool operator==(const LadderRow&) const = default;
};

struct SipBlock {
  double lambda0 = 0.0;
  std::vector<double> weights;
  std::vector<std::vector<double>> params;
  std::vector<std::string> tags;
  double residual = 0.0;
  bool lambda0_nonzero = false;
  bool operator==(const SipBlock&) const = default;
};

struct JacobianBlock {
  int rank = 0;
  double tol_rank = 0.0;
  std::vector<double> pivots;
  std::vector<std::vector<double>> kernel_basis;
  std::vector<double> left_null;
  bool operator==(const JacobianBlock&) const = default;
};

struct ConvexSetBlock {
  bool pass = false;
  bool dual_ok = false;
  double dual_margin = 0.0;
  bool min_ok = false;
  bool unbounded = false;
  std::optional<double> min_value;
  double value_at_point = 0.0;
  bool point_in_set = false;
  std::vector<double> ray;
  bool operator==(const ConvexSetBlock&) const = default;
};

struct DeterminationRow {
  std::string tag;
  std::vector<double> direction;
  std::optional<double> infimum;
  bool operator==(const DeterminationRow&) const = default;
};

struct AdmissibleBlock {
  std::vector<double> point;
  int member_count = 0;
  bool zero_in_full_hull = false;
  double full_hull_distance = 0.0;
  bool admissible_style = false;
  bool weak_admissible_only = false;
  int active_count = 0;
  bool zero_in_active_hull = false;
  double lipschitz = 0.0;
  std::vector<DeterminationRow> determination;
  bool determination_zero_free = false;
  std::optional<bool> cone_interior_nonempty;
  std::optional<double> cone_margin;
  std::vector<double> cone_witness;
  bool operator==(const AdmissibleBlock&) const = default;
};

struct ScanCandidate {
  std::vector<double> point;
  double objective = 0.0;
  double infimum = 0.0;
  bool operator==(const ScanCandidate&) const = default;
};

struct CertificateReport {
  std::string command;   // certify, tcset, admissible, scan
  std::string verdict;   // KKT, FJ, Unconstrained, NoCertificate, Infeasible, InputError, Diagnostics, Candidates
  std::string pipeline;  // inequality, composed, equality
  std::string message;
  std::vector<double> candidate;
  std::vector<double> objective_gradient;

  double lambda = 0.0;  // normalized pair, lambda + beta = 1
  double beta = 0.0;
  std::optional<double> kkt_beta;
  std::vector<double> witness;
  std::vector<double> y_star;
  std::vector<TaggedVector> coefficients;
  double residual = 0.0;
  double segment_distance = 0.0;
  bool zero_not_in_tc = false;
  bool approximate = false;

  std::string branch;
  std::optional<double> lambda0;
  std::vector<double> z0;
  std::vector<double> w0;
  std::optional<JacobianBlock> jacobian;

  std::optional<double> infimum;
  std::string argmin_tag;
  std::vector<std::string> violated;

  std::vector<LadderRow> ladder;
  std::vector<TaggedVector> final_generators;
  bool converged = false;
  bool interior = false;
  bool shortcut = false;

  std::optional<SipBlock> sip;
  std::vector<ConvexSetBlock> convex_set;
  std::optional<AdmissibleBlock> admissible;
  std::vector<ScanCandidate> candidates;

  std::vector<std::string> assumptions;
  std::map<std::string, double> timings_ms;

  bool operator==(const CertificateReport&) const = default;
};

/// 0 certificate or diagnostics produced, 2 no certificate, 3 infeasible
/// candidate, 4 input error.
int exit_code(const CertificateReport& r);

Json to_json(const CertificateReport& r);
CertificateReport report_from_json(const Json& doc);
std::string emit(const CertificateReport& r);
CertificateReport parse_report(std::string_view text);

/// Plain-text rendering for terminals.
std::string render_text(const CertificateReport& r);

}  // namespace sipcert::io
