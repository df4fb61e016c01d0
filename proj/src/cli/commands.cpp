#include "sipcert/commands.hpp"

#include "sipcert/multipliers.hpp"
#include "sipcert/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace sipcert::commands {

namespace {

using Clock = std::chrono::steady_clock;

// Adding +0 turns -0 into 0 so reports never print "-0".
std::vector<double> plain(const Vector& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  for (double& d : out) d += 0.0;
  return out;
}

// k = inf of a limit member has no JSON number; the limit flag carries it.
std::vector<double> param_of(const Vector& t) {
  return t.allFinite() ? plain(t) : std::vector<double>();
}

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

io::TaggedVector tagged(const multipliers::WeightedGenerator& w) {
  io::TaggedVector t;
  t.tag = w.tag;
  t.vector = plain(w.generator);
  t.param = param_of(w.param);
  t.limit = w.limit;
  t.weight = w.weight;
  return t;
}

void fill_tc(io::CertificateReport& r, const multipliers::TCApprox& tc) {
  r.ladder.clear();
  for (const auto& s : tc.ladder) r.ladder.push_back({s.eps, s.hull.size(), s.gap});
  r.final_generators.clear();
  for (std::size_t i = 0; i < tc.final_members.size(); ++i) {
    const auto& m = tc.final_members[i];
    io::TaggedVector t;
    t.tag = m.tag;
    t.vector = plain(m.grad);
    t.param = param_of(m.param);
    t.limit = m.limit;
    r.final_generators.push_back(std::move(t));
  }
  r.converged = tc.converged;
  r.interior = tc.interior;
  r.shortcut = tc.shortcut;
}

void fill_certificate(io::CertificateReport& r, const multipliers::Certificate& c) {
  r.verdict = multipliers::to_string(c.kind);
  r.lambda = c.lambda;
  r.beta = c.beta;
  if (c.lambda > 0) r.kkt_beta = c.beta / c.lambda;
  r.witness = plain(c.witness);
  r.coefficients.clear();
  for (const auto& w : c.coeffs) r.coefficients.push_back(tagged(w));
  r.residual = c.residual;
  r.segment_distance = c.segment_distance;
  r.zero_not_in_tc = c.zero_not_in_tc;
  r.approximate = c.approximate;
  fill_tc(r, c.tc);
}

bool certified(const std::string& verdict) { return verdict == "KKT" || verdict == "FJ" || verdict == "Unconstrained"; }

std::vector<std::string> assumptions(const model::Problem& prob, const Vector& x, bool with_lipschitz) {
  const auto& o = prob.options;
  std::vector<std::string> out;
  auto fam = prob.effective_family();
  if (fam) {
    out.push_back("lower semicontinuity of the inactive members is assumed, not tested");
    if (with_lipschitz) {
      const double radius = 1e-2 * (1 + x.norm());
      const double l = model::equi_lipschitz_estimate(*fam, x, radius, 16, o);
      char buf[160];
      std::snprintf(buf, sizeof buf, "members share a Lipschitz modulus near the candidate (sampled %.6g on radius %.3g)",
                    l, radius);
      out.push_back(buf);
    }
    if (fam->has_countable_members())
      out.push_back("countable members truncated at k <= " + std::to_string(o.k_max) +
                    "; the limit k -> inf enters the multiplier set");
    if (fam->kind == model::FamilyKind::Parametric) {
      const int grid = o.grid_override > 0 ? o.grid_override : fam->index.base_grid;
      out.push_back("index set sampled with " + std::to_string(grid) + " points per axis and " +
                    std::to_string(o.refine_depth) + " refinement levels");
    }
  }
  if (!prob.equality.empty())
    out.push_back("equality Jacobian checked at the candidate only; continuity and closed range nearby are assumed");
  return out;
}

template <class Body>
io::CertificateReport guarded(const std::string& command, const model::Problem& prob, Body&& body) {
  const auto start = Clock::now();
  io::CertificateReport r;
  r.command = command;
  // Partial results are dropped on failure; only the feasibility data stays.
  auto reset = [&](const std::string& verdict, const std::string& message) {
    io::CertificateReport clean;
    clean.command = command;
    clean.candidate = r.candidate;
    clean.infimum = r.infimum;
    clean.argmin_tag = r.argmin_tag;
    clean.violated = r.violated;
    clean.verdict = verdict;
    clean.message = message;
    r = std::move(clean);
  };
  try {
    prob.validate();
    body(r);
  } catch (const model::InfeasibleError& e) {
    reset("Infeasible", e.what());
    if (!e.tag().empty() && std::find(r.violated.begin(), r.violated.end(), e.tag()) == r.violated.end())
      r.violated.push_back(e.tag());
  } catch (const expr::KinkError& e) {
    reset("NoCertificate", std::string("not differentiable at the candidate: ") + e.what());
  } catch (const expr::EvalError& e) {
    reset("InputError", std::string("evaluation failed: ") + e.what());
  } catch (const geometry::LpNumericalError& e) {
    reset("NoCertificate", std::string("numerical failure: ") + e.what());
  } catch (const std::invalid_argument& e) {
    reset("InputError", e.what());
  }
  r.timings_ms["total"] = ms_since(start);
  return r;
}

const Vector& need_candidate(const model::Problem& prob) {
  if (!prob.candidate) throw std::invalid_argument("the problem file has no candidate");
  return *prob.candidate;
}

// Fills feasibility fields; returns false (with verdict Infeasible) when
// the candidate violates a constraint.
bool check_feasible(io::CertificateReport& r, const model::Problem& prob, const Vector& x) {
  const auto f = model::feasibility(prob, x, prob.options);
  if (f.has_family && std::isfinite(f.infimum)) r.infimum = f.infimum;
  r.argmin_tag = f.argmin_tag;
  r.violated = f.violated;
  if (f.feasible) return true;
  r.verdict = "Infeasible";
  r.message = "candidate violates " + f.violated.front();
  return false;
}

void convex_set_check(io::CertificateReport& r, const model::Problem& prob, const Vector& x) {
  if (!prob.inequality || prob.inequality->kind != model::FamilyKind::Polyhedral) return;
  if (!certified(r.verdict) || r.z0.empty()) return;
  const Vector z = Eigen::Map<const Vector>(r.z0.data(), static_cast<int>(r.z0.size()));
  const auto c = reduction::convex_set_multiplier(prob.inequality->polyhedron, prob.image(x), z, prob.options.tol,
                                                  prob.options.lp());
  io::ConvexSetBlock b;
  b.pass = c.pass;
  b.dual_ok = c.dual_ok;
  b.dual_margin = c.dual_margin;
  b.min_ok = c.min_ok;
  b.unbounded = c.unbounded;
  if (std::isfinite(c.min_value)) b.min_value = c.min_value;
  b.value_at_point = c.value_at_point;
  b.point_in_set = c.point_in_set;
  b.ray = plain(c.ray);
  r.convex_set.push_back(std::move(b));
}

void certify_inequality(io::CertificateReport& r, const model::Problem& prob, const Vector& x) {
  const auto& opts = prob.options;
  if (prob.inner_map.empty()) {
    r.pipeline = "inequality";
    auto c = multipliers::certify_fj(prob, x, opts);
    fill_certificate(r, c);
    r.lambda0 = c.lambda;
    r.z0 = plain(c.beta * c.witness);
    const auto& fam = *prob.inequality;
    const bool semi_infinite = fam.kind == model::FamilyKind::Parametric || fam.has_countable_members();
    if (semi_infinite && (c.kind == multipliers::Kind::FJ || c.kind == multipliers::Kind::KKT)) {
      const auto s = multipliers::sip_multipliers(std::move(c), opts);
      io::SipBlock b;
      b.lambda0 = s.lambda0;
      b.weights = s.weights;
      for (const auto& t : s.params) b.params.push_back(param_of(t));
      b.tags = s.tags;
      b.residual = s.residual;
      b.lambda0_nonzero = s.lambda0_nonzero;
      r.sip = std::move(b);
    }
    return;
  }
  r.pipeline = "composed";
  const auto cc = reduction::certify_composed(prob, x, opts);
  fill_certificate(r, cc.certificate);
  r.y_star = plain(cc.y_star);
  r.lambda0 = cc.certificate.lambda;
  r.z0 = plain(cc.certificate.beta * cc.y_star);
}

void certify_with_equality(io::CertificateReport& r, const model::Problem& prob, const Vector& x) {
  r.pipeline = "equality";
  const auto fc = reduction::certify_equality(prob, x, prob.options);
  r.verdict = multipliers::to_string(fc.kind);
  r.branch = reduction::to_string(fc.branch);
  r.message = fc.note;
  r.lambda = fc.lambda;
  r.beta = fc.beta;
  if (fc.lambda > 0 && fc.branch == reduction::Branch::OntoWithA) r.kkt_beta = fc.beta / fc.lambda;
  r.lambda0 = fc.lambda0;
  r.z0 = plain(fc.z0);
  r.w0 = plain(fc.w0);
  r.y_star = plain(fc.y_star);
  Vector witness = Vector::Zero(prob.p);
  r.coefficients.clear();
  for (const auto& w : fc.coeffs) {
    witness += w.weight * w.generator;
    r.coefficients.push_back(tagged(w));
  }
  r.witness = plain(witness);
  r.residual = fc.residual;
  r.approximate = fc.approximate;
  r.zero_not_in_tc = fc.kernel_certificate.zero_not_in_tc;
  r.segment_distance = fc.kernel_certificate.segment_distance;
  io::JacobianBlock j;
  j.rank = fc.jac_h.rank;
  j.tol_rank = fc.jac_h.tol_rank;
  j.pivots = fc.jac_h.pivots;
  for (const auto& v : fc.jac_h.kernel_basis) j.kernel_basis.push_back(plain(v));
  if (fc.jac_h.left_null) j.left_null = plain(*fc.jac_h.left_null);
  r.jacobian = std::move(j);
  if (fc.branch == reduction::Branch::OntoWithA) fill_tc(r, fc.kernel_certificate.tc);
}

}  // namespace

io::CertificateReport certify(const model::Problem& prob) {
  return guarded("certify", prob, [&](io::CertificateReport& r) {
    const Vector& x = need_candidate(prob);
    r.candidate = plain(x);
    if (!check_feasible(r, prob, x)) return;
    r.objective_gradient = plain(prob.objective.grad(x, Vector(), prob.options.tol_kink));
    if (!prob.equality.empty()) {
      certify_with_equality(r, prob, x);
    } else if (prob.inequality) {
      certify_inequality(r, prob, x);
    } else {
      r.pipeline = "inequality";
      fill_certificate(r, multipliers::certify_fj(prob, x, prob.options));
    }
    convex_set_check(r, prob, x);
    r.assumptions = assumptions(prob, x, true);
    if (r.approximate) r.assumptions.push_back("the eps ladder did not stabilize; the certificate is approximate");
  });
}

io::CertificateReport tcset(const model::Problem& prob) {
  return guarded("tcset", prob, [&](io::CertificateReport& r) {
    const Vector& x = need_candidate(prob);
    r.candidate = plain(x);
    if (!prob.inequality) throw std::invalid_argument("tcset needs inequality constraints");
    if (!check_feasible(r, prob, x)) return;
    fill_tc(r, multipliers::tc_approx(prob, x, prob.options));
    r.verdict = "Diagnostics";
    r.assumptions = assumptions(prob, x, false);
  });
}

io::CertificateReport admissible(const model::Problem& prob) {
  return guarded("admissible", prob, [&](io::CertificateReport& r) {
    const Vector& x = need_candidate(prob);
    r.candidate = plain(x);
    if (!prob.inequality) throw std::invalid_argument("admissible needs inequality constraints");
    if (!check_feasible(r, prob, x)) return;
    const auto d = model::admissible_diagnostics(prob, x, prob.options.eps0, prob.options);
    io::AdmissibleBlock b;
    b.point = plain(d.point);
    b.member_count = d.member_count;
    b.zero_in_full_hull = d.zero_in_full_hull;
    b.full_hull_distance = d.full_hull_distance;
    b.admissible_style = d.admissible_style;
    b.weak_admissible_only = d.weak_admissible_only;
    b.active_count = d.active_count;
    b.zero_in_active_hull = d.zero_in_active_hull;
    b.lipschitz = d.lipschitz;
    for (const auto& n : d.determination) {
      io::DeterminationRow row;
      row.tag = n.tag;
      row.direction = plain(n.direction);
      if (std::isfinite(n.infimum)) row.infimum = n.infimum;
      b.determination.push_back(std::move(row));
    }
    b.determination_zero_free = d.determination_zero_free;
    if (d.cone_interior) {
      b.cone_interior_nonempty = d.cone_interior->nonempty;
      b.cone_margin = d.cone_interior->margin;
      b.cone_witness = plain(d.cone_interior->witness);
    }
    r.admissible = std::move(b);
    r.verdict = d.admissible_style ? "Admissible" : "WeakAdmissible";
    r.assumptions = d.assumptions;
  });
}

io::CertificateReport scan(const model::Problem& prob, const ScanSpec& spec) {
  return guarded("scan", prob, [&](io::CertificateReport& r) {
    const int p = prob.p;
    if (static_cast<int>(spec.box.size()) != 2 * p)
      throw std::invalid_argument("--box needs " + std::to_string(2 * p) + " numbers (lower and upper per axis)");
    if (spec.grid < 2) throw std::invalid_argument("--grid must be at least 2");
    if (spec.top < 1) throw std::invalid_argument("--top must be at least 1");
    Vector lower(p), upper(p);
    for (int i = 0; i < p; ++i) {
      lower(i) = spec.box[2 * i];
      upper(i) = spec.box[2 * i + 1];
    }
    const auto points = model::IndexSet::box(lower, upper, spec.grid).grid();
    std::vector<io::ScanCandidate> feasible;
    for (const auto& x : points) {
      try {
        const auto f = model::feasibility(prob, x, prob.options);
        if (!f.feasible) continue;
        io::ScanCandidate c;
        c.point = plain(x);
        c.objective = prob.objective.eval(x) + 0.0;
        c.infimum = std::isfinite(f.infimum) ? f.infimum : 0.0;
        feasible.push_back(std::move(c));
      } catch (const expr::EvalError&) {
        continue;
      }
    }
    if (feasible.empty()) {
      r.verdict = "Infeasible";
      r.message = "no feasible grid point in the box";
      return;
    }
    std::stable_sort(feasible.begin(), feasible.end(),
                     [](const io::ScanCandidate& a, const io::ScanCandidate& b) { return a.objective > b.objective; });
    if (static_cast<int>(feasible.size()) > spec.top) feasible.resize(static_cast<std::size_t>(spec.top));
    r.candidates = std::move(feasible);
    r.verdict = "Candidates";
    r.message = "grid search only; candidates still need certify";
  });
}

io::CertificateReport from_file(const std::string& command, const std::string& path,
                                const io::OptionOverrides& overrides,
                                const std::function<io::CertificateReport(const model::Problem&)>& run) {
  model::Problem prob;
  try {
    prob = io::load_problem(path);
    io::apply_overrides(prob.options, overrides);
    prob.options.validate();
  } catch (const std::exception& e) {
    io::CertificateReport r;
    r.command = command;
    r.verdict = "InputError";
    r.message = e.what();
    return r;
  }
  return run(prob);
}

const Fixture& bundled_fixture(const std::string& name) {
  for (const auto& f : bundled_fixtures())
    if (f.name == name) return f;
  throw std::invalid_argument("no bundled fixture named " + name);
}

int SelftestSummary::passed() const {
  return static_cast<int>(std::count_if(lines.begin(), lines.end(), [](const SuiteLine& l) { return l.pass; }));
}

int SelftestSummary::failed() const { return static_cast<int>(lines.size()) - passed(); }

}  // namespace sipcert::commands
