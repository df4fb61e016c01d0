#include "sipcert/multipliers.hpp"

#include <cmath>
#include <set>

namespace sipcert::multipliers {

namespace {

LadderStep make_step(const model::ActiveSet& as, bool with_limits) {
  LadderStep s;
  s.eps = as.eps;
  for (const auto& e : as.entries) s.members.push_back(e);
  if (with_limits)
    for (const auto& e : as.limits) s.members.push_back(e);
  for (const auto& m : s.members) s.hull.add(m.grad, m.tag);
  return s;
}

// Largest distance from a generator of `prev` to conv(next). Generators whose
// tag survives are inside trivially.
double ladder_gap(const LadderStep& prev, const LadderStep& next, const model::Options& opts) {
  std::set<std::string> kept(next.hull.tags.begin(), next.hull.tags.end());
  double gap = 0.0;
  for (int i = 0; i < prev.hull.size(); ++i) {
    if (kept.count(prev.hull.tags[i])) continue;
    const auto m = geometry::hull_member(prev.hull.generators[i], next.hull, opts.tol, opts.lp());
    gap = std::max(gap, m.distance);
  }
  return gap;
}

}  // namespace

TCApprox tc_approx(model::PointEvaluation& pe, const model::Options& opts) {
  TCApprox out;
  out.infimum = pe.infimum();
  if (out.infimum < -opts.tol_feas)
    throw model::InfeasibleError("candidate is infeasible: constraint " + pe.argmin_tag() + " is violated",
                                 pe.argmin_tag());
  if (out.infimum > opts.tol_feas) {
    out.interior = true;
    out.converged = true;
    return out;
  }

  if (opts.strict_active_only) {
    LadderStep s = make_step(pe.active_set(opts.tol_feas), false);
    out.final = s.hull;
    out.final_members = s.members;
    out.ladder.push_back(std::move(s));
    out.converged = true;
    return out;
  }

  const bool finite = pe.family().kind != model::FamilyKind::Parametric;
  int calm = 0;
  double eps = opts.eps0;
  for (int k = 0; k <= opts.max_steps; ++k, eps *= opts.shrink) {
    LadderStep s = make_step(pe.active_set(eps), true);
    if (s.hull.empty()) break;
    if (!out.ladder.empty()) {
      s.gap = ladder_gap(out.ladder.back(), s, opts);
      out.hausdorff_gaps.push_back(s.gap);
    }
    out.ladder.push_back(std::move(s));
    const LadderStep& cur = out.ladder.back();

    bool all_zero = true;
    for (const auto& m : cur.members) all_zero = all_zero && m.value <= opts.tol_feas;
    if (finite && all_zero) {
      out.shortcut = true;
      out.converged = true;
      break;
    }
    if (out.ladder.size() > 1) {
      calm = cur.gap <= opts.tol_hull ? calm + 1 : 0;
      if (calm >= 2) {
        out.converged = true;
        break;
      }
    }
  }
  if (!out.ladder.empty()) {
    out.final = out.ladder.back().hull;
    out.final_members = out.ladder.back().members;
  }
  return out;
}

TCApprox tc_approx(const model::Problem& prob, const Vector& x, const model::Options& opts) {
  auto fam = prob.effective_family();
  if (!fam) throw std::invalid_argument("problem has no inequality constraints");
  model::PointEvaluation pe(*fam, x, opts);
  return tc_approx(pe, opts);
}

}  // namespace sipcert::multipliers
