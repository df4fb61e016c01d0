#include "sipcert/model.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>

namespace sipcert::model {

std::uint64_t sampling_seed() {
  if (const char* env = std::getenv("SIPCERT_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return 20240917ULL;
}

namespace {

using Member = std::function<double(const Vector&)>;
using MemberGrad = std::function<Vector(const Vector&)>;

struct MemberSet {
  std::vector<Member> value;
  std::vector<MemberGrad> grad;
};

// Concrete members used for sampling. Large grids are thinned to at most
// 257 parameters per family.
MemberSet members_of(const ConstraintFamily& fam, const Options& opts) {
  MemberSet out;
  auto add = [&](const expr::ExprFn& f, Vector t) {
    out.value.push_back([f, t](const Vector& x) { return f.eval(x, t); });
    out.grad.push_back([f, t, tol = opts.tol_kink](const Vector& x) { return f.grad(x, t, tol); });
  };
  if (fam.kind == FamilyKind::Parametric) {
    const auto grid = fam.index.grid(opts.grid_override);
    const std::size_t stride = grid.size() > 257 ? (grid.size() + 256) / 257 : 1;
    for (std::size_t i = 0; i < grid.size(); i += stride) add(fam.h, grid[i]);
    if ((grid.size() - 1) % stride != 0) add(fam.h, grid.back());
    return out;
  }
  for (const auto& m : fam.expressions()) {
    if (!m.uses_sequence_index()) {
      add(m, Vector());
      continue;
    }
    for (int k = 1; k <= opts.k_max; ++k) {
      Vector t(1);
      t(0) = k;
      add(m, t);
    }
  }
  return out;
}

}  // namespace

double equi_lipschitz_estimate(const ConstraintFamily& family, const Vector& point, double radius, int samples,
                               const Options& opts, std::uint64_t seed) {
  if (!(radius > 0)) throw std::invalid_argument("radius must be positive");
  if (samples < 0) throw std::invalid_argument("sample count must be nonnegative");
  if (point.size() != family.dim) throw std::invalid_argument("point has wrong dimension for the family");
  const MemberSet ms = members_of(family, opts);
  const int p = family.dim;
  double best = 0.0;
  auto probe = [&](const Vector& u, const Vector& v) {
    const double d = (u - v).norm();
    if (d == 0) return;
    for (const auto& f : ms.value) best = std::max(best, std::abs(f(u) - f(v)) / d);
  };

  // Pairs along each member's own gradient come first; for linear members
  // they already give the exact modulus.
  for (std::size_t i = 0; i < ms.grad.size(); ++i) {
    Vector g;
    try {
      g = ms.grad[i](point);
    } catch (const expr::KinkError&) {
      continue;
    }
    const double n = g.norm();
    if (n == 0) continue;
    const Vector step = (radius / 2) * g / n;
    const Vector u = point + step;
    const Vector v = point - step;
    const double d = (u - v).norm();
    best = std::max(best, std::abs(ms.value[i](u) - ms.value[i](v)) / d);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  auto draw = [&] {
    Vector dir(p);
    for (int j = 0; j < p; ++j) dir(j) = normal(rng);
    const double n = dir.norm();
    if (n == 0) return Vector(point);
    return Vector(point + radius * std::pow(unit(rng), 1.0 / p) * dir / n);
  };
  for (int s = 0; s < samples; ++s) {
    const Vector u = draw();
    const Vector v = draw();
    probe(u, v);
  }
  return best;
}

double equi_lipschitz_estimate(const Problem& prob, const Vector& x, double radius, int samples,
                               const Options& opts, std::uint64_t seed) {
  auto fam = prob.effective_family();
  if (!fam) throw std::invalid_argument("problem has no inequality constraints");
  return equi_lipschitz_estimate(*fam, x, radius, samples, opts, seed);
}

AdmissibleReport admissible_diagnostics(const Problem& prob, const Vector& x, double eps, const Options& opts) {
  if (!prob.inequality) throw std::invalid_argument("problem has no inequality constraints");
  const ConstraintFamily& fam = *prob.inequality;
  AdmissibleReport r;
  r.point = prob.image(x);
  PointEvaluation pe(fam, r.point, opts);

  const auto all = pe.all_members();
  geometry::Hull full;
  for (const auto& s : all) full.add(s.grad, s.tag);
  r.member_count = full.size();
  const auto m = geometry::hull_member(Vector::Zero(fam.dim), full, opts.tol, opts.lp());
  r.zero_in_full_hull = m.member;
  r.full_hull_distance = m.distance;
  r.admissible_style = !m.member;
  r.weak_admissible_only = m.member;

  const ActiveSet act = pe.active_set(eps);
  const geometry::Hull ah = act.hull();
  r.active_count = ah.size();
  r.zero_in_active_hull = !ah.empty() && geometry::hull_member(Vector::Zero(fam.dim), ah, opts.tol, opts.lp()).member;

  r.lipschitz = equi_lipschitz_estimate(fam, r.point, 1e-2 * (1 + r.point.norm()), 64, opts);

  if (fam.kind == FamilyKind::Polyhedral) {
    geometry::Hull dirs;
    for (int j = 0; j < fam.polyhedron.rows(); ++j) {
      NormalizedFunctional nf;
      nf.tag = "a" + std::to_string(j);
      nf.direction = fam.polyhedron.normals[j] / fam.polyhedron.normals[j].norm();
      const auto lo = geometry::minimize_over(fam.polyhedron, nf.direction, opts.lp());
      if (lo.status == geometry::LpStatus::Infeasible) throw std::invalid_argument("polyhedron is empty");
      nf.infimum = lo.value;
      dirs.add(nf.direction, nf.tag);
      r.determination.push_back(std::move(nf));
    }
    if (!dirs.empty())
      r.determination_zero_free = !geometry::hull_member(Vector::Zero(fam.dim), dirs, opts.tol, opts.lp()).member;
    if (fam.polyhedron.is_cone()) r.cone_interior = geometry::cone_interior_nonempty(fam.polyhedron, opts.tol, opts.lp());
  }

  r.assumptions.push_back("lower semicontinuity of the inactive members is assumed, not tested");
  r.assumptions.push_back("differentiability is checked at the point only, not uniformly on a neighbourhood");
  r.assumptions.push_back("Lipschitz modulus is a sampled lower bound");
  if (fam.has_countable_members())
    r.assumptions.push_back("countable members truncated at k <= " + std::to_string(opts.k_max));
  if (fam.kind == FamilyKind::Parametric) r.assumptions.push_back("index set sampled on a grid with local refinement");
  return r;
}

}  // namespace sipcert::model
