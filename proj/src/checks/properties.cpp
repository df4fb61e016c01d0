#include "sipcert/checks.hpp"

#include "sipcert/multipliers.hpp"
#include "sipcert/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>

namespace sipcert::checks {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Vector random_vector(Rng& rng, int n, double lo, double hi) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(rng, lo, hi);
  return v;
}

void fail(Outcome& o, const std::string& what) {
  ++o.failures;
  o.pass = false;
  if (o.detail.empty()) o.detail = what;
}

void finish(Outcome& o, const std::string& summary) {
  if (o.pass) o.detail = summary;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Random smooth expression in x1..x3 whose values stay moderate on [-1,1]^3.
std::string random_expr(Rng& rng, int depth) {
  if (depth == 0 || pick(rng, 0, 4) == 0) {
    if (pick(rng, 0, 3) == 0) return num(uniform(rng, -2, 2));
    return "x" + std::to_string(pick(rng, 1, 3));
  }
  const std::string a = random_expr(rng, depth - 1);
  switch (pick(rng, 0, 10)) {
    case 0: return "(" + a + " + " + random_expr(rng, depth - 1) + ")";
    case 1: return "(" + a + " - " + random_expr(rng, depth - 1) + ")";
    case 2: return "(" + a + " * " + random_expr(rng, depth - 1) + ")";
    case 3: return "(" + a + " / (2.5 + cos(" + random_expr(rng, depth - 1) + ")))";
    case 4: return "sin(" + a + ")";
    case 5: return "cos(" + a + ")";
    case 6: return "exp(sin(" + a + "))";
    case 7: return "log(2 + sin(" + a + "))";
    case 8: return "sqrt(1 + (" + a + ")^2)";
    case 9: return "(" + a + ")^2";
    default: return "pow(1.5 + sin(" + a + "), " + num(uniform(rng, -1.5, 2.5)) + ")";
  }
}

// All weight vectors on the simplex with denominator `steps`.
void simplex_grid(int n, int steps, const std::function<void(const Vector&)>& visit) {
  std::vector<int> counts(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      counts[i] = left;
      Vector a(n);
      for (int k = 0; k < n; ++k) a(k) = static_cast<double>(counts[k]) / steps;
      visit(a);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, steps);
}

Vector combine(const std::vector<Vector>& gens, const Vector& a) {
  Vector out = Vector::Zero(gens.front().size());
  for (int i = 0; i < a.size(); ++i) out += a(i) * gens[i];
  return out;
}

}  // namespace

Outcome gradient_vs_differences(int instances, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  double worst = 0.0;
  while (o.instances < instances) {
    const std::string src = random_expr(rng, 3);
    const auto f = expr::parse(src, 3, 0);
    const Vector x = random_vector(rng, 3, -1, 1);
    Vector g;
    try {
      g = f.grad(x);
    } catch (const expr::EvalError&) {
      continue;
    }
    ++o.instances;
    for (int i = 0; i < 3; ++i) {
      const double h = 1e-5;
      Vector xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      const double fd = (f.eval(xp) - f.eval(xm)) / (2 * h);
      const double rel = std::abs(fd - g(i)) / std::max(1.0, std::abs(g(i)));
      worst = std::max(worst, rel);
      if (rel > 1e-6) fail(o, src + ": partial " + std::to_string(i + 1) + " off by " + num(rel));
    }
  }
  finish(o, "worst relative error " + num(worst));
  return o;
}

Outcome hull_vs_grid_oracle(int instances, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  const double tol = 1e-6;
  int members = 0;
  while (o.instances < instances) {
    const int p = pick(rng, 2, 3);
    const int n = pick(rng, 2, 4);
    const int steps = n == 4 ? 24 : 40;
    std::vector<Vector> gens;
    for (int i = 0; i < n; ++i) gens.push_back(random_vector(rng, p, -1, 1));
    Vector target;
    if (pick(rng, 0, 1) == 0) {
      // Exactly representable on the oracle grid.
      std::vector<int> c(n, 0);
      for (int s = 0; s < steps; ++s) ++c[pick(rng, 0, n - 1)];
      Vector a(n);
      for (int i = 0; i < n; ++i) a(i) = static_cast<double>(c[i]) / steps;
      target = combine(gens, a);
    } else {
      target = random_vector(rng, p, -1.5, 1.5);
    }
    double best = std::numeric_limits<double>::infinity();
    simplex_grid(n, steps, [&](const Vector& a) {
      best = std::min(best, (combine(gens, a) - target).lpNorm<Eigen::Infinity>());
    });
    double diam = 0.0;
    for (const auto& a : gens)
      for (const auto& b : gens) diam = std::max(diam, (a - b).lpNorm<Eigen::Infinity>());
    // Any hull point is within diam/steps of a grid point.
    const bool oracle_member = best <= tol;
    if (!oracle_member && best <= diam / steps + tol) continue;
    ++o.instances;
    members += oracle_member;
    const auto m = geometry::hull_member(target, geometry::Hull(gens), tol);
    if (m.member != oracle_member)
      fail(o, "instance " + std::to_string(o.instances) + ": LP says " + (m.member ? "member" : "outside") +
                  ", grid distance " + num(best));
  }
  finish(o, std::to_string(members) + " members, " + std::to_string(o.instances - members) + " outside");
  return o;
}

Outcome ladder_nesting(const model::Problem& prob, const Vector& x, const model::Options& opts) {
  Outcome o;
  o.instances = 1;
  auto fam = prob.effective_family();
  if (!fam) {
    o.detail = "no inequality family";
    return o;
  }
  model::PointEvaluation pe(*fam, x, opts);
  if (pe.infimum() < -opts.tol_feas) {
    o.detail = "infeasible candidate";
    return o;
  }
  const auto tc = multipliers::tc_approx(pe, opts);
  for (std::size_t k = 1; k < tc.ladder.size(); ++k) {
    const auto& outer = tc.ladder[k - 1];
    const auto& inner = tc.ladder[k];
    if (!(inner.eps < outer.eps)) fail(o, "eps not decreasing at step " + std::to_string(k));
    std::set<std::string> tags(outer.hull.tags.begin(), outer.hull.tags.end());
    for (const auto& t : inner.hull.tags)
      if (!tags.count(t)) fail(o, "tag " + t + " appears at step " + std::to_string(k));
    for (int i = 0; i < inner.hull.size(); ++i)
      if (!geometry::hull_member(inner.hull.generators[i], outer.hull, opts.tol, opts.lp()).member)
        fail(o, "generator " + inner.hull.tags[i] + " leaves the previous hull at step " + std::to_string(k));
  }
  finish(o, std::to_string(tc.ladder.size()) + " steps");
  return o;
}

Outcome ladder_nesting_random(int instances, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  for (int n = 0; n < instances; ++n) {
    // Members a^T x + c with c spread over [0, 0.02] so the ladder changes.
    const int p = pick(rng, 2, 3);
    const int m = pick(rng, 2, 6);
    model::Problem prob;
    prob.p = p;
    std::string f;
    for (int i = 0; i < p; ++i) f += (i ? " + " : "") + num(uniform(rng, -1, 1)) + "*x" + std::to_string(i + 1);
    prob.objective = expr::parse(f, p, 0);
    std::vector<expr::ExprFn> members;
    for (int j = 0; j < m; ++j) {
      std::string s;
      for (int i = 0; i < p; ++i) s += (i ? " + " : "") + num(uniform(rng, -1, 1)) + "*x" + std::to_string(i + 1);
      const double c = pick(rng, 0, 2) == 0 ? 0.0 : uniform(rng, 0, 0.02);
      s += " + " + num(c);
      if (pick(rng, 0, 3) == 0) s += " + 0.01/k";
      members.push_back(expr::parse(s, p, 0, {.allow_sequence_index = true}));
    }
    prob.inequality = model::ConstraintFamily::finite(p, members);
    model::Options opts;
    opts.eps0 = 0.05;
    const auto one = ladder_nesting(prob, Vector::Zero(p), opts);
    ++o.instances;
    if (!one.pass) fail(o, "instance " + std::to_string(n) + ": " + one.detail);
  }
  finish(o, std::to_string(o.instances) + " random families");
  return o;
}

Outcome caratheodory_random(int instances, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  double worst = 0.0;
  for (int n = 0; n < instances; ++n) {
    const int p = pick(rng, 1, 5);
    const int count = pick(rng, p + 1, 3 * p + 3);
    geometry::Hull h;
    for (int i = 0; i < count; ++i) h.add(random_vector(rng, p, -1, 1), "g" + std::to_string(i));
    Vector a = random_vector(rng, count, 0, 1);
    a /= a.sum();
    const Vector target = combine(h.generators, a);
    const auto r = geometry::caratheodory_reduce(target, h, a);
    ++o.instances;
    worst = std::max(worst, r.residual);
    if (static_cast<int>(r.indices.size()) > p + 1)
      fail(o, "support " + std::to_string(r.indices.size()) + " exceeds p+1 = " + std::to_string(p + 1));
    if (r.residual > 1e-9) fail(o, "residual " + num(r.residual));
    if (r.coeffs.size() && (r.coeffs.minCoeff() < 0 || std::abs(r.coeffs.sum() - 1) > 1e-12))
      fail(o, "coefficients are not convex weights");
  }
  finish(o, "worst residual " + num(worst));
  return o;
}

Outcome objective_scaling(const model::Problem& prob, const Vector& x, const model::Options& opts) {
  Outcome o;
  const auto ref = multipliers::certify_fj(prob, x, opts);
  for (double c : {1e-3, 1.0, 1e3}) {
    model::Problem scaled = prob;
    scaled.objective = expr::scaled(prob.objective, c);
    const auto out = multipliers::certify_fj(scaled, x, opts);
    ++o.instances;
    if (out.kind != ref.kind) {
      fail(o, "c = " + num(c) + ": verdict " + multipliers::to_string(out.kind) + " vs " +
                  multipliers::to_string(ref.kind));
      continue;
    }
    if (out.witness.size() != ref.witness.size() || (out.witness - ref.witness).lpNorm<Eigen::Infinity>() > opts.tol)
      fail(o, "c = " + num(c) + ": witness moved");
  }
  finish(o, multipliers::to_string(ref.kind) + " for every scale");
  return o;
}

Outcome fj_vs_grid_oracle(int instances, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  int yes = 0;
  int attempts = 0;
  while (o.instances < instances && attempts < 100 * instances) {
    ++attempts;
    // Active members a_i^T x >= 0 at x = 0 plus inactive ones with offsets.
    const int active = pick(rng, 1, 3);
    const int inactive = pick(rng, 0, 5 - active);
    std::vector<Vector> grads;
    for (int i = 0; i < active; ++i) grads.push_back(random_vector(rng, 2, -1, 1));
    const int lambda_steps = 20;
    const int alpha_steps = active == 1 ? 1 : (active == 2 ? 400 : 30);
    Vector g;
    if (pick(rng, 0, 1) == 0) {
      // Grid-representable certificate.
      const double lam = pick(rng, 1, lambda_steps - 1) / static_cast<double>(lambda_steps);
      std::vector<int> c(active, 0);
      for (int s = 0; s < alpha_steps; ++s) ++c[pick(rng, 0, active - 1)];
      Vector a(active);
      for (int i = 0; i < active; ++i) a(i) = static_cast<double>(c[i]) / alpha_steps;
      g = -(1 - lam) / lam * combine(grads, a);
    } else {
      g = random_vector(rng, 2, -1, 1);
    }
    if (g.lpNorm<Eigen::Infinity>() < 1e-3 || g.lpNorm<Eigen::Infinity>() > 5) continue;

    double best = std::numeric_limits<double>::infinity();
    for (int l = 0; l <= lambda_steps; ++l) {
      const double lam = static_cast<double>(l) / lambda_steps;
      simplex_grid(active, alpha_steps, [&](const Vector& a) {
        best = std::min(best, (lam * g + (1 - lam) * combine(grads, a)).lpNorm<Eigen::Infinity>());
      });
    }
    double span = g.lpNorm<Eigen::Infinity>();
    for (const auto& a : grads) span = std::max(span, a.lpNorm<Eigen::Infinity>());
    const double resolution = 2 * span / lambda_steps + 2 * span / alpha_steps;
    const bool oracle_yes = best <= 1e-6;
    if (!oracle_yes && best <= resolution) continue;

    model::Problem prob;
    prob.p = 2;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g*x1 + %.17g*x2", g(0), g(1));
    prob.objective = expr::parse(buf, 2, 0);
    std::vector<expr::ExprFn> members;
    for (const auto& a : grads) {
      std::snprintf(buf, sizeof buf, "%.17g*x1 + %.17g*x2", a(0), a(1));
      members.push_back(expr::parse(buf, 2, 0));
    }
    for (int i = 0; i < inactive; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g*x1 + %.17g*x2 + %.17g", uniform(rng, -1, 1), uniform(rng, -1, 1),
                    uniform(rng, 0.5, 1));
      members.push_back(expr::parse(buf, 2, 0));
    }
    prob.inequality = model::ConstraintFamily::finite(2, members);
    model::Options opts;
    opts.tol = 1e-6;
    const auto c = multipliers::certify_fj(prob, Vector::Zero(2), opts);
    ++o.instances;
    yes += oracle_yes;
    if (multipliers::is_certified(c) != oracle_yes)
      fail(o, "instance " + std::to_string(o.instances) + ": verdict " + multipliers::to_string(c.kind) +
                  ", grid residual " + num(best));
  }
  if (o.instances < instances) fail(o, "only " + std::to_string(o.instances) + " decisive instances drawn");
  finish(o, std::to_string(yes) + " certified, " + std::to_string(o.instances - yes) + " without certificate");
  return o;
}

Outcome cone_interior_vs_sampling(int cones, int directions, std::uint64_t seed, double tol) {
  Rng rng(seed);
  std::normal_distribution<double> n01;
  Outcome o;
  int nonempty = 0;
  int tolerated = 0;
  for (int c = 0; c < cones; ++c) {
    std::vector<Vector> normals;
    const int m = pick(rng, 1, 5);
    for (int j = 0; j < m; ++j) normals.push_back(random_vector(rng, 3, -1, 1));
    switch (c % 4) {
      case 1:  // contains a line's worth of opposite constraints
        normals.push_back(-normals.front());
        break;
      case 2: {  // positively spanning: the cone is {0}
        Vector s = Vector::Zero(3);
        for (const auto& a : normals) s += a;
        normals.push_back(-s - random_vector(rng, 3, 0, 0.1));
        break;
      }
      default:
        break;
    }
    geometry::Polyhedron cone(3, normals, std::vector<double>(normals.size(), 0.0));
    const auto lp = geometry::cone_interior_nonempty(cone, tol);

    double best = -std::numeric_limits<double>::infinity();
    for (int d = 0; d < directions; ++d) {
      Vector v(3);
      for (int i = 0; i < 3; ++i) v(i) = n01(rng);
      v /= v.norm();
      double margin = std::numeric_limits<double>::infinity();
      for (const auto& a : normals) margin = std::min(margin, a.dot(v) / a.norm());
      best = std::max(best, margin);
    }
    ++o.instances;
    nonempty += lp.nonempty;
    if (lp.nonempty) {
      // The LP's witness must itself be strictly inside.
      double margin = std::numeric_limits<double>::infinity();
      for (const auto& a : normals) margin = std::min(margin, a.dot(lp.witness) / a.norm());
      if (!(margin > 0)) fail(o, "cone " + std::to_string(c) + ": reported nonempty, witness margin " + num(margin));
    } else if (best > 0) {
      if (best < 10 * tol) {
        ++tolerated;
      } else {
        fail(o, "cone " + std::to_string(c) + ": reported empty, sampled margin " + num(best));
      }
    }
  }
  finish(o, std::to_string(nonempty) + " nonempty, " + std::to_string(o.instances - nonempty) + " empty, " +
                std::to_string(tolerated) + " tolerated near-empty");
  return o;
}

Outcome compose_vs_differences(int instances, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  double worst = 0.0;
  while (o.instances < instances) {
    model::Problem prob;
    prob.p = 3;
    prob.objective = expr::parse("x1", 3, 0);
    prob.inner_map = {expr::parse(random_expr(rng, 2), 3, 0), expr::parse(random_expr(rng, 2), 3, 0),
                      expr::parse(random_expr(rng, 2), 3, 0)};
    prob.inequality = model::ConstraintFamily::finite(3, {expr::parse(random_expr(rng, 2), 3, 0)});
    const Vector x = random_vector(rng, 3, -1, 1);
    Vector g;
    expr::ExprFn composite;
    try {
      composite = reduction::compose_family(prob, x).inequality->members[0];
      g = composite.grad(x);
    } catch (const expr::EvalError&) {
      continue;
    }
    Vector chained;
    try {
      chained = reduction::jacobian_of(prob.inner_map, x).transpose() *
                prob.inequality->members[0].grad(prob.image(x));
    } catch (const expr::EvalError&) {
      continue;
    }
    ++o.instances;
    if ((chained - g).lpNorm<Eigen::Infinity>() > 1e-12 * std::max(1.0, g.lpNorm<Eigen::Infinity>()))
      fail(o, composite.to_string() + ": chain rule and composite gradient differ");
    for (int i = 0; i < 3; ++i) {
      const double h = 1e-5;
      Vector xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      const double fd = (composite.eval(xp) - composite.eval(xm)) / (2 * h);
      const double rel = std::abs(fd - g(i)) / std::max(1.0, std::abs(g(i)));
      worst = std::max(worst, rel);
      if (rel > 1e-6) fail(o, composite.to_string() + ": partial " + std::to_string(i + 1) + " off by " + num(rel));
    }
  }
  finish(o, "worst relative error " + num(worst));
  return o;
}

}  // namespace sipcert::checks
