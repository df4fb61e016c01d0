#include "sipcert/geometry.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace sipcert::geometry {

Hull::Hull(std::vector<Vector> gens, std::vector<std::string> tag_list)
    : generators(std::move(gens)), tags(std::move(tag_list)) {
  tags.resize(generators.size());
  for (const auto& g : generators)
    if (g.size() != generators.front().size()) throw std::invalid_argument("hull generators differ in dimension");
}

void Hull::add(Vector g, std::string tag) {
  if (!generators.empty() && g.size() != generators.front().size())
    throw std::invalid_argument("hull generators differ in dimension");
  generators.push_back(std::move(g));
  tags.push_back(std::move(tag));
}

namespace {

void check_target(const Vector& target, const Hull& hull) {
  if (hull.empty()) throw std::invalid_argument("hull has no generators");
  if (target.size() != hull.dim()) throw std::invalid_argument("target and hull dimensions differ");
}

// Common scale so that c*target, c*H produce the same LP up to rounding.
double scale_of(const Vector& target, const Hull& hull, const Vector* w = nullptr) {
  double s = target.lpNorm<Eigen::Infinity>();
  for (const auto& g : hull.generators) s = std::max(s, g.lpNorm<Eigen::Infinity>());
  if (w) s = std::max(s, w->lpNorm<Eigen::Infinity>());
  return s > 0 ? s : 1.0;
}

// Rows |sum_i coeff_i v_i - target|_j <= s for the columns given by `cols`,
// where the variable of column i is `first + i` and s is variable `slack`.
void add_box_rows(LinearProgram& lp, const std::vector<const Vector*>& cols, int first, int slack,
                  const Vector& target, double scale) {
  const int p = static_cast<int>(target.size());
  for (int j = 0; j < p; ++j) {
    Vector row = Vector::Zero(lp.num_vars);
    for (std::size_t i = 0; i < cols.size(); ++i) row(first + static_cast<int>(i)) = (*cols[i])(j) / scale;
    Vector upper = row;
    upper(slack) = -1.0;
    lp.add_row(upper, Sense::LessEqual, target(j) / scale);
    Vector lower = row;
    lower(slack) = 1.0;
    lp.add_row(lower, Sense::GreaterEqual, target(j) / scale);
  }
}

Vector clean_simplex(Vector a, double total) {
  a = a.cwiseMax(0.0);
  const double s = a.sum();
  if (s > 0) a *= total / s;
  return a;
}

// Re-solve the affine system on the LP support so the combination hits the
// target to rounding rather than to the LP tolerance. Kept only if it stays
// a convex combination and does not increase the error.
Vector polish(const std::vector<const Vector*>& cols, Vector mix, const Vector& target) {
  std::vector<int> support;
  for (int i = 0; i < mix.size(); ++i)
    if (mix(i) > 1e-12) support.push_back(i);
  if (support.empty()) return mix;
  const int p = static_cast<int>(target.size());
  const int k = static_cast<int>(support.size());
  Matrix a(p + 1, k);
  Vector rhs(p + 1);
  rhs.head(p) = target;
  rhs(p) = 1.0;
  for (int c = 0; c < k; ++c) {
    a.col(c).head(p) = *cols[support[c]];
    a(p, c) = 1.0;
  }
  const Vector sol = Eigen::CompleteOrthogonalDecomposition<Matrix>(a).solve(rhs);
  if (sol.minCoeff() < -1e-13) return mix;
  auto error = [&](const Vector& m) {
    Vector combo = Vector::Zero(p);
    for (int i = 0; i < m.size(); ++i) combo += m(i) * *cols[i];
    return (combo - target).lpNorm<Eigen::Infinity>();
  };
  Vector out = Vector::Zero(mix.size());
  for (int c = 0; c < k; ++c) out(support[c]) = std::max(0.0, sol(c));
  out /= out.sum();
  return error(out) <= error(mix) ? out : mix;
}

}  // namespace

HullMembership hull_member(const Vector& target, const Hull& hull, double tol, const SimplexOptions& opts) {
  check_target(target, hull);
  const int n = hull.size();
  const double scale = scale_of(target, hull);
  LinearProgram lp(n + 1);
  lp.objective(n) = 1.0;
  Vector sum = Vector::Zero(n + 1);
  sum.head(n).setOnes();
  lp.add_row(sum, Sense::Equal, 1.0);
  std::vector<const Vector*> cols;
  for (const auto& g : hull.generators) cols.push_back(&g);
  add_box_rows(lp, cols, 0, n, target, scale);

  const SimplexSolution sol = solve_lp(lp, opts);
  if (sol.status != LpStatus::Optimal) throw LpNumericalError("hull membership LP did not reach an optimum");

  HullMembership out;
  out.coeffs = polish(cols, clean_simplex(sol.point.head(n), 1.0), target);
  Vector combo = Vector::Zero(target.size());
  for (int i = 0; i < n; ++i) combo += out.coeffs(i) * hull.generators[i];
  out.distance = (combo - target).lpNorm<Eigen::Infinity>();
  out.member = out.distance <= tol;
  return out;
}

SegmentMembership segment_hull_member(const Vector& target, const Vector& w, const Hull& hull, double tol,
                                      const SimplexOptions& opts) {
  check_target(target, hull);
  if (w.size() != target.size()) throw std::invalid_argument("segment endpoint has wrong dimension");
  const int n = hull.size();
  const double scale = scale_of(target, hull, &w);
  // Variables: lambda, alpha_1..alpha_n, s.
  LinearProgram lp(n + 2);
  const int slack = n + 1;
  Vector sum = Vector::Zero(n + 2);
  sum.head(n + 1).setOnes();
  lp.add_row(sum, Sense::Equal, 1.0);
  std::vector<const Vector*> cols{&w};
  for (const auto& g : hull.generators) cols.push_back(&g);
  add_box_rows(lp, cols, 0, slack, target, scale);

  lp.objective(slack) = 1.0;
  const SimplexSolution first = solve_lp(lp, opts);
  if (first.status != LpStatus::Optimal) throw LpNumericalError("segment hull LP did not reach an optimum");

  // Second stage: keep the distance, push weight onto w.
  Vector cap = Vector::Zero(n + 2);
  cap(slack) = 1.0;
  lp.add_row(cap, Sense::LessEqual, first.objective + opts.tol_lp);
  lp.objective.setZero();
  lp.objective(0) = -1.0;
  SimplexSolution second = solve_lp(lp, opts);
  const SimplexSolution& sol = second.status == LpStatus::Optimal ? second : first;

  Vector mix = polish(cols, clean_simplex(sol.point.head(n + 1), 1.0), target);
  SegmentMembership out;
  out.lambda = mix(0);
  out.coeffs = mix.tail(n);
  Vector combo = out.lambda * w;
  for (int i = 0; i < n; ++i) combo += out.coeffs(i) * hull.generators[i];
  out.distance = (combo - target).lpNorm<Eigen::Infinity>();
  out.member = out.distance <= tol;
  return out;
}

double cone_distance(const Vector& target, const Hull& generators, const SimplexOptions& opts) {
  if (generators.empty()) return target.lpNorm<Eigen::Infinity>();
  check_target(target, generators);
  const int n = generators.size();
  const double scale = scale_of(target, generators);
  LinearProgram lp(n + 1);
  lp.objective(n) = 1.0;
  std::vector<const Vector*> cols;
  for (const auto& g : generators.generators) cols.push_back(&g);
  add_box_rows(lp, cols, 0, n, target, scale);
  const SimplexSolution sol = solve_lp(lp, opts);
  if (sol.status != LpStatus::Optimal) throw LpNumericalError("cone distance LP did not reach an optimum");
  Vector combo = Vector::Zero(target.size());
  for (int i = 0; i < n; ++i) combo += std::max(0.0, sol.point(i)) * generators.generators[i];
  return (combo - target).lpNorm<Eigen::Infinity>();
}

}  // namespace sipcert::geometry
