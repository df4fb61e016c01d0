#include "sipcert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sipcert::geometry {

Polyhedron::Polyhedron(int dimension, std::vector<Vector> normal_list, std::vector<double> offset_list)
    : dim(dimension), normals(std::move(normal_list)), offsets(std::move(offset_list)) {
  if (dim < 0) throw std::invalid_argument("polyhedron dimension must be nonnegative");
  if (normals.size() != offsets.size()) throw std::invalid_argument("polyhedron needs one offset per normal");
  for (const auto& a : normals) {
    if (a.size() != dim) throw std::invalid_argument("polyhedron normal has wrong dimension");
    if (a.lpNorm<Eigen::Infinity>() == 0) throw std::invalid_argument("polyhedron normal is zero");
  }
}

bool Polyhedron::is_cone() const {
  for (double b : offsets)
    if (b != 0) return false;
  return true;
}

bool Polyhedron::contains(const Vector& y, double tol) const {
  if (y.size() != dim) throw std::invalid_argument("point has wrong dimension");
  for (int j = 0; j < rows(); ++j)
    if (normals[j].dot(y) < offsets[j] - tol) return false;
  return true;
}

Polyhedron recession_cone(const Polyhedron& a) {
  return Polyhedron(a.dim, a.normals, std::vector<double>(a.normals.size(), 0.0));
}

ConeInterior cone_interior_nonempty(const Polyhedron& cone, double tol, const SimplexOptions& opts) {
  if (!cone.is_cone()) throw std::invalid_argument("cone_interior_nonempty: offsets must be zero");
  const int p = cone.dim;
  // Variables e_1..e_p (free), delta (free).
  LinearProgram lp(p + 1);
  for (int i = 0; i <= p; ++i) lp.free_vars[i] = true;
  lp.objective(p) = -1.0;
  for (const auto& a : cone.normals) {
    Vector row(p + 1);
    row << a / a.norm(), -1.0;
    lp.add_row(row, Sense::GreaterEqual, 0.0);
  }
  for (int i = 0; i < p; ++i) {
    Vector row = Vector::Zero(p + 1);
    row(i) = 1.0;
    lp.add_row(row, Sense::LessEqual, 1.0);
    lp.add_row(row, Sense::GreaterEqual, -1.0);
  }
  Vector cap = Vector::Zero(p + 1);
  cap(p) = 1.0;
  lp.add_row(cap, Sense::LessEqual, 1.0);

  const SimplexSolution sol = solve_lp(lp, opts);
  if (sol.status != LpStatus::Optimal) throw LpNumericalError("cone interior LP did not reach an optimum");
  ConeInterior out;
  out.margin = sol.point(p);
  out.nonempty = out.margin > tol;
  out.witness = sol.point.head(p);
  const double n = out.witness.norm();
  if (n > 0) out.witness /= n;
  return out;
}

Polyhedron dual_cone(const Hull& generators) {
  if (generators.empty()) throw std::invalid_argument("dual_cone: no generators");
  std::vector<Vector> normals;
  for (const auto& g : generators.generators)
    if (g.lpNorm<Eigen::Infinity>() > 0) normals.push_back(g);
  std::vector<double> offsets(normals.size(), 0.0);
  return Polyhedron(generators.dim(), std::move(normals), std::move(offsets));
}

Polyhedron polar_cone(const Hull& generators) {
  Polyhedron d = dual_cone(generators);
  for (auto& a : d.normals) a = -a;
  return d;
}

Hull barrier_cone_generators(const Polyhedron& a) {
  Hull h;
  for (int j = 0; j < a.rows(); ++j) h.add(-a.normals[j], "a" + std::to_string(j));
  return h;
}

LinearMinimum minimize_over(const Polyhedron& a, const Vector& c, const SimplexOptions& opts) {
  if (c.size() != a.dim) throw std::invalid_argument("minimize_over: objective has wrong dimension");
  const int p = a.dim;
  LinearProgram lp(p);
  lp.objective = c;
  std::fill(lp.free_vars.begin(), lp.free_vars.end(), true);
  for (int j = 0; j < a.rows(); ++j) lp.add_row(a.normals[j], Sense::GreaterEqual, a.offsets[j]);
  const SimplexSolution sol = solve_lp(lp, opts);
  LinearMinimum out;
  out.status = sol.status;
  if (sol.status == LpStatus::Optimal) {
    out.value = sol.objective;
    out.point = sol.point;
    return out;
  }
  if (sol.status == LpStatus::Unbounded) {
    // A bounded descent direction in the recession cone.
    LinearProgram ray(p);
    ray.objective = c;
    std::fill(ray.free_vars.begin(), ray.free_vars.end(), true);
    for (const auto& n : a.normals) ray.add_row(n, Sense::GreaterEqual, 0.0);
    for (int i = 0; i < p; ++i) {
      Vector row = Vector::Zero(p);
      row(i) = 1.0;
      ray.add_row(row, Sense::LessEqual, 1.0);
      ray.add_row(row, Sense::GreaterEqual, -1.0);
    }
    const SimplexSolution r = solve_lp(ray, opts);
    if (r.status == LpStatus::Optimal) out.ray = r.point;
    out.value = -std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace sipcert::geometry
