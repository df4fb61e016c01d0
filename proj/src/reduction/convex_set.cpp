#include "sipcert/reduction.hpp"

#include <cmath>

namespace sipcert::reduction {

ConvexSetCheck convex_set_multiplier(const geometry::Polyhedron& a, const Vector& y_img, const Vector& z, double tol,
                                     const geometry::SimplexOptions& lp_opts) {
  if (y_img.size() != a.dim || z.size() != a.dim) throw std::invalid_argument("convex_set_multiplier: dimension mismatch");
  ConvexSetCheck out;
  const int q = a.dim;

  // z in (R_A)*  <=>  min z^T v over the recession cone (boxed) is 0.
  geometry::LinearProgram lp(q);
  lp.objective = z;
  std::fill(lp.free_vars.begin(), lp.free_vars.end(), true);
  for (const auto& n : a.normals) lp.add_row(n, geometry::Sense::GreaterEqual, 0.0);
  for (int i = 0; i < q; ++i) {
    Vector row = Vector::Zero(q);
    row(i) = 1.0;
    lp.add_row(row, geometry::Sense::LessEqual, 1.0);
    lp.add_row(row, geometry::Sense::GreaterEqual, -1.0);
  }
  const auto sol = geometry::solve_lp(lp, lp_opts);
  if (sol.status != geometry::LpStatus::Optimal) throw geometry::LpNumericalError("recession cone LP failed");
  out.dual_margin = sol.objective;
  out.dual_ok = out.dual_margin >= -tol;
  if (!out.dual_ok) out.ray = sol.point;

  out.point_in_set = a.contains(y_img, tol);
  out.value_at_point = z.dot(y_img);
  const auto m = geometry::minimize_over(a, z, lp_opts);
  if (m.status == geometry::LpStatus::Unbounded) {
    out.unbounded = true;
    out.min_value = -std::numeric_limits<double>::infinity();
    if (out.ray.size() == 0) out.ray = m.ray;
  } else if (m.status == geometry::LpStatus::Optimal) {
    out.min_value = m.value;
    out.min_ok = std::abs(out.value_at_point - out.min_value) <= tol * (1 + std::abs(out.min_value));
  } else {
    throw std::invalid_argument("convex_set_multiplier: polyhedron is empty");
  }
  out.pass = out.dual_ok && out.min_ok && out.point_in_set;
  return out;
}

}  // namespace sipcert::reduction
