#include "sipcert/geometry.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <cmath>
#include <limits>

namespace sipcert::geometry {

namespace {

// Columns [g_i; 1] for the current support.
Matrix lifted(const Hull& hull, const std::vector<int>& support) {
  const int p = hull.dim();
  Matrix m(p + 1, static_cast<int>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    m.col(static_cast<int>(k)).head(p) = hull.generators[support[k]];
    m(p, static_cast<int>(k)) = 1.0;
  }
  return m;
}

double residual_of(const Vector& target, const Hull& hull, const std::vector<int>& support, const Vector& c) {
  Vector combo = Vector::Zero(target.size());
  for (std::size_t k = 0; k < support.size(); ++k) combo += c(static_cast<int>(k)) * hull.generators[support[k]];
  return (combo - target).lpNorm<Eigen::Infinity>();
}

struct Step {
  double t = std::numeric_limits<double>::infinity();
  int vanishing = 0;
  int first = -1;  // lowest position hitting zero
};

// Largest move along -dir keeping coefficients nonnegative.
Step step_along(const Vector& coeffs, const Vector& dir) {
  Step s;
  for (int k = 0; k < dir.size(); ++k)
    if (dir(k) > 0) s.t = std::min(s.t, coeffs(k) / dir(k));
  for (int k = 0; k < dir.size(); ++k) {
    if (dir(k) <= 0) continue;
    if (std::abs(coeffs(k) - s.t * dir(k)) <= 1e-14 * (1 + std::abs(coeffs(k)))) {
      ++s.vanishing;
      if (s.first < 0) s.first = k;
    }
  }
  return s;
}

}  // namespace

Reduction caratheodory_reduce(const Vector& target, const Hull& hull, const Vector& coeffs, double tol_lp) {
  if (hull.empty() || coeffs.size() != hull.size() || target.size() != hull.dim())
    throw std::invalid_argument("caratheodory_reduce: dimension mismatch");
  double scale = target.lpNorm<Eigen::Infinity>();
  for (const auto& g : hull.generators) scale = std::max(scale, g.lpNorm<Eigen::Infinity>());
  scale = std::max(scale, 1.0);
  if (coeffs.minCoeff() < -tol_lp || std::abs(coeffs.sum() - 1.0) > tol_lp * hull.size())
    throw std::invalid_argument("caratheodory_reduce: coefficients are not a convex combination");

  std::vector<int> support;
  std::vector<double> weights;
  for (int i = 0; i < coeffs.size(); ++i) {
    if (coeffs(i) > 0) {
      support.push_back(i);
      weights.push_back(coeffs(i));
    }
  }
  Vector c = Eigen::Map<Vector>(weights.data(), static_cast<int>(weights.size()));
  if (residual_of(target, hull, support, c) > 1e-6 * scale)
    throw std::invalid_argument("caratheodory_reduce: coefficients do not reproduce the target");

  while (support.size() > 1) {
    Matrix m = lifted(hull, support);
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(1e-12 * scale);
    if (lu.rank() == static_cast<int>(support.size())) break;
    Vector dir = lu.kernel().col(0);
    dir /= dir.lpNorm<Eigen::Infinity>();
    // Both signs are admissible; take the one that retires more generators,
    // then the one retiring the lowest index.
    const Step plus = step_along(c, dir);
    const Step minus = step_along(c, -dir);
    bool use_plus = plus.vanishing > minus.vanishing ||
                    (plus.vanishing == minus.vanishing && plus.first <= minus.first);
    if (!std::isfinite(use_plus ? plus.t : minus.t)) use_plus = !use_plus;
    const Step& s = use_plus ? plus : minus;
    if (!std::isfinite(s.t)) break;
    c -= s.t * (use_plus ? dir : Vector(-dir));
    c(s.first) = 0.0;

    std::vector<int> next;
    std::vector<double> next_w;
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (c(static_cast<int>(k)) > 1e-14) {
        next.push_back(support[k]);
        next_w.push_back(c(static_cast<int>(k)));
      }
    }
    support = std::move(next);
    c = Eigen::Map<Vector>(next_w.data(), static_cast<int>(next_w.size()));
    c /= c.sum();
  }

  // Polish on the independent support: [g; 1] c = [target; 1] has a unique solution.
  Matrix m = lifted(hull, support);
  Vector rhs(hull.dim() + 1);
  rhs << target, 1.0;
  Vector polished = m.colPivHouseholderQr().solve(rhs);
  if (polished.minCoeff() >= 0 &&
      residual_of(target, hull, support, polished) <= residual_of(target, hull, support, c))
    c = polished;

  Reduction out;
  out.indices = support;
  out.coeffs = c;
  out.residual = residual_of(target, hull, support, c);
  return out;
}

}  // namespace sipcert::geometry
