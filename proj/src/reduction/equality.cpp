#include "sipcert/reduction.hpp"

#include <Eigen/QR>

#include <map>

namespace sipcert::reduction {

std::string to_string(Branch b) {
  switch (b) {
    case Branch::NotOnto: return "NotOnto";
    case Branch::OntoNoA: return "OntoNoA";
    case Branch::OntoWithA: return "OntoWithA";
  }
  return "OntoNoA";
}

bool is_certified(const FullCertificate& c) { return c.kind != multipliers::Kind::NoCertificate; }

double full_residual(const model::Problem& prob, const Vector& x, const FullCertificate& c, double tol_kink) {
  Vector r = c.lambda0 * prob.objective.grad(x, Vector(), tol_kink);
  if (c.z0.size() > 0) {
    if (prob.inner_map.empty()) {
      r += c.z0;
    } else {
      r += jacobian_of(prob.inner_map, x, tol_kink).transpose() * c.z0;
    }
  }
  if (c.w0.size() > 0) r += jacobian_of(prob.equality, x, tol_kink).transpose() * c.w0;
  return r.lpNorm<Eigen::Infinity>();
}

namespace {

// Minimum-norm w with J^T w = -rhs in the least-squares sense.
Vector equality_multiplier(const Matrix& j, const Vector& rhs) {
  if (j.rows() == 0) return Vector();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(j.transpose());
  return cod.solve(-rhs);
}

// Convex weights over the full-space generators so that lambda g + beta x*
// lies in the row space of J, with the smallest |w|_inf.
std::optional<Vector> lift_weights(const geometry::Hull& hull, const Vector& g, const Matrix& j, double lambda,
                                   double beta, const model::Options& opts) {
  const int n = hull.size();
  const int w = static_cast<int>(j.rows());
  const int p = static_cast<int>(g.size());
  geometry::LinearProgram lp(n + w + 1);
  for (int k = 0; k < w; ++k) lp.free_vars[n + k] = true;
  lp.objective(n + w) = 1.0;
  Vector sum = Vector::Zero(n + w + 1);
  sum.head(n).setOnes();
  lp.add_row(sum, geometry::Sense::Equal, 1.0);
  for (int i = 0; i < p; ++i) {
    Vector row = Vector::Zero(n + w + 1);
    for (int a = 0; a < n; ++a) row(a) = beta * hull.generators[a](i);
    for (int k = 0; k < w; ++k) row(n + k) = j(k, i);
    lp.add_row(row, geometry::Sense::Equal, -lambda * g(i));
  }
  for (int k = 0; k < w; ++k) {
    Vector row = Vector::Zero(n + w + 1);
    row(n + k) = 1.0;
    row(n + w) = -1.0;
    lp.add_row(row, geometry::Sense::LessEqual, 0.0);
    row(n + w) = 1.0;
    lp.add_row(row, geometry::Sense::GreaterEqual, 0.0);
  }
  const auto sol = geometry::solve_lp(lp, opts.lp());
  if (sol.status != geometry::LpStatus::Optimal) return std::nullopt;
  Vector a = sol.point.head(n).cwiseMax(0.0);
  if (a.sum() <= 0) return std::nullopt;
  return Vector(a / a.sum());
}

}  // namespace

FullCertificate certify_equality(const model::Problem& prob, const Vector& x, const model::Options& opts) {
  if (x.size() != prob.p) throw std::invalid_argument("candidate has wrong dimension");
  const auto feas = model::feasibility(prob, x, opts);
  if (!feas.feasible) {
    const std::string tag = feas.violated.empty() ? std::string() : feas.violated.front();
    throw model::InfeasibleError("candidate is infeasible: constraint " + tag + " is violated", tag);
  }
  FullCertificate out;
  const Vector g = prob.objective.grad(x, Vector(), opts.tol_kink);
  const int p = prob.p;
  const int q = prob.inequality ? prob.inequality->dim : 0;
  const Matrix jh = prob.equality.empty() ? Matrix(0, p) : jacobian_of(prob.equality, x, opts.tol_kink);
  out.jac_h = analyze_jacobian(jh);
  out.z0 = Vector::Zero(q);

  if (out.jac_h.rank < jh.rows()) {
    out.branch = Branch::NotOnto;
    out.kind = multipliers::Kind::FJ;
    out.lambda0 = 0.0;
    out.w0 = *out.jac_h.left_null;
    out.residual = full_residual(prob, x, out, opts.tol_kink);
    out.note = "equality Jacobian is rank deficient; the multiplier lies in its left null space";
    return out;
  }

  const Matrix k = out.jac_h.kernel();
  out.kernel_grad = k.transpose() * g;
  out.kernel_projection = (k * out.kernel_grad).lpNorm<Eigen::Infinity>();

  auto fam = prob.effective_family();
  if (!fam) {
    out.branch = Branch::OntoNoA;
    if (out.kernel_projection > opts.tol) {
      out.kind = multipliers::Kind::NoCertificate;
      out.residual = out.kernel_projection;
      out.note = "objective gradient has a component along the kernel of the equality Jacobian";
      return out;
    }
    out.lambda0 = 1.0;
    out.lambda = 1.0;
    out.w0 = equality_multiplier(jh, g);
    out.kind = multipliers::Kind::KKT;
    out.kkt = true;
    out.residual = full_residual(prob, x, out, opts.tol_kink);
    return out;
  }

  out.branch = Branch::OntoWithA;
  model::PointEvaluation pe(*fam, x, opts);
  multipliers::TCApprox tc = multipliers::tc_approx(pe, opts);
  multipliers::TCApprox restricted = tc;
  restricted.final = geometry::Hull();
  for (int i = 0; i < tc.final.size(); ++i)
    restricted.final.add(k.transpose() * tc.final.generators[i], tc.final.tags[i]);
  out.kernel_certificate = multipliers::certify_with(out.kernel_grad, std::move(restricted), opts);
  const auto& inner = out.kernel_certificate;
  out.approximate = inner.approximate;
  if (!multipliers::is_certified(inner)) {
    out.kind = multipliers::Kind::NoCertificate;
    out.residual = inner.residual;
    out.note = "no certificate in kernel coordinates";
    return out;
  }

  out.lambda = inner.lambda;
  out.beta = inner.beta;
  out.kkt = inner.kind == multipliers::Kind::KKT;
  out.kind = inner.kind;
  out.lambda0 = inner.lambda;
  Vector xstar = Vector::Zero(p);

  if (out.beta > 0) {
    auto alpha = lift_weights(tc.final, g, jh, out.lambda, out.beta, opts);
    if (!alpha) {
      // Fall back to the kernel certificate's own weights.
      std::map<std::string, int> index;
      for (int i = 0; i < tc.final.size(); ++i) index[tc.final.tags[i]] = i;
      Vector a = Vector::Zero(tc.final.size());
      for (const auto& c : inner.coeffs) a(index.at(c.tag)) += c.weight;
      alpha = a / a.sum();
    }
    Vector target = Vector::Zero(p);
    for (int i = 0; i < tc.final.size(); ++i) target += (*alpha)(i) * tc.final.generators[i];
    const auto red = geometry::caratheodory_reduce(target, tc.final, *alpha, opts.tol_lp);
    for (std::size_t r = 0; r < red.indices.size(); ++r) {
      const int i = red.indices[r];
      multipliers::WeightedGenerator w;
      w.tag = tc.final.tags[i];
      w.generator = tc.final.generators[i];
      w.param = tc.final_members[i].param;
      w.member = tc.final_members[i].member;
      w.limit = tc.final_members[i].limit;
      w.weight = red.coeffs(static_cast<int>(r));
      xstar += w.weight * w.generator;
      out.coeffs.push_back(std::move(w));
    }
    out.y_star = prob.inner_map.empty()
                     ? xstar
                     : prechain_combination(*prob.inequality, prob.image(x), out.coeffs, opts);
    out.z0 = out.beta * out.y_star;
  } else {
    out.y_star = Vector::Zero(q);
  }
  out.w0 = equality_multiplier(jh, out.lambda * g + out.beta * xstar);
  out.residual = full_residual(prob, x, out, opts.tol_kink);
  if (out.residual > opts.tol) {
    out.kind = multipliers::Kind::NoCertificate;
    out.note = "lifted multipliers leave a residual above tolerance";
  }
  return out;
}

}  // namespace sipcert::reduction
