#include "sipcert/reduction.hpp"

namespace sipcert::reduction {

model::Problem compose_family(const model::Problem& prob, const Vector& x) {
  if (prob.inner_map.empty()) return prob;
  if (!prob.inequality) throw std::invalid_argument("inner map given without constraints");
  if (x.size() != prob.p) throw std::invalid_argument("point has wrong dimension");
  prob.image(x);  // g must be defined at x
  model::Problem out = prob;
  out.inequality = model::compose(*prob.inequality, prob.inner_map, prob.p);
  out.inner_map.clear();
  return out;
}

Vector prechain_combination(const model::ConstraintFamily& family, const Vector& y,
                            const std::vector<multipliers::WeightedGenerator>& coeffs, const model::Options& opts) {
  model::PointEvaluation pe(family, y, opts);
  Vector out = Vector::Zero(family.dim);
  for (const auto& c : coeffs) {
    model::Sample s;
    s.tag = c.tag;
    s.member = c.member;
    s.param = c.param;
    s.limit = c.limit;
    pe.fill_grad(s);
    out += c.weight * s.grad;
  }
  return out;
}

ComposedCertificate certify_composed(const model::Problem& prob, const Vector& x, const model::Options& opts) {
  ComposedCertificate out;
  out.certificate = multipliers::certify_fj(prob, x, opts);
  if (!prob.inequality) return out;
  out.image = prob.image(x);
  const int q = prob.inequality->dim;
  if (prob.inner_map.empty()) {
    out.jacobian = Matrix::Identity(prob.p, prob.p);
  } else {
    out.jacobian = jacobian_of(prob.inner_map, x, opts.tol_kink);
  }
  out.y_star = Vector::Zero(q);
  const auto& c = out.certificate;
  if (c.kind != multipliers::Kind::FJ && c.kind != multipliers::Kind::KKT) return out;
  if (!c.coeffs.empty()) out.y_star = prechain_combination(*prob.inequality, out.image, c.coeffs, opts);
  out.y_nonzero = out.y_star.lpNorm<Eigen::Infinity>() > opts.tol;
  out.chain_residual = (out.jacobian.transpose() * out.y_star - c.witness).lpNorm<Eigen::Infinity>();
  return out;
}

}  // namespace sipcert::reduction
