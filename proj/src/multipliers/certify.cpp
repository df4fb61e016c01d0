#include "sipcert/multipliers.hpp"

#include <cmath>

namespace sipcert::multipliers {

std::string to_string(Kind k) {
  switch (k) {
    case Kind::Unconstrained: return "Unconstrained";
    case Kind::FJ: return "FJ";
    case Kind::KKT: return "KKT";
    case Kind::NoCertificate: return "NoCertificate";
  }
  return "NoCertificate";
}

bool is_certified(const Certificate& c) { return c.kind != Kind::NoCertificate; }

Certificate certify_with(const Vector& grad_f, TCApprox tc, const model::Options& opts) {
  Certificate c;
  c.objective_grad = grad_f;
  c.approximate = !tc.converged;
  const int p = static_cast<int>(grad_f.size());
  const double gnorm = grad_f.lpNorm<Eigen::Infinity>();

  if (tc.interior || tc.final.empty()) {
    c.tc = std::move(tc);
    c.residual = gnorm;
    c.lambda = 1.0;
    c.witness = Vector::Zero(p);
    c.kind = gnorm <= opts.tol ? Kind::Unconstrained : Kind::NoCertificate;
    return c;
  }

  const Vector zero = Vector::Zero(p);
  c.zero_not_in_tc = !geometry::hull_member(zero, tc.final, opts.tol, opts.lp()).member;

  if (gnorm <= opts.tol) {
    // Boundary point with a vanishing gradient: (lambda, beta) = (1, 0).
    c.lambda = 1.0;
    c.beta = 0.0;
    c.witness = zero;
    c.residual = gnorm;
    c.kind = c.zero_not_in_tc ? Kind::KKT : Kind::FJ;
    c.tc = std::move(tc);
    return c;
  }

  const auto seg = geometry::segment_hull_member(zero, grad_f, tc.final, opts.tol, opts.lp());
  c.segment_distance = seg.distance;
  if (!seg.member || seg.lambda >= 1.0) {
    c.tc = std::move(tc);
    c.kind = Kind::NoCertificate;
    c.residual = seg.distance;
    return c;
  }

  c.lambda = seg.lambda;
  c.beta = 1.0 - seg.lambda;
  Vector alpha = seg.coeffs / c.beta;
  alpha /= alpha.sum();
  Vector point = Vector::Zero(p);
  for (int i = 0; i < tc.final.size(); ++i) point += alpha(i) * tc.final.generators[i];
  const auto red = geometry::caratheodory_reduce(point, tc.final, alpha, opts.tol_lp);

  c.witness = Vector::Zero(p);
  for (std::size_t k = 0; k < red.indices.size(); ++k) {
    const int i = red.indices[k];
    WeightedGenerator w;
    w.tag = tc.final.tags[i];
    w.generator = tc.final.generators[i];
    w.param = tc.final_members[i].param;
    w.member = tc.final_members[i].member;
    w.limit = tc.final_members[i].limit;
    w.weight = red.coeffs(static_cast<int>(k));
    c.witness += w.weight * w.generator;
    c.coeffs.push_back(std::move(w));
  }
  c.residual = (c.lambda * grad_f + c.beta * c.witness).lpNorm<Eigen::Infinity>();
  c.kkt_beta = c.beta / c.lambda;
  c.kind = c.residual > opts.tol ? Kind::NoCertificate : (c.zero_not_in_tc && c.lambda > 0 ? Kind::KKT : Kind::FJ);
  c.tc = std::move(tc);
  return c;
}

Certificate certify_fj(const model::Problem& prob, const Vector& x, const model::Options& opts) {
  if (x.size() != prob.p) throw std::invalid_argument("candidate has wrong dimension");
  const auto feas = model::feasibility(prob, x, opts);
  if (!feas.feasible) {
    const std::string tag = feas.violated.empty() ? std::string() : feas.violated.front();
    throw model::InfeasibleError("candidate is infeasible: constraint " + tag + " is violated", tag);
  }
  const Vector grad_f = prob.objective.grad(x, Vector(), opts.tol_kink);
  auto fam = prob.effective_family();
  if (!fam) {
    TCApprox empty;
    empty.interior = true;
    empty.converged = true;
    empty.infimum = feas.infimum;
    return certify_with(grad_f, std::move(empty), opts);
  }
  model::PointEvaluation pe(*fam, x, opts);
  return certify_with(grad_f, tc_approx(pe, opts), opts);
}

SipMultipliers sip_multipliers(const model::Problem& prob, const Vector& x, const model::Options& opts) {
  return sip_multipliers(certify_fj(prob, x, opts), opts);
}

SipMultipliers sip_multipliers(Certificate certificate, const model::Options& opts) {
  SipMultipliers out;
  out.certificate = std::move(certificate);
  const Certificate& c = out.certificate;
  out.lambda0_nonzero = c.zero_not_in_tc;
  if (c.kind != Kind::FJ && c.kind != Kind::KKT) return out;

  const Vector& g = c.objective_grad;
  const int p = static_cast<int>(g.size());
  const TCApprox& tc = c.tc;

  // A single generator on the segment through -grad f gives the sparsest form.
  int single = -1;
  double single_lambda = 0.0;
  if (c.beta > 0) {
    for (int i = 0; i < tc.final.size(); ++i) {
      geometry::Hull one;
      one.add(tc.final.generators[i], tc.final.tags[i]);
      const auto s = geometry::segment_hull_member(Vector::Zero(p), g, one, opts.tol, opts.lp());
      if (s.member && s.lambda > 0 && s.lambda < 1 && s.lambda > single_lambda + 1e-12) {
        single = i;
        single_lambda = s.lambda;
      }
    }
  }

  if (single >= 0) {
    out.lambda0 = single_lambda;
    out.weights = {1.0 - single_lambda};
    out.params = {tc.final_members[single].param};
    out.tags = {tc.final.tags[single]};
    out.gradients = {tc.final.generators[single]};
  } else {
    // Generators and grad f together, reduced to an independent support.
    geometry::Hull aug;
    Vector w(static_cast<int>(c.coeffs.size()) + 1);
    for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
      aug.add(c.coeffs[k].generator, c.coeffs[k].tag);
      w(static_cast<int>(k)) = c.beta * c.coeffs[k].weight;
    }
    aug.add(g, "objective");
    w(w.size() - 1) = c.lambda;
    w /= w.sum();
    const auto red = geometry::caratheodory_reduce(Vector::Zero(p), aug, w, opts.tol_lp);
    for (std::size_t k = 0; k < red.indices.size(); ++k) {
      const int i = red.indices[k];
      const double weight = red.coeffs(static_cast<int>(k));
      if (i == aug.size() - 1) {
        out.lambda0 = weight;
        continue;
      }
      out.weights.push_back(weight);
      out.params.push_back(c.coeffs[static_cast<std::size_t>(i)].param);
      out.tags.push_back(aug.tags[i]);
      out.gradients.push_back(aug.generators[i]);
    }
  }

  Vector r = out.lambda0 * g;
  for (std::size_t k = 0; k < out.weights.size(); ++k) r += out.weights[k] * out.gradients[k];
  out.residual = r.lpNorm<Eigen::Infinity>();
  out.found = out.residual <= opts.tol;
  return out;
}

}  // namespace sipcert::multipliers
