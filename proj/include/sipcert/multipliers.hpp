#pragma once

#include "sipcert/model.hpp"

#include <string>
#include <vector>

namespace sipcert::multipliers {

struct LadderStep {
  double eps = 0.0;
  geometry::Hull hull;
  std::vector<model::Sample> members;  // same order as hull generators
  double gap = 0.0;                    // distance from the previous hull; 0 on the first step
};

/// Approximation of the near-active multiplier set by a shrinking eps ladder.
struct TCApprox {
  std::vector<LadderStep> ladder;
  geometry::Hull final;
  std::vector<model::Sample> final_members;
  bool converged = false;
  bool interior = false;  // infimum > tol_feas: the set is empty
  bool shortcut = false;  // finite family with every survivor exactly active
  double infimum = 0.0;
  std::vector<double> hausdorff_gaps;  // one per step after the first
};

TCApprox tc_approx(const model::Problem& prob, const Vector& x, const model::Options& opts);
TCApprox tc_approx(model::PointEvaluation& pe, const model::Options& opts);

enum class Kind { Unconstrained, FJ, KKT, NoCertificate };
std::string to_string(Kind k);

struct WeightedGenerator {
  std::string tag;
  Vector generator;
  Vector param;
  int member = -1;
  bool limit = false;
  double weight = 0.0;
};

struct Certificate {
  Kind kind = Kind::NoCertificate;
  double lambda = 0.0;  // normalized so lambda + beta = 1
  double beta = 0.0;
  Vector witness;       // x*, a point of the final hull
  std::vector<WeightedGenerator> coeffs;
  double residual = 0.0;  // |lambda grad f + beta x*|_inf
  bool zero_not_in_tc = false;
  bool approximate = false;  // ladder did not stabilize
  Vector objective_grad;
  double kkt_beta = 0.0;  // beta / lambda when lambda > 0
  double segment_distance = 0.0;
  TCApprox tc;
};

bool is_certified(const Certificate& c);

/// Certification given the objective gradient and a finished ladder.
Certificate certify_with(const Vector& grad_f, TCApprox tc, const model::Options& opts);

Certificate certify_fj(const model::Problem& prob, const Vector& x, const model::Options& opts);

struct SipMultipliers {
  bool found = false;
  double lambda0 = 0.0;
  std::vector<double> weights;  // lambda_1..lambda_k
  std::vector<Vector> params;   // t_i (or k for countable members)
  std::vector<std::string> tags;
  std::vector<Vector> gradients;
  double residual = 0.0;
  bool lambda0_nonzero = false;  // 0 outside the final hull
  Certificate certificate;
};

SipMultipliers sip_multipliers(const model::Problem& prob, const Vector& x, const model::Options& opts);
/// Same, reusing a certificate already computed by certify_fj.
SipMultipliers sip_multipliers(Certificate certificate, const model::Options& opts);

}  // namespace sipcert::multipliers
