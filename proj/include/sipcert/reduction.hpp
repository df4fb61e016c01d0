#pragma once

#include "sipcert/multipliers.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sipcert::reduction {

struct Jacobian {
  Matrix matrix;  // rows = component gradients
  int rank = 0;
  double tol_rank = 0.0;
  std::vector<double> pivots;        // magnitudes in elimination order
  std::vector<int> pivot_columns;    // span the chosen complement of the kernel
  std::vector<Vector> kernel_basis;  // orthonormal
  std::optional<Vector> left_null;   // unit vector with left_null^T matrix = 0

  /// Kernel basis as columns of a p x d matrix.
  Matrix kernel() const;
};

/// Complete-pivot elimination with threshold 1e-10 * max|J| (absolute
/// threshold when `tol_rank` is given).
Jacobian analyze_jacobian(const Matrix& j, std::optional<double> tol_rank = std::nullopt);

/// Rows are the gradients of `fns` at x.
Matrix jacobian_of(std::span<const expr::ExprFn> fns, const Vector& x, double tol_kink = expr::kDefaultKinkTolerance);

/// The problem with the inner map substituted into the constraint family.
model::Problem compose_family(const model::Problem& prob, const Vector& x);

/// sum_i w_i grad phi_i(y) over certificate generators, with the gradients
/// taken in the constraint space before chaining through g.
Vector prechain_combination(const model::ConstraintFamily& family, const Vector& y,
                            const std::vector<multipliers::WeightedGenerator>& coeffs, const model::Options& opts);

struct ComposedCertificate {
  multipliers::Certificate certificate;
  Vector image;      // g(x)
  Matrix jacobian;   // J_g(x)
  Vector y_star;     // combination of the constraint gradients at g(x)
  bool y_nonzero = false;
  double chain_residual = 0.0;  // |J_g^T y* - x*|_inf
};

ComposedCertificate certify_composed(const model::Problem& prob, const Vector& x, const model::Options& opts);

enum class Branch { NotOnto, OntoNoA, OntoWithA };
std::string to_string(Branch b);

struct FullCertificate {
  Branch branch = Branch::OntoNoA;
  multipliers::Kind kind = multipliers::Kind::NoCertificate;
  double lambda0 = 0.0;
  Vector z0;  // in the constraint space (R^q, or R^p without an inner map)
  Vector w0;  // equality multipliers
  double residual = 0.0;
  // Normalized pair from the kernel-restricted certificate.
  double lambda = 0.0;
  double beta = 0.0;
  bool kkt = false;
  bool approximate = false;
  Vector y_star;
  std::vector<multipliers::WeightedGenerator> coeffs;  // full-space generators
  Jacobian jac_h;
  Vector kernel_grad;  // K^T grad f
  double kernel_projection = 0.0;  // |K K^T grad f|_inf
  multipliers::Certificate kernel_certificate;
  std::string note;
};

bool is_certified(const FullCertificate& c);

FullCertificate certify_equality(const model::Problem& prob, const Vector& x, const model::Options& opts);

/// |lambda0 grad f + J_g^T z0 + J_h^T w0|_inf recomputed from the problem.
double full_residual(const model::Problem& prob, const Vector& x, const FullCertificate& c,
                     double tol_kink = expr::kDefaultKinkTolerance);

struct ConvexSetCheck {
  bool dual_ok = false;     // z in (R_A)*
  double dual_margin = 0;   // min z^T v over v in R_A, |v|_inf <= 1
  Vector ray;               // witness direction when dual_ok fails
  bool min_ok = false;      // z^T y_img = min over A of z^T y
  bool unbounded = false;
  double min_value = 0;
  double value_at_point = 0;
  bool point_in_set = false;
  bool pass = false;
};

ConvexSetCheck convex_set_multiplier(const geometry::Polyhedron& a, const Vector& y_img, const Vector& z,
                                     double tol = 1e-8, const geometry::SimplexOptions& lp = {});

}  // namespace sipcert::reduction
