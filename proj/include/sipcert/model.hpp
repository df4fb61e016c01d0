#pragma once

#include "sipcert/expr.hpp"
#include "sipcert/geometry.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sipcert::model {

struct Options {
  double tol = 1e-8;        // certificate / membership tolerance
  double tol_lp = 1e-9;
  double tol_feas = 1e-9;
  double tol_hull = 1e-7;
  double tol_kink = expr::kDefaultKinkTolerance;
  double eps0 = 1e-2;
  double shrink = 0.5;
  int max_steps = 20;
  int refine_depth = 8;
  int k_max = 10;
  int grid_override = 0;     // >0 replaces the base grid of Box index sets
  bool strict_active_only = false;

  geometry::SimplexOptions lp() const;
  void validate() const;
};

/// Candidate violates a constraint by more than tol_feas.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::string tag)
      : std::runtime_error(what), tag_(std::move(tag)) {}
  const std::string& tag() const { return tag_; }

 private:
  std::string tag_;
};

struct IndexSet {
  enum class Kind { Finite, Box };
  Kind kind = Kind::Box;
  std::vector<Vector> points;  // Finite
  Vector lower, upper;         // Box
  int base_grid = 2;

  static IndexSet finite(std::vector<Vector> points);
  static IndexSet box(Vector lower, Vector upper, int base_grid);

  int dim() const;
  /// Points of the base grid (Box) or the listed points (Finite), in
  /// lexicographic order with the first axis varying slowest.
  std::vector<Vector> grid(int grid_override = 0) const;
  Vector cell_width(int grid_override = 0) const;
};

enum class FamilyKind { Finite, Parametric, Polyhedral };

/// The inequality constraints phi(y) >= 0 on R^dim.
struct ConstraintFamily {
  FamilyKind kind = FamilyKind::Finite;
  int dim = 0;
  // Finite: members may use the sequence index k (countable members).
  std::vector<expr::ExprFn> members;
  std::string prefix = "c";
  // Parametric: h(y, t) >= 0 for all t in the index set.
  expr::ExprFn h;
  IndexSet index;
  // Polyhedral.
  geometry::Polyhedron polyhedron;

  static ConstraintFamily finite(int dim, std::vector<expr::ExprFn> members);
  static ConstraintFamily parametric(expr::ExprFn h, IndexSet index);
  static ConstraintFamily polyhedral(geometry::Polyhedron a);

  /// Finite or Polyhedral families as a list of expressions (a_j^T y - b_j
  /// for the polyhedral case).
  std::vector<expr::ExprFn> expressions() const;
  bool has_countable_members() const;
  void validate() const;
};

/// Substitute y = g(x) into every member; the result lives on R^p. Polyhedral
/// families become Finite with prefix "a" so tags are preserved.
ConstraintFamily compose(const ConstraintFamily& family, std::span<const expr::ExprFn> g, int p);

struct Problem {
  int p = 0;
  expr::ExprFn objective;
  std::optional<ConstraintFamily> inequality;
  std::vector<expr::ExprFn> inner_map;  // g: R^p -> R^q
  std::vector<expr::ExprFn> equality;   // h: R^p -> R^w
  std::optional<Vector> candidate;
  Options options;

  void validate() const;
  /// The inequality family pulled back to R^p (composed through g if present).
  std::optional<ConstraintFamily> effective_family() const;
  /// g(x), or x itself without an inner map.
  Vector image(const Vector& x) const;
};

/// One evaluated family member: a listed constraint, a countable member at a
/// given k, the limit k -> infinity, or a parameter t of a parametric family.
struct Sample {
  std::string tag;
  int member = -1;     // index of the listed expression (-1 for parametric)
  Vector param;        // t, or (k) for countable members
  bool limit = false;  // k = infinity; not itself a constraint
  double value = 0.0;
  Vector grad;         // filled for active entries only
};

struct FeasibilityReport {
  bool has_family = false;
  bool feasible = true;
  double infimum = 0.0;  // +inf without an inequality family
  std::string argmin_tag;
  std::vector<std::string> violated;
  bool boundary = false;  // |inf| <= tol_feas
  bool interior = false;  // inf > tol_feas
  double equality_residual = 0.0;
  bool countable_truncated = false;
};

struct ActiveSet {
  double eps = 0.0;
  std::vector<Sample> entries;  // members with 0 <= value <= eps
  std::vector<Sample> limits;   // limit members with value <= eps
  std::vector<std::string> tags() const;
  geometry::Hull hull(bool with_limits = true) const;
};

/// Evaluates a family at one point and caches what the epsilon ladder
/// needs: member values, refinement results and gradients.
class PointEvaluation {
 public:
  PointEvaluation(ConstraintFamily family, Vector point, Options options);

  const ConstraintFamily& family() const { return family_; }
  const Vector& point() const { return point_; }
  const std::vector<Sample>& base() const { return base_; }
  double infimum() const { return infimum_; }
  const std::string& argmin_tag() const { return argmin_tag_; }
  std::vector<std::string> violated() const;

  /// Near-active members for `eps`; throws InfeasibleError when the point
  /// is infeasible.
  ActiveSet active_set(double eps);
  /// Every member (all grid points, all listed and countable members).
  std::vector<Sample> all_members();
  /// Sets s.grad from s.member / s.param.
  void fill_grad(Sample& s) const;

 private:
  Sample refine(std::size_t start);
  double eval_at(const Vector& t) const;

  ConstraintFamily family_;
  Vector point_;
  Options opts_;
  std::vector<expr::ExprFn> exprs_;
  std::vector<Sample> base_;
  Vector width_;
  std::map<std::size_t, Sample> refined_;
  mutable std::map<std::string, Vector> grads_;
  double infimum_ = 0.0;
  std::string argmin_tag_;
  std::size_t argmin_ = 0;
};

FeasibilityReport feasibility(const Problem& prob, const Vector& x, const Options& opts);
ActiveSet active_set(const Problem& prob, const Vector& x, double eps, const Options& opts);

/// Seed for every sampling routine: SIPCERT_SEED when set, else a constant.
std::uint64_t sampling_seed();

/// Sampled lower bound on the Lipschitz modulus shared by the family members
/// on the ball B(x, radius).
double equi_lipschitz_estimate(const Problem& prob, const Vector& x, double radius, int samples,
                               const Options& opts, std::uint64_t seed = sampling_seed());

/// Same estimate for a family evaluated around `point` in its own space.
double equi_lipschitz_estimate(const ConstraintFamily& family, const Vector& point, double radius, int samples,
                               const Options& opts, std::uint64_t seed = sampling_seed());

struct NormalizedFunctional {
  std::string tag;
  Vector direction;    // a_j / |a_j|
  double infimum = 0;  // inf over A of direction^T y
};

struct AdmissibleReport {
  Vector point;                 // where the family was evaluated (g(x) with an inner map)
  int member_count = 0;
  bool zero_in_full_hull = false;
  double full_hull_distance = 0.0;
  bool admissible_style = false;  // 0 outside the hull of all gradients
  bool weak_admissible_only = false;
  int active_count = 0;
  bool zero_in_active_hull = false;
  double lipschitz = 0.0;
  std::vector<NormalizedFunctional> determination;  // Polyhedral A only
  bool determination_zero_free = false;
  std::optional<geometry::ConeInterior> cone_interior;  // Polyhedral cones only
  std::vector<std::string> assumptions;
};

AdmissibleReport admissible_diagnostics(const Problem& prob, const Vector& x, double eps, const Options& opts);

std::string format_param_tag(const Vector& t);

}  // namespace sipcert::model
