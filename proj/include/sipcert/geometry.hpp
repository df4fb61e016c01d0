#pragma once

#include "sipcert/simplex.hpp"

#include <string>
#include <vector>

namespace sipcert::geometry {

/// Finite generator list standing for its convex hull. Tags record where each
/// generator came from (constraint index, parameter value).
struct Hull {
  std::vector<Vector> generators;
  std::vector<std::string> tags;

  Hull() = default;
  explicit Hull(std::vector<Vector> gens, std::vector<std::string> tag_list = {});

  void add(Vector g, std::string tag = {});
  int size() const { return static_cast<int>(generators.size()); }
  bool empty() const { return generators.empty(); }
  int dim() const { return generators.empty() ? 0 : static_cast<int>(generators.front().size()); }
};

/// {y : normals[j]^T y >= offsets[j] for all j}. `dim` is kept explicitly so
/// the constraint-free polyhedron (the whole space) still has a dimension.
struct Polyhedron {
  int dim = 0;
  std::vector<Vector> normals;
  std::vector<double> offsets;

  Polyhedron() = default;
  Polyhedron(int dimension, std::vector<Vector> normal_list, std::vector<double> offset_list);

  int rows() const { return static_cast<int>(normals.size()); }
  bool is_cone() const;
  bool contains(const Vector& y, double tol) const;
};

struct HullMembership {
  bool member = false;
  double distance = 0.0;  // recomputed max-norm residual of the best combination
  Vector coeffs;
};

struct SegmentMembership {
  bool member = false;
  double lambda = 0.0;
  double distance = 0.0;
  Vector coeffs;  // sums to 1 - lambda
};

struct Reduction {
  std::vector<int> indices;
  Vector coeffs;
  double residual = 0.0;
};

struct ConeInterior {
  bool nonempty = false;
  double margin = 0.0;  // optimal delta
  Vector witness;       // unit Euclidean norm when nonempty
};

/// Best max-norm approximation of `target` by a convex combination of H.
HullMembership hull_member(const Vector& target, const Hull& hull, double tol,
                           const SimplexOptions& lp = {});

/// Decides target in conv({w} u H). Among optimal combinations the one with the
/// largest weight on w is returned.
SegmentMembership segment_hull_member(const Vector& target, const Vector& w, const Hull& hull,
                                      double tol, const SimplexOptions& lp = {});

/// Shrinks a convex representation until its support is affinely independent.
Reduction caratheodory_reduce(const Vector& target, const Hull& hull, const Vector& coeffs,
                              double tol_lp = 1e-9);

/// Max-norm distance from `target` to the cone generated by `generators`
/// (nonnegative combinations); 0 when inside.
double cone_distance(const Vector& target, const Hull& generators, const SimplexOptions& lp = {});

Polyhedron recession_cone(const Polyhedron& a);

/// max delta s.t. (a_j/|a_j|)^T e >= delta, |e|_inf <= 1, delta <= 1.
ConeInterior cone_interior_nonempty(const Polyhedron& cone, double tol = 1e-8,
                                    const SimplexOptions& lp = {});

/// {y : g_i^T y >= 0} for the cone generated by the g_i. Zero generators are
/// dropped since they impose nothing.
Polyhedron dual_cone(const Hull& generators);

/// Polar {y : g_i^T y <= 0}.
Polyhedron polar_cone(const Hull& generators);

/// Generators of the closed barrier cone of A, i.e. of -(R_A)*: the negated
/// normals.
Hull barrier_cone_generators(const Polyhedron& a);

struct LinearMinimum {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Vector point;
  Vector ray;  // descent direction inside R_A when unbounded
};

/// min c^T y over y in A.
LinearMinimum minimize_over(const Polyhedron& a, const Vector& c, const SimplexOptions& lp = {});

}  // namespace sipcert::geometry
