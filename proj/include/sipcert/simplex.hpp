#pragma once

#include "sipcert/expr.hpp"

#include <stdexcept>
#include <vector>

namespace sipcert::geometry {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct LinearConstraint {
  Vector coeffs;
  Sense sense = Sense::Equal;
  double rhs = 0.0;
};

/// minimize objective^T x subject to the listed rows; variables are
/// nonnegative unless marked free.
struct LinearProgram {
  int num_vars = 0;
  Vector objective;
  std::vector<LinearConstraint> rows;
  std::vector<bool> free_vars;

  explicit LinearProgram(int n) : num_vars(n), objective(Vector::Zero(n)), free_vars(n, false) {}

  void add_row(Vector coeffs, Sense sense, double rhs) {
    rows.push_back({std::move(coeffs), sense, rhs});
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct SimplexSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Vector point;
  int iterations = 0;
};

struct SimplexOptions {
  double tol_lp = 1e-9;      // phase-one feasibility threshold
  double tol_pivot = 1e-11;  // smallest usable pivot / reduced cost
  int max_iterations = 200000;
};

/// Raised when the simplex cannot finish (iteration cap, singular basis).
class LpNumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense two-phase simplex with Bland's rule. After the final pivot the basic
/// solution is recomputed from the original data by an LU solve.
SimplexSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace sipcert::geometry
