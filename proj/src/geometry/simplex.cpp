#include "sipcert/simplex.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace sipcert::geometry {

namespace {

// Standard form: A x = b, x >= 0, b >= 0. Columns: structural (free variables
// split in two), then slacks, then artificials.
struct StandardForm {
  Matrix a;
  Vector b;
  Vector cost;
  std::vector<int> column_of_var;   // positive part column per original variable
  std::vector<int> negative_column; // -1 unless the variable is free
  int num_structural = 0;
  int num_without_artificial = 0;
  std::vector<int> initial_basis;
};

StandardForm standardize(const LinearProgram& lp) {
  StandardForm sf;
  const int m = static_cast<int>(lp.rows.size());
  int col = 0;
  sf.column_of_var.resize(lp.num_vars);
  sf.negative_column.assign(lp.num_vars, -1);
  for (int j = 0; j < lp.num_vars; ++j) {
    sf.column_of_var[j] = col++;
    if (lp.free_vars[j]) sf.negative_column[j] = col++;
  }
  sf.num_structural = col;

  std::vector<double> sign(m, 1.0);
  std::vector<Sense> sense(m);
  for (int i = 0; i < m; ++i) {
    sense[i] = lp.rows[i].sense;
    if (lp.rows[i].rhs < 0) {
      sign[i] = -1.0;
      if (sense[i] == Sense::LessEqual) sense[i] = Sense::GreaterEqual;
      else if (sense[i] == Sense::GreaterEqual) sense[i] = Sense::LessEqual;
    }
  }
  int slacks = 0;
  int artificials = 0;
  for (int i = 0; i < m; ++i) {
    if (sense[i] != Sense::Equal) ++slacks;
    if (sense[i] != Sense::LessEqual) ++artificials;
  }
  const int total = col + slacks + artificials;
  sf.num_without_artificial = col + slacks;
  sf.a = Matrix::Zero(m, total);
  sf.b = Vector::Zero(m);
  sf.cost = Vector::Zero(total);
  sf.initial_basis.assign(m, -1);

  for (int j = 0; j < lp.num_vars; ++j) {
    sf.cost(sf.column_of_var[j]) = lp.objective(j);
    if (sf.negative_column[j] >= 0) sf.cost(sf.negative_column[j]) = -lp.objective(j);
  }
  int slack_col = col;
  int art_col = col + slacks;
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    if (row.coeffs.size() != lp.num_vars) throw std::invalid_argument("LP row has wrong length");
    for (int j = 0; j < lp.num_vars; ++j) {
      const double v = sign[i] * row.coeffs(j);
      sf.a(i, sf.column_of_var[j]) = v;
      if (sf.negative_column[j] >= 0) sf.a(i, sf.negative_column[j]) = -v;
    }
    sf.b(i) = sign[i] * row.rhs;
    if (sense[i] == Sense::LessEqual) {
      sf.a(i, slack_col) = 1.0;
      sf.initial_basis[i] = slack_col++;
    } else if (sense[i] == Sense::GreaterEqual) {
      sf.a(i, slack_col++) = -1.0;
      sf.a(i, art_col) = 1.0;
      sf.initial_basis[i] = art_col++;
    } else {
      sf.a(i, art_col) = 1.0;
      sf.initial_basis[i] = art_col++;
    }
  }
  return sf;
}

class Tableau {
 public:
  Tableau(const StandardForm& sf, const SimplexOptions& opts)
      : t_(sf.a), rhs_(sf.b), basis_(sf.initial_basis), opts_(opts) {}

  // Runs Bland's rule on cost vector `c` restricted to columns [0, ncols).
  // Returns false when unbounded.
  bool optimize(const Vector& c, int ncols, int& iterations) {
    while (true) {
      if (++iterations > opts_.max_iterations) throw LpNumericalError("simplex iteration limit reached");
      const int m = static_cast<int>(basis_.size());
      int entering = -1;
      for (int j = 0; j < ncols && entering < 0; ++j) {
        if (is_basic(j)) continue;
        double reduced = c(j);
        for (int i = 0; i < m; ++i) reduced -= c(basis_[i]) * t_(i, j);
        if (reduced < -opts_.tol_pivot) entering = j;
      }
      if (entering < 0) return true;
      int leaving_row = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double aij = t_(i, entering);
        if (aij <= opts_.tol_pivot) continue;
        const double ratio = rhs_(i) / aij;
        const double slack = leaving_row < 0 ? 0.0 : 1e-15 * (1 + std::abs(best));
        if (leaving_row < 0 || ratio < best - slack ||
            (std::abs(ratio - best) <= slack && basis_[i] < basis_[leaving_row])) {
          best = ratio;
          leaving_row = i;
        }
      }
      if (leaving_row < 0) return false;
      pivot(leaving_row, entering);
    }
  }

  void pivot(int row, int col) {
    const double p = t_(row, col);
    t_.row(row) /= p;
    rhs_(row) /= p;
    for (int i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f == 0) continue;
      t_.row(i) -= f * t_.row(row);
      rhs_(i) -= f * rhs_(row);
    }
    basis_[row] = col;
  }

  // Pivot basic artificials out; rows where that is impossible are redundant
  // and get removed.
  void expel_artificials(int first_artificial) {
    for (int i = 0; i < static_cast<int>(basis_.size());) {
      if (basis_[i] < first_artificial) {
        ++i;
        continue;
      }
      int col = -1;
      double best = opts_.tol_pivot;
      for (int j = 0; j < first_artificial; ++j) {
        if (!is_basic(j) && std::abs(t_(i, j)) > best) {
          best = std::abs(t_(i, j));
          col = j;
        }
      }
      if (col >= 0) {
        pivot(i, col);
        ++i;
      } else {
        remove_row(i);
      }
    }
  }

  bool is_basic(int j) const {
    for (int b : basis_)
      if (b == j) return true;
    return false;
  }

  const std::vector<int>& basis() const { return basis_; }
  const std::vector<int>& kept_rows() const { return kept_rows_; }
  const Vector& rhs() const { return rhs_; }

  void init_rows(int m) {
    kept_rows_.resize(m);
    for (int i = 0; i < m; ++i) kept_rows_[i] = i;
  }

 private:
  void remove_row(int i) {
    const int m = static_cast<int>(t_.rows());
    Matrix t(m - 1, t_.cols());
    Vector r(m - 1);
    for (int k = 0, o = 0; k < m; ++k) {
      if (k == i) continue;
      t.row(o) = t_.row(k);
      r(o) = rhs_(k);
      ++o;
    }
    t_ = std::move(t);
    rhs_ = std::move(r);
    basis_.erase(basis_.begin() + i);
    kept_rows_.erase(kept_rows_.begin() + i);
  }

  Matrix t_;
  Vector rhs_;
  std::vector<int> basis_;
  std::vector<int> kept_rows_;
  const SimplexOptions& opts_;
};

}  // namespace

SimplexSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  if (lp.objective.size() != lp.num_vars || static_cast<int>(lp.free_vars.size()) != lp.num_vars)
    throw std::invalid_argument("LP objective/free-variable size mismatch");
  const StandardForm sf = standardize(lp);
  const int m = static_cast<int>(sf.b.size());
  const int total = static_cast<int>(sf.a.cols());
  SimplexSolution sol;

  Tableau tab(sf, options);
  tab.init_rows(m);

  if (total > sf.num_without_artificial) {
    Vector phase1 = Vector::Zero(total);
    for (int j = sf.num_without_artificial; j < total; ++j) phase1(j) = 1.0;
    tab.optimize(phase1, total, sol.iterations);
    double infeasibility = 0;
    for (std::size_t i = 0; i < tab.basis().size(); ++i)
      if (tab.basis()[i] >= sf.num_without_artificial) infeasibility += tab.rhs()(static_cast<int>(i));
    if (infeasibility > options.tol_lp * (1.0 + sf.b.lpNorm<Eigen::Infinity>())) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    tab.expel_artificials(sf.num_without_artificial);
  }

  if (!tab.optimize(sf.cost, sf.num_without_artificial, sol.iterations)) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  // Recompute the basic solution from the original standard-form data.
  const auto& basis = tab.basis();
  const auto& rows = tab.kept_rows();
  const int r = static_cast<int>(basis.size());
  Vector x = Vector::Zero(total);
  if (r > 0) {
    Matrix bmat(r, r);
    Vector rhs(r);
    for (int i = 0; i < r; ++i) {
      rhs(i) = sf.b(rows[i]);
      for (int k = 0; k < r; ++k) bmat(i, k) = sf.a(rows[i], basis[k]);
    }
    Eigen::FullPivLU<Matrix> lu(bmat);
    Vector xb = lu.isInvertible() ? Vector(lu.solve(rhs)) : Vector(tab.rhs());
    for (int k = 0; k < r; ++k) x(basis[k]) = std::max(0.0, xb(k));
  }

  sol.point = Vector::Zero(lp.num_vars);
  for (int j = 0; j < lp.num_vars; ++j) {
    double v = x(sf.column_of_var[j]);
    if (sf.negative_column[j] >= 0) v -= x(sf.negative_column[j]);
    sol.point(j) = v;
  }
  sol.objective = lp.objective.dot(sol.point);
  sol.status = LpStatus::Optimal;
  return sol;
}

}  // namespace sipcert::geometry
