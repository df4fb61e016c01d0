#include "sipcert/reduction.hpp"

#include <cmath>

namespace sipcert::reduction {

namespace {

struct Echelon {
  int rank = 0;
  std::vector<double> pivots;
  std::vector<int> pivot_columns;
  std::vector<Vector> kernel;  // not yet orthonormal
};

// Reduced row echelon form with complete pivoting.
Echelon eliminate(Matrix a, double tol) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  Echelon out;
  std::vector<bool> used(cols, false);
  std::vector<int> pivot_row_col;
  for (int k = 0; k < rows; ++k) {
    int bi = -1, bj = -1;
    double best = tol;
    for (int i = k; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        if (used[j]) continue;
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    a.row(k).swap(a.row(bi));
    a.row(k) /= a(k, bj);
    for (int i = 0; i < rows; ++i)
      if (i != k && a(i, bj) != 0) a.row(i) -= a(i, bj) * a.row(k);
    used[bj] = true;
    out.pivots.push_back(best);
    out.pivot_columns.push_back(bj);
    ++out.rank;
  }
  for (int f = 0; f < cols; ++f) {
    if (used[f]) continue;
    Vector v = Vector::Zero(cols);
    v(f) = 1.0;
    for (int r = 0; r < out.rank; ++r) v(out.pivot_columns[r]) = -a(r, f);
    out.kernel.push_back(v);
  }
  return out;
}

std::vector<Vector> orthonormalize(std::vector<Vector> vs) {
  std::vector<Vector> out;
  for (auto& v : vs) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : out) v -= q.dot(v) * q;
    const double n = v.norm();
    if (n > 1e-14) out.push_back(v / n);
  }
  return out;
}

}  // namespace

Matrix Jacobian::kernel() const {
  Matrix k(matrix.cols(), static_cast<int>(kernel_basis.size()));
  for (std::size_t i = 0; i < kernel_basis.size(); ++i) k.col(static_cast<int>(i)) = kernel_basis[i];
  return k;
}

Jacobian analyze_jacobian(const Matrix& j, std::optional<double> tol_rank) {
  Jacobian out;
  out.matrix = j;
  const double scale = j.size() ? j.cwiseAbs().maxCoeff() : 0.0;
  out.tol_rank = tol_rank ? *tol_rank : 1e-10 * scale;
  Echelon e = eliminate(j, out.tol_rank);
  out.rank = e.rank;
  out.pivots = e.pivots;
  out.pivot_columns = e.pivot_columns;
  out.kernel_basis = orthonormalize(std::move(e.kernel));
  if (out.rank < j.rows()) {
    Echelon left = eliminate(j.transpose(), out.tol_rank);
    Vector v = left.kernel.front();
    v /= v.norm();
    for (int i = 0; i < v.size(); ++i) {
      if (v(i) != 0) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    out.left_null = v;
  }
  return out;
}

Matrix jacobian_of(std::span<const expr::ExprFn> fns, const Vector& x, double tol_kink) {
  Matrix j(static_cast<int>(fns.size()), x.size());
  for (std::size_t i = 0; i < fns.size(); ++i) j.row(static_cast<int>(i)) = fns[i].grad(x, Vector(), tol_kink).transpose();
  return j;
}

}  // namespace sipcert::reduction
