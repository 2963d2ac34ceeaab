#pragma once

#include "conepr/types.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace conepr {

// Default rank tolerance: 64 x eps x (largest column 2-norm) x max(rows,
// cols).  The factor over machine precision absorbs Householder rounding on
// exactly dependent columns, while staying far below genuine structure:
// the polynomial-decay generator families carry directions that shrink
// like k^-4, reaching ~1e-10 by dimension 256, and those must count
// toward the rank.  A looser (say 1e-9-relative) cutoff would silently
// truncate them and change the measurement count.
template <typename Scalar>
Scalar default_rank_tol(const Matrix<Scalar>& X) {
  if (X.cols() == 0 || X.rows() == 0) {
    return Scalar(0);
  }
  const Scalar max_col_norm = X.colwise().norm().maxCoeff();
  return Scalar(64) * std::numeric_limits<Scalar>::epsilon() * max_col_norm *
         Scalar(std::max(X.rows(), X.cols()));
}

// Numerical rank via column-pivoted Householder QR: the number of diagonal
// entries of R exceeding tol in magnitude.  CPQR sorts |R(i,i)| in
// decreasing order, so this is a count of dominant pivots.  tol < 0 picks
// the default above.
template <typename Scalar>
int matrix_rank(const Matrix<Scalar>& X, Scalar tol) {
  require_finite(X, "matrix_rank");
  if (X.rows() == 0 || X.cols() == 0) {
    return 0;
  }
  if (tol < Scalar(0)) {
    tol = default_rank_tol(X);
  }
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(X);
  const auto& R = qr.matrixQR();
  const Index k = std::min(X.rows(), X.cols());
  int r = 0;
  for (Index i = 0; i < k; ++i) {
    if (std::abs(R(i, i)) > tol) {
      ++r;
    }
  }
  return r;
}

// Orthonormal basis (columns) of the null space of X^T, i.e. the orthogonal
// complement in R^n of the column space of the n x m input.  Returns an
// n x (n - rank) matrix; zero columns when X has full row span.
template <typename Scalar>
Matrix<Scalar> null_space_basis(const Matrix<Scalar>& X, Scalar tol = Scalar(-1)) {
  require_finite(X, "null_space_basis");
  const Index n = X.rows();
  if (n == 0) {
    throw InvalidInputError("null_space_basis: empty input");
  }
  if (X.cols() == 0) {
    return Matrix<Scalar>::Identity(n, n);
  }
  if (tol < Scalar(0)) {
    tol = default_rank_tol(X);
  }
  const int r = matrix_rank(X, tol);
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(X);
  Matrix<Scalar> Q = qr.householderQ();
  return Q.rightCols(n - r);
}

// Row-orthonormal map onto the span of a generator's columns.  project()
// takes ambient vectors to span coordinates; lift() is the adjoint, an
// isometry back onto the span.  When the span is all of R^n the map is the
// exact identity -- callers rely on that to skip the change of basis.
template <typename Scalar>
struct Isometry {
  Matrix<Scalar> map;  // gamma x n, rows orthonormal
  bool is_identity = false;

  Index gamma() const { return map.rows(); }
  Index ambient_dim() const { return map.cols(); }

  Vector<Scalar> project(const Vector<Scalar>& v) const {
    if (v.size() != map.cols()) {
      throw DimensionMismatchError("Isometry::project: size mismatch");
    }
    return is_identity ? v : Vector<Scalar>(map * v);
  }

  Vector<Scalar> lift(const Vector<Scalar>& v) const {
    if (v.size() != map.rows()) {
      throw DimensionMismatchError("Isometry::lift: size mismatch");
    }
    return is_identity ? v : Vector<Scalar>(map.transpose() * v);
  }

  Matrix<Scalar> project_cols(const Matrix<Scalar>& M) const {
    if (M.rows() != map.cols()) {
      throw DimensionMismatchError("Isometry::project_cols: size mismatch");
    }
    return is_identity ? M : Matrix<Scalar>(map * M);
  }
};

template <typename Scalar>
Isometry<Scalar> span_isometry(const Matrix<Scalar>& X, Scalar tol = Scalar(-1)) {
  require_finite(X, "span_isometry");
  const Index n = X.rows();
  if (n == 0 || X.cols() == 0) {
    throw InvalidInputError("span_isometry: empty input");
  }
  if (tol < Scalar(0)) {
    tol = default_rank_tol(X);
  }
  const int r = matrix_rank(X, tol);
  if (r == 0) {
    throw InvalidInputError("span_isometry: zero matrix has no span to map onto");
  }
  Isometry<Scalar> iso;
  if (r == static_cast<int>(n)) {
    iso.map = Matrix<Scalar>::Identity(n, n);
    iso.is_identity = true;
    return iso;
  }
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(X);
  Matrix<Scalar> Q = qr.householderQ();
  iso.map = Q.leftCols(r).transpose();
  iso.is_identity = false;
  return iso;
}

template <typename Scalar>
struct LeastSquaresSolution {
  Vector<Scalar> solution;
  bool rank_deficient = false;
};

// Least-squares solve of X^T p = b for an n x m generator X and b in R^m.
// Full column rank of X^T gives the unique minimiser; otherwise the
// minimum-norm solution, with the deficiency flagged.
template <typename Scalar>
LeastSquaresSolution<Scalar> least_squares_solve_ex(const Matrix<Scalar>& X,
                                                    const Vector<Scalar>& b,
                                                    Scalar tol = Scalar(-1)) {
  require_finite(X, "least_squares_solve");
  require_finite(b, "least_squares_solve");
  if (X.cols() != b.size()) {
    throw DimensionMismatchError("least_squares_solve: X has " + std::to_string(X.cols()) +
                                 " columns but b has " + std::to_string(b.size()) + " entries");
  }
  if (tol < Scalar(0)) {
    tol = default_rank_tol(X);
  }
  // Complete orthogonal decomposition returns the minimum-norm least-squares
  // solution in the rank-deficient case and the unique one otherwise.
  // Eigen thresholds pivots relative to the largest one, which for CPQR is
  // the largest column norm of the decomposed matrix.
  const Scalar pivot_scale = X.rowwise().norm().maxCoeff();
  Eigen::CompleteOrthogonalDecomposition<Matrix<Scalar>> cod(X.transpose());
  cod.setThreshold(tol / std::max(pivot_scale, Scalar(1e-300)));
  LeastSquaresSolution<Scalar> out;
  out.solution = cod.solve(b);
  out.rank_deficient = cod.rank() < std::min(X.rows(), X.cols());
  return out;
}

template <typename Scalar>
Vector<Scalar> least_squares_solve(const Matrix<Scalar>& X, const Vector<Scalar>& b,
                                   Scalar tol = Scalar(-1)) {
  return least_squares_solve_ex(X, b, tol).solution;
}

}  // namespace conepr
