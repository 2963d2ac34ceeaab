#pragma once

#include "conepr/types.hpp"

#include <algorithm>
#include <string>

namespace conepr::detail {

// Margin LP in standard form:
//
//   maximize t  subject to  Mx >= t*1,  -1 <= x_i <= 1,  0 <= t <= 1.
//
// Substituting x = xp - xm with xp, xm in [0,1]^n gives equality rows
// (after sign normalization so the initial slack basis has +1 pivots and
// zero right-hand sides)
//
//   -M xp + M xm + t + s_i = 0      (surplus s for the margin rows)
//    xp_j + w_j  = 1                (upper bounds)
//    xm_j + ww_j = 1
//    t + wt = 1
//
// The all-slack basis is feasible (degenerate at the margin rows), so no
// phase-1 is needed; t >= 0 loses nothing because t = 0, x = 0 is always
// admissible.  Bland's rule keeps the heavily degenerate start from
// cycling, at an iteration cap of 50 x (rows + cols).
template <typename Scalar>
struct MarginLpResult {
  Scalar t = Scalar(0);       // optimal margin
  Vector<Scalar> x;           // attaining point, entries in [-1, 1]
  int iterations = 0;
};

template <typename Scalar>
MarginLpResult<Scalar> solve_margin_lp(const Matrix<Scalar>& M) {
  const Index m = M.rows();
  const Index n = M.cols();
  const Index t_col = 2 * n;
  const Index num_vars = 4 * n + 2 + m;
  const Index num_rows = m + 2 * n + 1;

  Matrix<Scalar> T = Matrix<Scalar>::Zero(num_rows + 1, num_vars + 1);
  std::vector<Index> basis(num_rows);

  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      T(i, j) = -M(i, j);
      T(i, n + j) = M(i, j);
    }
    T(i, t_col) = Scalar(1);
    T(i, 2 * n + 1 + i) = Scalar(1);  // s_i
    basis[i] = 2 * n + 1 + i;
  }
  const Index slack0 = 2 * n + 1 + m;
  for (Index j = 0; j < n; ++j) {
    T(m + j, j) = Scalar(1);
    T(m + j, slack0 + j) = Scalar(1);
    T(m + j, num_vars) = Scalar(1);
    basis[m + j] = slack0 + j;

    T(m + n + j, n + j) = Scalar(1);
    T(m + n + j, slack0 + n + j) = Scalar(1);
    T(m + n + j, num_vars) = Scalar(1);
    basis[m + n + j] = slack0 + n + j;
  }
  T(m + 2 * n, t_col) = Scalar(1);
  T(m + 2 * n, slack0 + 2 * n) = Scalar(1);
  T(m + 2 * n, num_vars) = Scalar(1);
  basis[m + 2 * n] = slack0 + 2 * n;

  // Objective row holds reduced costs for "maximize t".
  T(num_rows, t_col) = Scalar(1);

  const Scalar cost_eps = Scalar(1e-9);
  const Scalar pivot_eps = Scalar(1e-11);
  const int iter_cap = 50 * static_cast<int>(num_rows + num_vars);

  int iter = 0;
  for (; iter < iter_cap; ++iter) {
    // Bland: entering variable is the lowest index with positive reduced cost.
    Index enter = -1;
    for (Index j = 0; j < num_vars; ++j) {
      if (T(num_rows, j) > cost_eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) {
      break;  // optimal
    }
    // Ratio test; ties broken by the smallest basic variable index.
    Index leave = -1;
    Scalar best_ratio = Scalar(0);
    for (Index i = 0; i < num_rows; ++i) {
      if (T(i, enter) > pivot_eps) {
        const Scalar ratio = T(i, num_vars) / T(i, enter);
        if (leave < 0 || ratio < best_ratio - pivot_eps ||
            (ratio < best_ratio + pivot_eps && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      throw SolverFailureError("margin LP: unbounded direction (should be impossible)");
    }
    T.row(leave) /= T(leave, enter);
    for (Index i = 0; i <= num_rows; ++i) {
      if (i != leave && T(i, enter) != Scalar(0)) {
        T.row(i) -= T(i, enter) * T.row(leave);
      }
    }
    basis[leave] = enter;
  }
  if (iter >= iter_cap) {
    throw SolverFailureError("margin LP: iteration cap " + std::to_string(iter_cap) +
                             " exceeded");
  }

  Vector<Scalar> vals = Vector<Scalar>::Zero(num_vars);
  for (Index i = 0; i < num_rows; ++i) {
    vals[basis[i]] = T(i, num_vars);
  }
  MarginLpResult<Scalar> out;
  out.t = vals[t_col];
  out.x = vals.head(n) - vals.segment(n, n);
  out.iterations = iter;
  return out;
}

}  // namespace conepr::detail
