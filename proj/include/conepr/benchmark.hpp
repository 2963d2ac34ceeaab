#pragma once

// The two-cone benchmark family used by the experiment harness and the
// regression suite.  Cone 1 has 2n-1 generators built from a sign-flip
// family with cubically decaying entries plus fixed pairwise combinations;
// cone 2 is a rank-2 alternating-sign family.  The pair admits a closed-form
// detector g = (1, 2, 0, ..., 0) and interior point q1 = e1, so experiments
// can bypass the LP search at large n.

#include "conepr/rng.hpp"
#include "conepr/types.hpp"

#include <cmath>

namespace conepr {

template <typename Scalar>
struct BenchmarkUnion {
  Matrix<Scalar> X1;   // n x (2n-1)
  Matrix<Scalar> X2;   // n x n
  Vector<Scalar> g;    // detector: zero on cone 2, strictly positive on cone 1
  Vector<Scalar> q1;   // interior point of cone 1's coefficient overlap
  Scalar delta = Scalar(0.0542);  // validated spacing for the measurement design
};

template <typename Scalar>
BenchmarkUnion<Scalar> make_benchmark_union(Index n) {
  if (n < 3) {
    // The second family needs at least one alternating row beyond its two
    // fixed rows, so the construction starts at n = 3.
    throw InvalidInputError("make_benchmark_union: n must be at least 3");
  }
  const Scalar a = Scalar(0.115);
  const Scalar b = Scalar(0.8850);

  BenchmarkUnion<Scalar> u;
  u.X1.resize(n, 2 * n - 1);
  u.X2.resize(n, n);

  Vector<Scalar> base(n);
  base[0] = Scalar(1);
  for (Index i = 1; i < n; ++i) {
    const Scalar l = Scalar(i + 1);
    const Scalar sign = (i % 2 == 0) ? Scalar(1) : Scalar(-1);
    base[i] = sign / (Scalar(3) * l * l * l * (l - Scalar(1)));
  }

  u.X1.col(0) = base;
  for (Index k = 1; k < n; ++k) {
    u.X1.col(k) = base;
    u.X1(k, k) = -base[k];
  }
  for (Index j = 0; j < n - 1; ++j) {
    u.X1.col(n + j) = b * u.X1.col(0) - a * u.X1.col(j + 1);
  }

  for (Index j = 0; j < n; ++j) {
    u.X2(0, j) = Scalar(2);
    u.X2(1, j) = Scalar(-1);
    for (Index i = 2; i < n; ++i) {
      u.X2(i, j) = ((i + j) % 2 == 0) ? Scalar(1) : Scalar(-1);
    }
  }

  u.g = Vector<Scalar>::Zero(n);
  u.g[0] = Scalar(1);
  u.g[1] = Scalar(2);

  u.q1 = Vector<Scalar>::Zero(n);
  u.q1[0] = Scalar(1);
  return u;
}

// A target in the chosen cone with coefficients drawn uniformly from
// (0, 0.01], as the experiments prescribe.
template <typename Scalar>
Vector<Scalar> random_cone_target(const Matrix<Scalar>& X, Rng& rng,
                                  Vector<Scalar>* coefficients = nullptr) {
  Vector<Scalar> theta(X.cols());
  for (Index i = 0; i < theta.size(); ++i) {
    theta[i] = Scalar(rng.uniform(0.0, 0.01));
  }
  if (coefficients != nullptr) {
    *coefficients = theta;
  }
  return X * theta;
}

}  // namespace conepr
