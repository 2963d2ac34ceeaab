#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace conepr {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

// ---------------------------------------------------------------------------
// Error taxonomy.  Domain violations (bad arguments, non-finite data, size
// mismatches) throw InvalidInputError; algorithmic failures that are not the
// caller's fault get their own types so callers can tell them apart.
// ---------------------------------------------------------------------------

class InvalidInputError : public std::invalid_argument {
public:
  explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

class DimensionMismatchError : public InvalidInputError {
public:
  explicit DimensionMismatchError(const std::string& what) : InvalidInputError(what) {}
};

// Iteration cap exceeded or other internal solver breakdown; distinct from a
// certified "infeasible" answer.
class SolverFailureError : public std::runtime_error {
public:
  explicit SolverFailureError(const std::string& what) : std::runtime_error(what) {}
};

// A probabilistic construction ran out of retry budget.
class ConstructionFailureError : public std::runtime_error {
public:
  explicit ConstructionFailureError(const std::string& what) : std::runtime_error(what) {}
};

// Circulant system with (numerically) vanishing spectrum; carries the indices.
class SingularCirculantError : public std::runtime_error {
public:
  SingularCirculantError(const std::string& what, std::vector<Index> indices)
      : std::runtime_error(what), vanishing_indices(std::move(indices)) {}
  std::vector<Index> vanishing_indices;
};

// Raised by detection when the measurement transcript is consistent with the
// all-zero signal and an extra certificate query confirms it.
class AmbiguousZeroError : public std::runtime_error {
public:
  explicit AmbiguousZeroError(const std::string& what) : std::runtime_error(what) {}
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* name) {
  if (!m.allFinite()) {
    throw InvalidInputError(std::string(name) + ": entries must be finite");
  }
}

// ---------------------------------------------------------------------------
// Cone generators.  A cone is the set of nonnegative combinations of the
// columns of an n x m matrix.  m == 0 is allowed and denotes the trivial
// cone {0}.  The conic rank (dimension of the linear span of the columns)
// is computed once on construction and cached.
// ---------------------------------------------------------------------------

template <typename Scalar>
int matrix_rank(const Matrix<Scalar>& X, Scalar tol = Scalar(-1));  // linalg.hpp

template <typename Scalar>
Scalar default_rank_tol(const Matrix<Scalar>& X);  // linalg.hpp

template <typename Scalar>
struct ConeGenerator {
  Matrix<Scalar> X;  // n x m, columns generate the cone
  int rank = 0;

  ConeGenerator() = default;

  explicit ConeGenerator(Matrix<Scalar> generators) : X(std::move(generators)) {
    if (X.rows() == 0) {
      throw InvalidInputError("ConeGenerator: ambient dimension must be positive");
    }
    require_finite(X, "ConeGenerator");
    rank = X.cols() == 0 ? 0 : matrix_rank<Scalar>(X, Scalar(-1));
  }

  Index ambient_dim() const { return X.rows(); }
  Index generator_count() const { return X.cols(); }
};

template <typename Scalar>
struct UnionOfCones {
  std::vector<ConeGenerator<Scalar>> cones;

  UnionOfCones() = default;

  explicit UnionOfCones(std::vector<ConeGenerator<Scalar>> members) : cones(std::move(members)) {
    if (cones.empty()) {
      throw InvalidInputError("UnionOfCones: at least one cone required");
    }
    const Index n = cones.front().ambient_dim();
    for (const auto& c : cones) {
      if (c.ambient_dim() != n) {
        throw DimensionMismatchError("UnionOfCones: cones live in different ambient dimensions");
      }
    }
  }

  Index ambient_dim() const { return cones.front().ambient_dim(); }
  int cone_count() const { return static_cast<int>(cones.size()); }
};

}  // namespace conepr
