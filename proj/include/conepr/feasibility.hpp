#pragma once

#include "conepr/linalg.hpp"
#include "conepr/simplex.hpp"
#include "conepr/types.hpp"

#include <map>
#include <optional>
#include <utility>

namespace conepr {

enum class FeasibilityStatus { StrictlyFeasible, Infeasible };

// Outcome of the strict-feasibility LP for M x > 0.  margin is the optimal
// value of max { t : Mx >= t*1, |x_i| <= 1 }, so it never exceeds 1 and is
// positive exactly when the open system has a solution.  The witness is
// rescaled to unit max-norm, which preserves min(M * witness) >= margin.
template <typename Scalar>
struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::Infeasible;
  std::optional<Vector<Scalar>> witness;
  Scalar margin = Scalar(0);

  bool feasible() const { return status == FeasibilityStatus::StrictlyFeasible; }
};

template <typename Scalar>
FeasibilityResult<Scalar> strict_feasible(const Matrix<Scalar>& M,
                                          Scalar strict_tol = Scalar(1e-8)) {
  require_finite(M, "strict_feasible");
  if (M.rows() == 0) {
    throw InvalidInputError("strict_feasible: system has no rows");
  }
  FeasibilityResult<Scalar> out;
  if (M.cols() == 0) {
    return out;  // no variables: Mx > 0 cannot hold
  }
  const auto lp = detail::solve_margin_lp(M);
  out.margin = lp.t;
  if (lp.t > strict_tol) {
    out.status = FeasibilityStatus::StrictlyFeasible;
    Vector<Scalar> w = lp.x;
    const Scalar winf = w.template lpNorm<Eigen::Infinity>();
    if (winf > Scalar(0)) {
      w /= winf;
    }
    out.witness = std::move(w);
  }
  return out;
}

// A cone meets the open positive orthant in coefficient space exactly when
// X^T x > 0 is strictly solvable; that intersection is what licenses the
// one-sided measurements everything downstream relies on.  Trivial cones
// (no generators) do not qualify, by convention.
template <typename Scalar>
FeasibilityResult<Scalar> overlap_certificate(const ConeGenerator<Scalar>& cone,
                                              Scalar strict_tol = Scalar(1e-8)) {
  if (cone.generator_count() == 0) {
    return FeasibilityResult<Scalar>{};
  }
  return strict_feasible<Scalar>(cone.X.transpose(), strict_tol);
}

template <typename Scalar>
bool has_overlap_property(const ConeGenerator<Scalar>& cone, Scalar strict_tol = Scalar(1e-8)) {
  return overlap_certificate(cone, strict_tol).feasible();
}

// One-sided separator for an ordered cone pair: strictly positive against
// every generator of one cone, exactly zero on the span of the other.
template <typename Scalar>
struct PairDetector {
  Vector<Scalar> g;
  int positive_cone = 0;
  int null_cone = 0;
  Scalar min_positive_margin = Scalar(0);  // min entry of X_pos^T g
};

namespace detail {

template <typename Scalar>
std::optional<PairDetector<Scalar>> try_detector_branch(const ConeGenerator<Scalar>& pos,
                                                        const ConeGenerator<Scalar>& nul,
                                                        int pos_index, int nul_index) {
  if (pos.generator_count() == 0) {
    return std::nullopt;  // nothing to be positive against
  }
  Matrix<Scalar> N = nul.generator_count() == 0
                         ? Matrix<Scalar>::Identity(nul.ambient_dim(), nul.ambient_dim())
                         : null_space_basis<Scalar>(nul.X);
  if (N.cols() == 0) {
    return std::nullopt;  // null cone spans everything
  }
  // Search within the orthogonal complement of the null cone's span.
  const Matrix<Scalar> M = pos.X.transpose() * N;
  const auto fr = strict_feasible<Scalar>(M);
  if (!fr.feasible()) {
    return std::nullopt;
  }
  Vector<Scalar> g = N * (*fr.witness);
  g /= g.norm();

  PairDetector<Scalar> det;
  det.g = std::move(g);
  det.positive_cone = pos_index;
  det.null_cone = nul_index;
  det.min_positive_margin = (pos.X.transpose() * det.g).minCoeff();

  // Certify both sides before handing the detector out.
  if (det.min_positive_margin <= Scalar(0)) {
    return std::nullopt;
  }
  if (nul.generator_count() > 0) {
    const Vector<Scalar> resid = nul.X.transpose() * det.g;
    for (Index j = 0; j < resid.size(); ++j) {
      const Scalar scale = nul.X.col(j).norm();
      if (std::abs(resid[j]) > Scalar(1e-9) * std::max(scale, Scalar(1))) {
        return std::nullopt;
      }
    }
  }
  return det;
}

}  // namespace detail

// Try both orientations for the pair (first, second): positive on the first
// and vanishing on the second, then the reverse.  The first-positive branch
// is attempted first, so results are deterministic.
template <typename Scalar>
std::optional<PairDetector<Scalar>> pair_detector(const ConeGenerator<Scalar>& first,
                                                  const ConeGenerator<Scalar>& second,
                                                  int first_index = 0, int second_index = 1) {
  if (first.ambient_dim() != second.ambient_dim()) {
    throw DimensionMismatchError("pair_detector: ambient dimensions differ");
  }
  if (auto det = detail::try_detector_branch(first, second, first_index, second_index)) {
    return det;
  }
  return detail::try_detector_branch(second, first, second_index, first_index);
}

// All pairwise detectors of a union, keyed by the (low, high) index pair.
template <typename Scalar>
struct DetectorBank {
  Index ambient_dim = 0;
  int cone_count = 0;
  std::map<std::pair<int, int>, PairDetector<Scalar>> detectors;

  bool has(int a, int b) const {
    return detectors.count({std::min(a, b), std::max(a, b)}) > 0;
  }

  const PairDetector<Scalar>& pair(int a, int b) const {
    auto it = detectors.find({std::min(a, b), std::max(a, b)});
    if (it == detectors.end()) {
      throw InvalidInputError("DetectorBank: no detector stored for pair (" +
                              std::to_string(a) + ", " + std::to_string(b) + ")");
    }
    return it->second;
  }
};

template <typename Scalar>
struct DetectabilityReport {
  bool detectable = false;
  std::optional<DetectorBank<Scalar>> bank;
  std::optional<std::pair<int, int>> failing_pair;
};

// A union is detectable when every unordered pair admits a detector.  Stops
// at the first failing pair; on success returns the full bank.
template <typename Scalar>
DetectabilityReport<Scalar> detectability_check(const UnionOfCones<Scalar>& u) {
  const int L = u.cone_count();
  if (L < 2) {
    throw InvalidInputError("detectability_check: need at least two cones");
  }
  DetectorBank<Scalar> bank;
  bank.ambient_dim = u.ambient_dim();
  bank.cone_count = L;
  for (int l = 0; l < L; ++l) {
    for (int k = l + 1; k < L; ++k) {
      auto det = pair_detector(u.cones[l], u.cones[k], l, k);
      if (!det) {
        DetectabilityReport<Scalar> rep;
        rep.failing_pair = {l, k};
        return rep;
      }
      bank.detectors.emplace(std::make_pair(l, k), std::move(*det));
    }
  }
  DetectabilityReport<Scalar> rep;
  rep.detectable = true;
  rep.bank = std::move(bank);
  return rep;
}

}  // namespace conepr
