#pragma once

#include "conepr/feasibility.hpp"
#include "conepr/linalg.hpp"
#include "conepr/rng.hpp"
#include "conepr/spectral.hpp"
#include "conepr/types.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace conepr {

// An interior anchor for a full-row-rank generator Y (gamma x m): strictly
// positive against every generator and with full spectral support, so the
// circulant system it induces is invertible.
template <typename Scalar>
struct AnchorVector {
  Vector<Scalar> p;
  Scalar positivity_margin = Scalar(0);  // min entry of Y^T p
  int support = 0;                       // dft_support(p)
};

// Strictly positive functional for the cone's coefficient system, found by
// the margin LP.  Throws when the cone lacks the overlap property.
template <typename Scalar>
Vector<Scalar> find_interior_point(const Matrix<Scalar>& Y, Scalar strict_tol = Scalar(1e-8)) {
  require_finite(Y, "find_interior_point");
  if (Y.rows() == 0 || Y.cols() == 0) {
    throw InvalidInputError("find_interior_point: empty generator");
  }
  const auto fr = strict_feasible<Scalar>(Matrix<Scalar>(Y.transpose()), strict_tol);
  if (!fr.feasible()) {
    throw InvalidInputError(
        "find_interior_point: no strictly positive functional exists (overlap property fails)");
  }
  return *fr.witness;
}

// Given one interior value profile z1 = Y^T q1 > 0, produce gamma vectors
// a_1, ..., a_gamma whose profiles Y^T a_k are all strictly positive and
// jointly independent.  a_1 reproduces z1 exactly; the others perturb z1 on
// a pivoted basis column set J of Y, with the perturbation scaled so the
// rows outside J keep a margin of at least half their z1 value.
template <typename Scalar>
std::vector<Vector<Scalar>> extend_to_independent_family(const Matrix<Scalar>& Y,
                                                         const Vector<Scalar>& z1, Rng& rng) {
  require_finite(Y, "extend_to_independent_family");
  require_finite(z1, "extend_to_independent_family");
  const Index gamma = Y.rows();
  const Index m = Y.cols();
  if (m != z1.size()) {
    throw DimensionMismatchError("extend_to_independent_family: z1 length mismatch");
  }
  if (z1.minCoeff() <= Scalar(0)) {
    throw InvalidInputError("extend_to_independent_family: z1 must be strictly positive");
  }
  if (matrix_rank<Scalar>(Y) != static_cast<int>(gamma)) {
    throw InvalidInputError("extend_to_independent_family: Y must have full row rank");
  }

  const auto ls = least_squares_solve_ex<Scalar>(Y, z1);
  const Scalar scale = std::max(Scalar(1), z1.template lpNorm<Eigen::Infinity>());
  if ((Y.transpose() * ls.solution - z1).template lpNorm<Eigen::Infinity>() >
      Scalar(1e-8) * scale) {
    throw InvalidInputError("extend_to_independent_family: z1 is not in the row space of Y");
  }
  std::vector<Vector<Scalar>> family;
  family.push_back(ls.solution);
  if (gamma == 1) {
    return family;
  }

  // Pivoted basis columns of Y; the system restricted to them is square and
  // well conditioned among all column choices.
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(Y);
  const auto& perm = qr.colsPermutation().indices();
  std::vector<Index> basis_cols(perm.data(), perm.data() + gamma);
  std::vector<char> in_basis(static_cast<std::size_t>(m), 0);
  for (Index j : basis_cols) in_basis[static_cast<std::size_t>(j)] = 1;

  Matrix<Scalar> YJ(gamma, gamma);
  Vector<Scalar> z1J(gamma);
  for (Index c = 0; c < gamma; ++c) {
    YJ.col(c) = Y.col(basis_cols[static_cast<std::size_t>(c)]);
    z1J[c] = z1[basis_cols[static_cast<std::size_t>(c)]];
  }
  const Eigen::PartialPivLU<Matrix<Scalar>> yjt_lu(Matrix<Scalar>(YJ.transpose()));

  // Safety bound for the off-basis rows: a perturbation of sup-norm below
  // min z1 / ||Y_extra^T||_inf cannot push any of them to zero, and half of
  // that keeps a comfortable margin.
  Scalar bound = std::numeric_limits<Scalar>::infinity();
  if (m > gamma) {
    Scalar min_extra = std::numeric_limits<Scalar>::infinity();
    Scalar max_row_l1 = Scalar(0);
    for (Index j = 0; j < m; ++j) {
      if (!in_basis[static_cast<std::size_t>(j)]) {
        min_extra = std::min(min_extra, z1[j]);
        max_row_l1 = std::max(max_row_l1, Y.col(j).template lpNorm<1>());
      }
    }
    bound = min_extra / max_row_l1;
  }

  for (int attempt = 0; attempt < 20; ++attempt) {
    std::vector<Vector<Scalar>> candidate = {family[0]};
    for (Index k = 1; k < gamma; ++k) {
      Vector<Scalar> g(gamma);
      for (Index i = 0; i < gamma; ++i) g[i] = Scalar(rng.uniform01());
      Vector<Scalar> a = yjt_lu.solve(Vector<Scalar>(z1J + g));
      if (std::isfinite(bound)) {
        const Vector<Scalar> shift = yjt_lu.solve(g);
        const Scalar c = shift.template lpNorm<Eigen::Infinity>();
        if (c > bound / Scalar(2)) {
          g *= bound / (Scalar(2) * c);
          a = yjt_lu.solve(Vector<Scalar>(z1J + g));
        }
      }
      candidate.push_back(std::move(a));
    }
    Matrix<Scalar> A(gamma, gamma);
    bool positive = true;
    for (Index k = 0; k < gamma; ++k) {
      A.col(k) = candidate[static_cast<std::size_t>(k)];
      if ((Y.transpose() * A.col(k)).minCoeff() <= Scalar(0)) {
        positive = false;
        break;
      }
    }
    if (positive && matrix_rank<Scalar>(A) == static_cast<int>(gamma)) {
      return candidate;
    }
  }
  throw ConstructionFailureError(
      "extend_to_independent_family: no valid family after 20 resamples");
}

// Turn an interior point into an anchor with full spectral support by
// repeatedly mixing in family members.  Each step picks the candidate that
// newly covers the most missing frequencies and weights the current iterate
// so that no already-covered frequency can cancel: with
// nu = 2 max_l |a_hat_l / p_hat_l| + 1 over covered frequencies l, the
// combination nu*p + a keeps them all and gains the candidate's support.
// Positivity survives because both terms have positive profiles.
template <typename Scalar>
AnchorVector<Scalar> full_support_anchor(const Matrix<Scalar>& Y, const Vector<Scalar>& q1,
                                         Rng& rng, std::vector<int>* support_trace = nullptr) {
  require_finite(Y, "full_support_anchor");
  require_finite(q1, "full_support_anchor");
  const Index gamma = Y.rows();
  if (q1.size() != gamma) {
    throw DimensionMismatchError("full_support_anchor: q1 must live in the span coordinates");
  }
  const Vector<Scalar> profile = Y.transpose() * q1;
  if (profile.minCoeff() <= Scalar(0)) {
    throw InvalidInputError("full_support_anchor: q1 is not strictly interior");
  }

  const Scalar support_tol = Scalar(1e-8);
  auto support_set = [&](const Vector<Scalar>& v) {
    const ComplexVector<Scalar> spec = dft<Scalar>(v);
    const Scalar max_mod = spec.cwiseAbs().maxCoeff();
    std::vector<char> s(static_cast<std::size_t>(gamma), 0);
    for (Index k = 0; k < gamma; ++k) {
      if (std::abs(spec[k]) > support_tol * max_mod) s[static_cast<std::size_t>(k)] = 1;
    }
    return s;
  };
  auto count = [](const std::vector<char>& s) {
    return static_cast<int>(std::count(s.begin(), s.end(), char(1)));
  };

  AnchorVector<Scalar> out;
  {
    const auto s0 = support_set(q1);
    if (support_trace != nullptr) {
      support_trace->clear();
      support_trace->push_back(count(s0));
    }
    if (count(s0) == static_cast<int>(gamma)) {
      out.p = q1;
      out.positivity_margin = profile.minCoeff();
      out.support = static_cast<int>(gamma);
      return out;
    }
  }

  const Vector<Scalar> z1 = profile;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const auto family = extend_to_independent_family<Scalar>(Y, z1, rng);
    Vector<Scalar> p = q1;
    std::vector<char> supp = support_set(p);
    if (support_trace != nullptr) {
      support_trace->clear();
      support_trace->push_back(count(supp));
    }
    bool failed = false;
    for (Index step = 0; step < gamma && count(supp) < static_cast<int>(gamma); ++step) {
      const ComplexVector<Scalar> ph = dft<Scalar>(p);
      int best_gain = 0;
      std::size_t best_idx = 0;
      std::vector<char> best_supp;
      for (std::size_t j = 1; j < family.size(); ++j) {
        const auto aj_supp = support_set(family[j]);
        int gain = 0;
        for (Index k = 0; k < gamma; ++k) {
          if (aj_supp[static_cast<std::size_t>(k)] && !supp[static_cast<std::size_t>(k)]) ++gain;
        }
        if (gain > best_gain) {
          best_gain = gain;
          best_idx = j;
          best_supp = aj_supp;
        }
      }
      if (best_gain == 0) {
        failed = true;
        break;
      }
      const ComplexVector<Scalar> ah = dft<Scalar>(family[best_idx]);
      Scalar ratio = Scalar(0);
      for (Index k = 0; k < gamma; ++k) {
        if (supp[static_cast<std::size_t>(k)]) {
          ratio = std::max(ratio, std::abs(ah[k]) / std::abs(ph[k]));
        }
      }
      const Scalar nu = Scalar(2) * ratio + Scalar(1);
      p = nu * p + family[best_idx];
      p /= p.template lpNorm<Eigen::Infinity>();
      for (Index k = 0; k < gamma; ++k) {
        supp[static_cast<std::size_t>(k)] =
            supp[static_cast<std::size_t>(k)] || best_supp[static_cast<std::size_t>(k)];
      }
      const auto measured = support_set(p);
      bool covers = true;
      for (Index k = 0; k < gamma; ++k) {
        if (supp[static_cast<std::size_t>(k)] && !measured[static_cast<std::size_t>(k)]) {
          covers = false;
          break;
        }
      }
      if (!covers) {
        failed = true;  // cancellation crossed the support threshold; resample
        break;
      }
      supp = measured;  // keep any frequencies gained beyond the prediction
      if (support_trace != nullptr) {
        support_trace->push_back(count(supp));
      }
    }
    const Vector<Scalar> final_profile = Y.transpose() * p;
    if (!failed && count(support_set(p)) == static_cast<int>(gamma) &&
        final_profile.minCoeff() > Scalar(0)) {
      out.p = p;
      out.positivity_margin = final_profile.minCoeff();
      out.support = static_cast<int>(gamma);
      return out;
    }
  }
  throw ConstructionFailureError("full_support_anchor: support completion failed after retries");
}

}  // namespace conepr
