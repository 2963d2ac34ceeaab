#pragma once

#include "conepr/anchor.hpp"
#include "conepr/linalg.hpp"
#include "conepr/spectral.hpp"
#include "conepr/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conepr {

// A complete one-sided measurement design for a single cone: the change of
// basis onto the cone's span, the anchor generating the circulant structure,
// the spacings delta_k, and the ambient measurement vectors
//   f_1 = lift(anchor),   f_k = lift(delta_k * anchor + row_k)
// where row_k is the k-th cyclic shift of the anchor.  gamma measurements
// suffice because the span has dimension gamma.
template <typename Scalar>
struct MeasurementEnsemble {
  std::string cone_ref;
  Isometry<Scalar> iso;     // gamma x n
  Vector<Scalar> anchor;    // in span coordinates, full spectral support
  Vector<Scalar> deltas;    // gamma - 1 positive spacings (delta_2 .. delta_gamma)
  Matrix<Scalar> vectors;   // n x gamma, columns f_1 .. f_gamma
  Index gamma = 0;
};

// Sufficient spacing for one shifted row: any delta above
// ||row||_2 * max_j ||y_j||_2 / min_j <y_j, anchor> keeps every measurement
// of every generator strictly positive.  The denominator is the anchor's
// positivity margin, so the bound grows as the anchor flattens.
template <typename Scalar>
Scalar delta_bound(const Matrix<Scalar>& Y, const Vector<Scalar>& anchor,
                   const Vector<Scalar>& row) {
  require_finite(Y, "delta_bound");
  require_finite(anchor, "delta_bound");
  require_finite(row, "delta_bound");
  const Scalar kappa_min = (Y.transpose() * anchor).minCoeff();
  if (kappa_min <= Scalar(0)) {
    throw InvalidInputError("delta_bound: anchor is not strictly positive on the generators");
  }
  const Scalar max_gen_norm = Y.colwise().norm().maxCoeff();
  return row.norm() * max_gen_norm / kappa_min;
}

// Build the ensemble for one cone.  q1, when given, must certify the
// overlap property (X^T q1 > 0); otherwise an interior point is found by
// the margin LP.  delta_override replaces every default spacing
// (1.01 x bound) by a fixed value, which is validated against the
// positivity requirement before acceptance.
template <typename Scalar>
MeasurementEnsemble<Scalar> design_ensemble(
    const ConeGenerator<Scalar>& cone,
    const std::optional<Vector<Scalar>>& q1 = std::nullopt,
    const std::optional<Scalar>& delta_override = std::nullopt, std::uint64_t seed = 0,
    std::string cone_ref = {}) {
  const Index n = cone.ambient_dim();
  if (cone.generator_count() == 0 || cone.rank == 0) {
    throw InvalidInputError("design_ensemble: cone has no usable generators");
  }
  if (delta_override && *delta_override <= Scalar(0)) {
    throw InvalidInputError("design_ensemble: delta_override must be positive");
  }

  MeasurementEnsemble<Scalar> E;
  E.cone_ref = std::move(cone_ref);
  E.iso = span_isometry<Scalar>(cone.X);
  E.gamma = E.iso.gamma();
  const Matrix<Scalar> Y = E.iso.project_cols(cone.X);

  Vector<Scalar> q1_span;
  if (q1) {
    if (q1->size() != n) {
      throw DimensionMismatchError("design_ensemble: q1 has wrong dimension");
    }
    if ((cone.X.transpose() * (*q1)).minCoeff() <= Scalar(0)) {
      throw InvalidInputError("design_ensemble: supplied q1 is not strictly interior");
    }
    q1_span = E.iso.project(*q1);
  } else {
    // The LP witness lives in ambient space; its projection keeps the same
    // measurement profile because the generators span the range of lift.
    q1_span = E.iso.project(find_interior_point<Scalar>(cone.X));
  }

  Rng rng(seed);
  const auto anchor = full_support_anchor<Scalar>(Y, q1_span, rng);
  E.anchor = anchor.p;

  const Matrix<Scalar> rows = circulant_rows<Scalar>(E.anchor);
  E.deltas.resize(E.gamma > 0 ? E.gamma - 1 : 0);
  for (Index k = 1; k < E.gamma; ++k) {
    if (delta_override) {
      E.deltas[k - 1] = *delta_override;
    } else {
      const Scalar bound = delta_bound<Scalar>(Y, E.anchor, Vector<Scalar>(rows.row(k)));
      E.deltas[k - 1] = bound > Scalar(0) ? Scalar(1.01) * bound : Scalar(1);
    }
  }

  E.vectors.resize(n, E.gamma);
  E.vectors.col(0) = E.iso.lift(E.anchor);
  for (Index k = 1; k < E.gamma; ++k) {
    const Vector<Scalar> span_vec = E.deltas[k - 1] * E.anchor + rows.row(k).transpose();
    E.vectors.col(k) = E.iso.lift(span_vec);
  }

  // Every measurement of every generator must end up strictly positive;
  // with default spacings this is guaranteed, with an override it is the
  // caller's claim and gets checked here.
  const Scalar min_measurement = (cone.X.transpose() * E.vectors).minCoeff();
  if (min_measurement <= Scalar(0)) {
    if (delta_override) {
      throw InvalidInputError(
          "design_ensemble: delta_override violates measurement positivity for this cone");
    }
    throw ConstructionFailureError("design_ensemble: positivity check failed");
  }
  return E;
}

template <typename Scalar>
struct ValidationCheck {
  std::string name;
  bool pass = false;
  Scalar margin = Scalar(0);
};

template <typename Scalar>
struct ValidationReport {
  std::vector<ValidationCheck<Scalar>> checks;
  bool all_pass = true;

  void add(std::string name, bool pass, Scalar margin) {
    checks.push_back({std::move(name), pass, margin});
    all_pass = all_pass && pass;
  }
};

// Re-derive every structural invariant of an ensemble against its cone.
// Margins are signed: positive means satisfied with room.
template <typename Scalar>
ValidationReport<Scalar> validate_ensemble(const MeasurementEnsemble<Scalar>& E,
                                           const ConeGenerator<Scalar>& cone) {
  ValidationReport<Scalar> rep;
  const Index gamma = E.gamma;

  const Matrix<Scalar> gram = E.iso.map * E.iso.map.transpose();
  const Scalar ortho_err =
      (gram - Matrix<Scalar>::Identity(gamma, gamma)).cwiseAbs().maxCoeff();
  rep.add("isometry rows orthonormal", ortho_err <= Scalar(1e-12), Scalar(1e-12) - ortho_err);

  const bool gamma_ok =
      gamma == static_cast<Index>(cone.rank) && gamma == E.anchor.size() &&
      E.vectors.cols() == gamma && E.deltas.size() == gamma - 1 &&
      E.vectors.rows() == cone.ambient_dim() && E.iso.ambient_dim() == cone.ambient_dim();
  rep.add("dimensions consistent with cone rank", gamma_ok, Scalar(gamma_ok ? 1 : -1));

  const int support = dft_support<Scalar>(E.anchor);
  rep.add("anchor spectrum fully supported", support == static_cast<int>(gamma),
          Scalar(support - static_cast<int>(gamma)));

  const Matrix<Scalar> Y = E.iso.project_cols(cone.X);
  const Scalar anchor_margin = (Y.transpose() * E.anchor).minCoeff();
  rep.add("anchor strictly positive on generators", anchor_margin > Scalar(0), anchor_margin);

  const Scalar min_delta = gamma > 1 ? E.deltas.minCoeff() : Scalar(1);
  rep.add("spacings positive", min_delta > Scalar(0), min_delta);

  const Matrix<Scalar> rows = circulant_rows<Scalar>(E.anchor);
  Scalar vec_err = (E.vectors.col(0) - E.iso.lift(E.anchor)).template lpNorm<Eigen::Infinity>();
  for (Index k = 1; k < gamma; ++k) {
    const Vector<Scalar> expect =
        E.iso.lift(Vector<Scalar>(E.deltas[k - 1] * E.anchor + rows.row(k).transpose()));
    vec_err = std::max(vec_err,
                       (E.vectors.col(k) - expect).template lpNorm<Eigen::Infinity>());
  }
  const Scalar vec_scale =
      std::max(Scalar(1), E.vectors.cwiseAbs().maxCoeff());
  rep.add("vectors follow the anchor-shift construction", vec_err <= Scalar(1e-10) * vec_scale,
          Scalar(1e-10) * vec_scale - vec_err);

  const Scalar min_measurement = (cone.X.transpose() * E.vectors).minCoeff();
  rep.add("all generator measurements strictly positive", min_measurement > Scalar(0),
          min_measurement);

  const Matrix<Scalar> span_vectors = E.iso.project_cols(E.vectors);
  const int frank = matrix_rank<Scalar>(span_vectors);
  rep.add("measurement vectors independent", frank == static_cast<int>(gamma),
          Scalar(frank - static_cast<int>(gamma)));

  return rep;
}

}  // namespace conepr
