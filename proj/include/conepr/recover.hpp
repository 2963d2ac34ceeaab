#pragma once

#include "conepr/design.hpp"
#include "conepr/spectral.hpp"
#include "conepr/types.hpp"

#include <cmath>
#include <limits>

namespace conepr {

template <typename Scalar>
struct RecoveryResult {
  Vector<Scalar> z;
  Scalar residual = Scalar(0);  // max_k | |<z, f_k>| - b_k |
};

// Linear reconstruction core.  The measurement map in span coordinates is
// b_1 = <w, anchor>, b_k = delta_k b_1 + <w, row_k>, so subtracting
// delta_k*b_1 de-triangularizes the system and leaves one circulant solve
// (three transforms, whatever gamma is).  No sign handling: b is taken at
// face value, which is what noisy pipelines need, since noise can push
// magnitudes negative and clipping would bias the error propagation.
template <typename Scalar>
Vector<Scalar> recover_linear(const MeasurementEnsemble<Scalar>& E, const Vector<Scalar>& b) {
  require_finite(b, "recover_linear");
  if (b.size() != E.gamma) {
    throw DimensionMismatchError("recover_linear: expected " + std::to_string(E.gamma) +
                                 " measurements, got " + std::to_string(b.size()));
  }
  Vector<Scalar> c(E.gamma);
  c[0] = b[0];
  for (Index k = 1; k < E.gamma; ++k) {
    c[k] = b[k] - E.deltas[k - 1] * b[0];
  }
  const Vector<Scalar> w = circulant_solve<Scalar>(E.anchor, c);
  return E.iso.lift(w);
}

// Full recovery from magnitude measurements b_k = |<z, f_k>|.  For signals
// in the designed cone every true measurement is positive, so the
// magnitudes equal the signed values and the linear core is exact; the
// returned signal is oriented so its anchor measurement is nonnegative.
template <typename Scalar>
RecoveryResult<Scalar> recover(const MeasurementEnsemble<Scalar>& E, const Vector<Scalar>& b) {
  require_finite(b, "recover");
  if ((b.array() < Scalar(0)).any()) {
    throw InvalidInputError("recover: magnitude measurements cannot be negative");
  }
  RecoveryResult<Scalar> out;
  out.z = recover_linear(E, b);
  if (out.z.dot(E.vectors.col(0)) < Scalar(0)) {
    out.z = -out.z;
  }
  Scalar resid = Scalar(0);
  for (Index k = 0; k < E.gamma; ++k) {
    resid = std::max(resid, std::abs(std::abs(out.z.dot(E.vectors.col(k))) - b[k]));
  }
  out.residual = resid;
  return out;
}

// Sign-invariant relative reconstruction error in decibels,
// 10 log10(min(||z - zr||, ||z + zr||) / ||z||), floored at -300 dB.
template <typename Scalar>
Scalar relative_error_db(const Vector<Scalar>& z_true, const Vector<Scalar>& z_rec) {
  const Scalar denom = z_true.norm();
  if (denom == Scalar(0)) {
    throw InvalidInputError("relative_error_db: reference signal is zero");
  }
  const Scalar err = std::min((z_true - z_rec).norm(), (z_true + z_rec).norm()) / denom;
  return err > Scalar(0) ? std::max(Scalar(10) * std::log10(err), Scalar(-300))
                         : Scalar(-300);
}

template <typename Scalar>
struct RoundtripResult {
  Vector<Scalar> z_true;
  Vector<Scalar> z_recovered;
  Scalar error_db = Scalar(0);  // 10 log10(min(||z-zr||, ||z+zr||)/||z||), floored at -300
  bool zero_signal = false;
};

// Synthesize a cone member from nonnegative coefficients, measure it
// exactly, recover, and report the sign-invariant relative error in dB.
template <typename Scalar>
RoundtripResult<Scalar> recovery_roundtrip(const ConeGenerator<Scalar>& cone,
                                           const MeasurementEnsemble<Scalar>& E,
                                           const Vector<Scalar>& coefficients) {
  require_finite(coefficients, "recovery_roundtrip");
  if (coefficients.size() != cone.generator_count()) {
    throw DimensionMismatchError("recovery_roundtrip: coefficient count mismatch");
  }
  if ((coefficients.array() < Scalar(0)).any()) {
    throw InvalidInputError("recovery_roundtrip: cone coefficients must be nonnegative");
  }
  RoundtripResult<Scalar> out;
  out.z_true = cone.X * coefficients;
  if (out.z_true.norm() == Scalar(0)) {
    out.zero_signal = true;
    out.z_recovered = Vector<Scalar>::Zero(out.z_true.size());
    out.error_db = std::numeric_limits<Scalar>::quiet_NaN();
    return out;
  }
  Vector<Scalar> b(E.gamma);
  for (Index k = 0; k < E.gamma; ++k) {
    b[k] = std::abs(out.z_true.dot(E.vectors.col(k)));
  }
  out.z_recovered = recover(E, b).z;
  out.error_db = relative_error_db<Scalar>(out.z_true, out.z_recovered);
  return out;
}

}  // namespace conepr
