#pragma once

#include "conepr/feasibility.hpp"
#include "conepr/rng.hpp"
#include "conepr/stability.hpp"
#include "conepr/types.hpp"

#include <cstdint>
#include <optional>

namespace conepr {

// Magnitude-measurement access to the unknown signal.  query(g) returns
// |<z, g>| (possibly corrupted); every call is counted, since the whole
// point of the pipeline is its measurement budget.
template <typename Scalar>
class MeasurementOracle {
public:
  virtual ~MeasurementOracle() = default;

  Scalar query(const Vector<Scalar>& g) {
    ++count_;
    return do_query(g);
  }

  std::uint64_t query_count() const { return count_; }

protected:
  virtual Scalar do_query(const Vector<Scalar>& g) = 0;

private:
  std::uint64_t count_ = 0;
};

template <typename Scalar>
class ExactOracle final : public MeasurementOracle<Scalar> {
public:
  explicit ExactOracle(Vector<Scalar> z) : z_(std::move(z)) {}

protected:
  Scalar do_query(const Vector<Scalar>& g) override {
    if (g.size() != z_.size()) {
      throw DimensionMismatchError("ExactOracle: probe dimension mismatch");
    }
    return std::abs(z_.dot(g));
  }

private:
  Vector<Scalar> z_;
};

// Adds independent N(0, sigma^2) noise to every magnitude.
template <typename Scalar>
class GaussianNoiseOracle final : public MeasurementOracle<Scalar> {
public:
  GaussianNoiseOracle(Vector<Scalar> z, Scalar sigma, std::uint64_t seed)
      : z_(std::move(z)), sigma_(sigma), rng_(seed) {
    if (sigma < Scalar(0)) {
      throw InvalidInputError("GaussianNoiseOracle: sigma must be nonnegative");
    }
  }

protected:
  Scalar do_query(const Vector<Scalar>& g) override {
    if (g.size() != z_.size()) {
      throw DimensionMismatchError("GaussianNoiseOracle: probe dimension mismatch");
    }
    return std::abs(z_.dot(g)) + sigma_ * Scalar(rng_.gaussian());
  }

private:
  Vector<Scalar> z_;
  Scalar sigma_;
  Rng rng_;
};

// Champion/challenger exclusion over the detector bank: each query removes
// one cone from contention, so membership is decided in exactly L-1
// measurements.  A zero response against a detector vanishing on the
// challenger keeps the champion; a zero against a detector vanishing on the
// champion excludes the champion.  Either way the true cone is never the
// excluded one, because its members cannot produce the observed response.
//
// zero_tol < 0 selects the adaptive rule: a query counts as zero below
// 1e-9 * ||g|| * (largest normalized response seen so far, or 1 before any).
//
// When every query lands at zero the transcript is consistent both with a
// signal in the surviving cone and with z = 0.  If the bank holds a
// detector that is strictly positive on the surviving cone, one extra
// certificate query settles it; a zero there leaves no nonzero candidate
// and raises AmbiguousZeroError.  Without such a detector (e.g. the
// surviving cone lacks the overlap property) the exclusion answer is
// returned as is -- no measurement strategy in the bank can tell the two
// apart.
template <typename Scalar>
int detect(const DetectorBank<Scalar>& bank, MeasurementOracle<Scalar>& oracle,
           Scalar zero_tol = Scalar(-1)) {
  const int L = bank.cone_count;
  if (L < 2) {
    throw InvalidInputError("detect: bank must cover at least two cones");
  }
  Scalar scale_est = Scalar(0);
  auto effective_tol = [&](const Vector<Scalar>& g) {
    if (zero_tol >= Scalar(0)) {
      return zero_tol;
    }
    const Scalar ref = scale_est > Scalar(0) ? scale_est : Scalar(1);
    return Scalar(1e-9) * g.norm() * ref;
  };

  int champion = 0;
  bool all_zero = true;
  for (int challenger = 1; challenger < L; ++challenger) {
    const PairDetector<Scalar>& det = bank.pair(champion, challenger);
    const Scalar response = oracle.query(det.g);
    const Scalar tol = effective_tol(det.g);
    const bool is_zero = response <= tol;
    if (!is_zero) {
      all_zero = false;
      scale_est = std::max(scale_est, response / det.g.norm());
    }
    if (det.positive_cone == champion && det.null_cone == challenger) {
      if (is_zero) {
        champion = challenger;  // champion members cannot vanish here
      }
    } else if (det.positive_cone == challenger && det.null_cone == champion) {
      if (!is_zero) {
        champion = challenger;  // champion members cannot respond here
      }
    } else {
      throw InvalidInputError("detect: bank detector does not match its pair");
    }
  }

  if (all_zero) {
    for (int j = 0; j < L; ++j) {
      if (j == champion || !bank.has(champion, j)) {
        continue;
      }
      const PairDetector<Scalar>& det = bank.pair(champion, j);
      if (det.positive_cone != champion) {
        continue;
      }
      const Scalar certificate = oracle.query(det.g);
      if (certificate <= effective_tol(det.g)) {
        throw AmbiguousZeroError(
            "detect: every cone excluded by zero responses; signal is indistinguishable from 0");
      }
      return champion;
    }
  }
  return champion;
}

template <typename Scalar>
struct NoisyDetection {
  int cone = 0;
  Scalar threshold = Scalar(0);
  Scalar success_bound = Scalar(1);  // Gaussian lower bound on deciding correctly
};

// Probability that thresholded noisy detection decides correctly: the noise
// must stay on the right side of the threshold, which happens with
// probability Phi(threshold / sigma) for centred Gaussian noise.
template <typename Scalar>
Scalar detection_success_probability(Scalar r, Scalar margin, Scalar sigma) {
  if (r <= Scalar(0) || margin <= Scalar(0)) {
    throw InvalidInputError("detection_success_probability: r and margin must be positive");
  }
  if (sigma < Scalar(0)) {
    throw InvalidInputError("detection_success_probability: sigma must be nonnegative");
  }
  const Scalar threshold = r / Scalar(2) * margin;
  if (sigma == Scalar(0)) {
    return Scalar(1);
  }
  return gaussian_cdf<Scalar>(threshold, Scalar(0), sigma);
}

// Threshold test for the noisy two-cone case: with T = (r/2) x (smallest
// noiseless response of the positive cone at coefficient scale r), a
// response above T votes for the positive cone, below for the null cone.
// Multi-cone exclusion chains under noise are experimental and must be
// requested explicitly.
template <typename Scalar>
NoisyDetection<Scalar> detect_noisy(const DetectorBank<Scalar>& bank,
                                    MeasurementOracle<Scalar>& oracle, Scalar r, Scalar sigma,
                                    bool allow_multi = false) {
  if (r <= Scalar(0)) {
    throw InvalidInputError("detect_noisy: coefficient scale r must be positive");
  }
  if (sigma < Scalar(0)) {
    throw InvalidInputError("detect_noisy: sigma must be nonnegative");
  }
  const int L = bank.cone_count;
  if (L != 2 && !allow_multi) {
    throw InvalidInputError(
        "detect_noisy: only two-cone unions are supported (multi-cone mode is experimental)");
  }

  NoisyDetection<Scalar> out;
  int champion = 0;
  for (int challenger = 1; challenger < L; ++challenger) {
    const PairDetector<Scalar>& det = bank.pair(champion, challenger);
    const Scalar T = r / Scalar(2) * det.min_positive_margin;
    const Scalar response = oracle.query(det.g);
    // Above threshold: the signal responds, so it is not in the null cone.
    const int excluded = response >= T ? det.null_cone : det.positive_cone;
    champion = excluded == champion ? challenger : champion;
    out.threshold = T;
  }
  out.cone = champion;
  out.success_bound = sigma > Scalar(0)
                          ? gaussian_cdf<Scalar>(out.threshold, Scalar(0), sigma)
                          : Scalar(1);
  return out;
}

}  // namespace conepr
