#pragma once

#include "conepr/design.hpp"
#include "conepr/recover.hpp"
#include "conepr/rng.hpp"
#include "conepr/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace conepr {

namespace detail {

// Regularized lower incomplete gamma P(a, x): series expansion below the
// a+1 crossover, Lentz continued fraction for the upper tail above it.
// 200-term budget, 1e-14 relative termination.
template <typename Scalar>
Scalar regularized_gamma_p(Scalar a, Scalar x) {
  if (x <= Scalar(0)) {
    return Scalar(0);
  }
  const Scalar log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + Scalar(1)) {
    Scalar term = Scalar(1) / a;
    Scalar sum = term;
    Scalar ap = a;
    for (int i = 0; i < 200; ++i) {
      ap += Scalar(1);
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * Scalar(1e-14)) {
        break;
      }
    }
    return std::exp(log_prefix) * sum;
  }
  // Continued fraction for Q(a, x), then P = 1 - Q.
  const Scalar tiny = Scalar(1e-300);
  Scalar b = x + Scalar(1) - a;
  Scalar c = Scalar(1) / tiny;
  Scalar d = Scalar(1) / b;
  Scalar h = d;
  for (int i = 1; i <= 200; ++i) {
    const Scalar an = -Scalar(i) * (Scalar(i) - a);
    b += Scalar(2);
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = Scalar(1) / d;
    const Scalar delta = d * c;
    h *= delta;
    if (std::abs(delta - Scalar(1)) < Scalar(1e-14)) {
      break;
    }
  }
  return Scalar(1) - std::exp(log_prefix) * h;
}

}  // namespace detail

// Lower CDF of the chi-square distribution with dof degrees of freedom.
template <typename Scalar>
Scalar chi2_cdf(Scalar dof, Scalar t) {
  if (dof <= Scalar(0)) {
    throw InvalidInputError("chi2_cdf: degrees of freedom must be positive");
  }
  if (t <= Scalar(0)) {
    return Scalar(0);
  }
  return detail::regularized_gamma_p<Scalar>(dof / Scalar(2), t / Scalar(2));
}

template <typename Scalar>
Scalar gaussian_cdf(Scalar x, Scalar mean, Scalar stddev) {
  if (stddev <= Scalar(0)) {
    throw InvalidInputError("gaussian_cdf: stddev must be positive");
  }
  return Scalar(0.5) * std::erfc(-(x - mean) / (stddev * std::sqrt(Scalar(2))));
}

// Lower bound on the probability that every thresholded magnitude
// comparison in a gamma-measurement recovery comes out right, as a function
// of x = epsilon / (2 sigma^2).  Combination of four chi-square tail
// evaluations; the raw combination starts at -1 when x -> 0 (a vacuous
// bound, not a zero probability) and increases monotonically to 1.
template <typename Scalar>
Scalar success_probability(Index gamma, Scalar sigma, Scalar epsilon) {
  if (gamma < 2) {
    throw InvalidInputError("success_probability: gamma must be at least 2");
  }
  if (sigma <= Scalar(0) || epsilon < Scalar(0)) {
    throw InvalidInputError("success_probability: sigma must be positive, epsilon nonnegative");
  }
  const Scalar g = Scalar(gamma);
  const Scalar x = epsilon / (Scalar(2) * sigma * sigma);
  const Scalar gm1 = g - Scalar(1);
  return -Scalar(1) + chi2_cdf<Scalar>(gm1, gm1 + g * x) +
         chi2_cdf<Scalar>(Scalar(1), Scalar(1) + g * x / gm1) -
         chi2_cdf<Scalar>(gm1, gm1 - g * x) -
         chi2_cdf<Scalar>(Scalar(1), Scalar(1) - g * x / gm1);
}

// The raw bound clipped to [0, 1] -- the version to quote as a probability.
template <typename Scalar>
Scalar clamped_success_probability(Index gamma, Scalar sigma, Scalar epsilon) {
  return std::clamp(success_probability<Scalar>(gamma, sigma, epsilon), Scalar(0), Scalar(1));
}

// Deterministic worst-case error bound for linear recovery under
// measurement noise of Euclidean norm noise_norm, with threshold slack
// epsilon.  The denominator is the smallest anchor spectrum magnitude under
// the scaled transform convention (|dft| / gamma); a vanishing spectrum
// voids the bound and is rejected.
template <typename Scalar>
Scalar error_bound(const MeasurementEnsemble<Scalar>& E, Scalar noise_norm, Scalar epsilon) {
  if (noise_norm < Scalar(0) || epsilon < Scalar(0)) {
    throw InvalidInputError("error_bound: noise_norm and epsilon must be nonnegative");
  }
  const Scalar g = Scalar(E.gamma);
  const ComplexVector<Scalar> spectrum = dft<Scalar>(E.anchor);
  const Scalar min_fft = spectrum.cwiseAbs().minCoeff() / g;
  if (min_fft <= Scalar(1e-12) * spectrum.cwiseAbs().maxCoeff() / g) {
    throw InvalidInputError("error_bound: anchor spectrum (numerically) vanishes somewhere");
  }
  const Scalar max_delta = E.gamma > 1 ? E.deltas.maxCoeff() : Scalar(0);
  const Scalar n2 = noise_norm * noise_norm;
  const Scalar inner = Scalar(2) * n2 + max_delta * ((g - Scalar(1)) * epsilon +
                                                     (g - Scalar(1)) / g * n2);
  return std::sqrt(inner) / min_fft;
}

template <typename Scalar>
struct StabilityReport {
  int trials = 0;
  int successes = 0;           // error within the deterministic bound
  Scalar frequency = Scalar(0);
  Scalar mean_error = Scalar(0);
  Scalar max_error = Scalar(0);
  Scalar mean_bound = Scalar(0);
};

// Empirical check of the error bound: draw cone members, corrupt their
// exact measurements with Gaussian noise, recover linearly, and compare
// each realized error against the bound at that trial's realized noise
// norm.  A tiny absolute slack keeps the sigma = 0 edge (bound 0, error at
// rounding level) from reading as failure.
template <typename Scalar>
StabilityReport<Scalar> monte_carlo_stability(const MeasurementEnsemble<Scalar>& E,
                                              const ConeGenerator<Scalar>& cone, Scalar sigma,
                                              int trials, std::uint64_t seed, Scalar epsilon) {
  if (trials < 100) {
    throw InvalidInputError("monte_carlo_stability: need at least 100 trials");
  }
  if (sigma < Scalar(0)) {
    throw InvalidInputError("monte_carlo_stability: sigma must be nonnegative");
  }
  StabilityReport<Scalar> rep;
  rep.trials = trials;
  Scalar err_sum = Scalar(0);
  Scalar bound_sum = Scalar(0);
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t), 0));
    Vector<Scalar> coeffs(cone.generator_count());
    for (Index i = 0; i < coeffs.size(); ++i) coeffs[i] = Scalar(rng.uniform01());
    const Vector<Scalar> z = cone.X * coeffs;
    Vector<Scalar> b(E.gamma);
    for (Index k = 0; k < E.gamma; ++k) b[k] = std::abs(z.dot(E.vectors.col(k)));
    Vector<Scalar> noise(E.gamma);
    for (Index k = 0; k < E.gamma; ++k) noise[k] = sigma * Scalar(rng.gaussian());
    const Vector<Scalar> zr = recover_linear<Scalar>(E, Vector<Scalar>(b + noise));
    const Scalar err = std::min((z - zr).norm(), (z + zr).norm());
    const Scalar bound = error_bound<Scalar>(E, noise.norm(), epsilon);
    err_sum += err;
    bound_sum += bound;
    rep.max_error = std::max(rep.max_error, err);
    if (err <= bound + Scalar(1e-12) * std::max(Scalar(1), z.norm())) {
      ++rep.successes;
    }
  }
  rep.frequency = Scalar(rep.successes) / Scalar(trials);
  rep.mean_error = err_sum / Scalar(trials);
  rep.mean_bound = bound_sum / Scalar(trials);
  return rep;
}

}  // namespace conepr
