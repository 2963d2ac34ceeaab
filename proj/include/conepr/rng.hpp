#pragma once

#include <cmath>
#include <cstdint>

namespace conepr {

// splitmix64: seed expander and integer hash.  Used both to initialise the
// main generator state and to derive independent per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic seed for trial (a, b) of an experiment with a global seed.
// Pure function of its arguments, identical on every platform.
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = global_seed;
  std::uint64_t h = splitmix64(s);
  s = h ^ (a * 0xD1342543DE82EF95ULL);
  h = splitmix64(s);
  s = h ^ (b * 0xAF251AF3B0F025B5ULL);
  return splitmix64(s);
}

// xoshiro256++ with splitmix64 seeding.  Chosen over std:: engines so that
// streams are reproducible bit-for-bit across standard libraries; the
// Gaussian sampler below (Marsaglia polar) is part of the same contract,
// since std::normal_distribution is not portable either.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      word = splitmix64(sm);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Marsaglia's polar method (one spare cached).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4] = {};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace conepr
