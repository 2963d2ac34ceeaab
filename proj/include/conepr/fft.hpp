#pragma once

#include "conepr/types.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace conepr {

// Running count of forward/inverse transforms executed on this thread.
// Instrumentation only: lets tests pin the transform budget of the fast
// solvers (e.g. a circulant solve must cost exactly three transforms).
inline std::uint64_t& fft_transform_count() {
  thread_local std::uint64_t count = 0;
  return count;
}

namespace detail {

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, in place.  inverse=true conjugates the
// twiddles but applies no 1/n scaling; callers own the normalization.
template <typename Scalar>
void fft_pow2_inplace(std::vector<std::complex<Scalar>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) {
    return;
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) {
      j ^= bit;
    }
    j ^= bit;
    if (i < j) {
      std::swap(a[i], a[j]);
    }
  }
  const Scalar sign = inverse ? Scalar(1) : Scalar(-1);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const Scalar ang = sign * Scalar(2) * Scalar(M_PI) / Scalar(len);
    const std::complex<Scalar> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<Scalar> w(1);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<Scalar> u = a[i + j];
        const std::complex<Scalar> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Bluestein's chirp-z reduction: an arbitrary-length DFT as a power-of-two
// circular convolution.  Chirp exponents are reduced mod 2n before the trig
// call so large lengths do not lose accuracy to huge angles.
template <typename Scalar>
void dft_arbitrary_inplace(std::vector<std::complex<Scalar>>& a) {
  const std::size_t n = a.size();
  if (n <= 1) {
    return;
  }
  if (is_pow2(n)) {
    fft_pow2_inplace(a, false);
    return;
  }
  std::vector<std::complex<Scalar>> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t sq = (k * k) % (2 * n);
    const Scalar ang = Scalar(-M_PI) * Scalar(sq) / Scalar(n);
    chirp[k] = std::complex<Scalar>(std::cos(ang), std::sin(ang));
  }
  std::size_t m = 1;
  while (m < 2 * n - 1) {
    m <<= 1;
  }
  std::vector<std::complex<Scalar>> u(m, std::complex<Scalar>(0));
  std::vector<std::complex<Scalar>> v(m, std::complex<Scalar>(0));
  for (std::size_t k = 0; k < n; ++k) {
    u[k] = a[k] * chirp[k];
  }
  v[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    v[k] = std::conj(chirp[k]);
    v[m - k] = std::conj(chirp[k]);
  }
  fft_pow2_inplace(u, false);
  fft_pow2_inplace(v, false);
  for (std::size_t k = 0; k < m; ++k) {
    u[k] *= v[k];
  }
  fft_pow2_inplace(u, true);
  const Scalar scale = Scalar(1) / Scalar(m);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = u[k] * scale * chirp[k];
  }
}

}  // namespace detail

// Unnormalized forward transform: out[k] = sum_l in[l] * exp(-2*pi*i*l*k/n).
template <typename Scalar>
ComplexVector<Scalar> dft(const ComplexVector<Scalar>& in) {
  require_finite(in, "dft");
  std::vector<std::complex<Scalar>> a(in.data(), in.data() + in.size());
  detail::dft_arbitrary_inplace(a);
  ++fft_transform_count();
  return Eigen::Map<const ComplexVector<Scalar>>(a.data(), static_cast<Index>(a.size()));
}

template <typename Scalar>
ComplexVector<Scalar> dft(const Vector<Scalar>& in) {
  require_finite(in, "dft");
  ComplexVector<Scalar> c(in.size());
  for (Index i = 0; i < in.size(); ++i) {
    c[i] = std::complex<Scalar>(in[i], Scalar(0));
  }
  return dft<Scalar>(c);
}

// Inverse transform carrying the 1/n factor: idft(dft(x)) == x.
// Implemented as conj(dft(conj(x)))/n so both paths share one kernel.
template <typename Scalar>
ComplexVector<Scalar> idft(const ComplexVector<Scalar>& in) {
  require_finite(in, "idft");
  const Index n = in.size();
  if (n == 0) {
    return in;
  }
  ComplexVector<Scalar> c = in.conjugate();
  c = dft<Scalar>(c);
  return c.conjugate() / Scalar(n);
}

template <typename Scalar>
ComplexVector<Scalar> idft(const Vector<Scalar>& in) {
  ComplexVector<Scalar> c(in.size());
  for (Index i = 0; i < in.size(); ++i) {
    c[i] = std::complex<Scalar>(in[i], Scalar(0));
  }
  return idft<Scalar>(c);
}

}  // namespace conepr
