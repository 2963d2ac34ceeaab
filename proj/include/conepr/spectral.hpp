#pragma once

#include "conepr/fft.hpp"
#include "conepr/types.hpp"

#include <string>
#include <vector>

namespace conepr {

// Number of spectrum entries with modulus above tol x (largest modulus).
// Zero vectors have empty support.
template <typename Scalar>
int dft_support(const Vector<Scalar>& v, Scalar tol = Scalar(1e-8)) {
  if (v.size() == 0) {
    return 0;
  }
  const ComplexVector<Scalar> spectrum = dft<Scalar>(v);
  const Scalar max_mod = spectrum.cwiseAbs().maxCoeff();
  if (max_mod == Scalar(0)) {
    return 0;
  }
  int count = 0;
  for (Index k = 0; k < spectrum.size(); ++k) {
    if (std::abs(spectrum[k]) > tol * max_mod) {
      ++count;
    }
  }
  return count;
}

// The circulant matrix generated by p: row k is p cyclically right-shifted
// by k places, so entry (k, j) = p[(j - k) mod n].  Dense; for products and
// solves use the spectral forms below instead.
template <typename Scalar>
Matrix<Scalar> circulant_rows(const Vector<Scalar>& p) {
  require_finite(p, "circulant_rows");
  const Index n = p.size();
  Matrix<Scalar> C(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < n; ++j) {
      C(k, j) = p[((j - k) % n + n) % n];
    }
  }
  return C;
}

// circulant_rows(p) * z in O(n log n): diagonalization by the Fourier basis
// gives circ(p) = dft o diag(dft(p)) o idft, applied right to left.
template <typename Scalar>
Vector<Scalar> circulant_matvec(const Vector<Scalar>& p, const Vector<Scalar>& z) {
  require_finite(p, "circulant_matvec");
  require_finite(z, "circulant_matvec");
  if (p.size() != z.size()) {
    throw DimensionMismatchError("circulant_matvec: length mismatch");
  }
  const ComplexVector<Scalar> ph = dft<Scalar>(p);
  ComplexVector<Scalar> w = idft<Scalar>(z);
  w.array() *= ph.array();
  return dft<Scalar>(w).real();
}

// Solve circulant_rows(p) * x = b by dividing out the spectrum.  Indices
// where dft(p) vanishes (below 1e-12 x largest modulus) make the system
// singular; they are reported in the exception.
template <typename Scalar>
Vector<Scalar> circulant_solve(const Vector<Scalar>& p, const Vector<Scalar>& b) {
  require_finite(p, "circulant_solve");
  require_finite(b, "circulant_solve");
  if (p.size() != b.size()) {
    throw DimensionMismatchError("circulant_solve: length mismatch");
  }
  const ComplexVector<Scalar> ph = dft<Scalar>(p);
  const Scalar max_mod = ph.cwiseAbs().maxCoeff();
  std::vector<Index> vanishing;
  for (Index k = 0; k < ph.size(); ++k) {
    if (std::abs(ph[k]) <= Scalar(1e-12) * max_mod) {
      vanishing.push_back(k);
    }
  }
  if (!vanishing.empty() || max_mod == Scalar(0)) {
    std::string which;
    for (Index k : vanishing) {
      which += (which.empty() ? "" : ", ") + std::to_string(k);
    }
    throw SingularCirculantError("circulant_solve: spectrum vanishes at frequency indices {" +
                                     which + "}",
                                 std::move(vanishing));
  }
  ComplexVector<Scalar> w = idft<Scalar>(b);
  w.array() /= ph.array();
  return dft<Scalar>(w).real();
}

}  // namespace conepr
