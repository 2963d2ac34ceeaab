#include "conepr/recover.hpp"

#include "conepr/benchmark.hpp"
#include "conepr/fft.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace conepr;

namespace {

MeasurementEnsemble<double> identity_ensemble() {
  Vector<double> q1(2);
  q1 << 2.0, 1.0;
  return design_ensemble<double>(ConeGenerator<double>(Matrix<double>::Identity(2, 2)), q1,
                                 std::nullopt, 5);
}

Vector<double> measure(const MeasurementEnsemble<double>& E, const Vector<double>& z) {
  Vector<double> b(E.gamma);
  for (Index k = 0; k < E.gamma; ++k) b[k] = std::abs(z.dot(E.vectors.col(k)));
  return b;
}

}  // namespace

TEST_CASE("hand-checked recovery over the identity cone") {
  const auto E = identity_ensemble();
  const double delta = E.deltas[0];

  // z = (1,1): b_1 = <z, (2,1)> = 3, b_2 = delta*3 + <z, (1,2)> = 3*delta + 3.
  Vector<double> b(2);
  b << 3.0, 3.0 * delta + 3.0;
  const auto res = recover(E, b);
  CHECK(res.z[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.z[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.residual < 1e-12);

  const Vector<double> zl = recover_linear(E, b);
  CHECK((zl - res.z).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zero measurements recover the zero signal") {
  const auto E = identity_ensemble();
  const auto res = recover(E, Vector<double>(Vector<double>::Zero(2)));
  CHECK(res.z.cwiseAbs().maxCoeff() == 0.0);
  CHECK(res.residual == 0.0);
}

TEST_CASE("input validation") {
  const auto E = identity_ensemble();
  Vector<double> neg(2);
  neg << 1.0, -0.5;
  CHECK_THROWS_AS(recover(E, neg), InvalidInputError);
  // The linear core takes signed data at face value.
  CHECK_NOTHROW(recover_linear(E, neg));
  CHECK_THROWS_AS(recover(E, Vector<double>(Vector<double>::Ones(3))), DimensionMismatchError);
}

TEST_CASE("orientation follows the anchor measurement") {
  const auto E = identity_ensemble();
  Vector<double> z(2);
  z << 0.3, 1.7;
  // Magnitudes cannot tell z from -z; the convention picks the candidate
  // with a nonnegative anchor measurement, which is the cone member.
  const auto res = recover(E, measure(E, z));
  CHECK((res.z - z).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(res.z.dot(E.vectors.col(0)) >= 0.0);
}

TEST_CASE("benchmark roundtrips reach machine-precision error") {
  Rng rng(67);
  for (Index n : {8, 16, 32}) {
    const auto u = make_benchmark_union<double>(n);
    const ConeGenerator<double> cone(u.X1);
    const auto E = design_ensemble<double>(cone, Vector<double>(u.q1), u.delta, 7);
    for (int trial = 0; trial < 5; ++trial) {
      Vector<double> coeffs(cone.generator_count());
      for (Index i = 0; i < coeffs.size(); ++i) coeffs[i] = rng.uniform(0.0, 0.01);
      const auto rt = recovery_roundtrip(cone, E, coeffs);
      CHECK_FALSE(rt.zero_signal);
      CHECK(rt.error_db <= -100.0);
    }
    // Single-generator target: the sharpest case.
    Vector<double> e0 = Vector<double>::Zero(cone.generator_count());
    e0[0] = 0.01;
    CHECK(recovery_roundtrip(cone, E, e0).error_db <= -100.0);
  }
}

TEST_CASE("roundtrip through a rank-deficient cone") {
  const auto u = make_benchmark_union<double>(8);
  const ConeGenerator<double> cone(u.X2);
  REQUIRE(cone.rank == 2);
  Vector<double> q1 = Vector<double>::Zero(8);
  q1[0] = 1.0;
  const auto E = design_ensemble<double>(cone, q1, std::nullopt, 9);
  REQUIRE(E.gamma == 2);
  Rng rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    Vector<double> coeffs(cone.generator_count());
    for (Index i = 0; i < coeffs.size(); ++i) coeffs[i] = rng.uniform(0.0, 1.0);
    const auto rt = recovery_roundtrip(cone, E, coeffs);
    CHECK(rt.error_db <= -100.0);
  }
}

TEST_CASE("zero coefficients are reported, not scored") {
  const auto E = identity_ensemble();
  const ConeGenerator<double> cone(Matrix<double>::Identity(2, 2));
  const auto rt = recovery_roundtrip(cone, E, Vector<double>(Vector<double>::Zero(2)));
  CHECK(rt.zero_signal);
  CHECK(std::isnan(rt.error_db));
  CHECK(rt.z_recovered.cwiseAbs().maxCoeff() == 0.0);

  Vector<double> neg(2);
  neg << 0.5, -0.5;
  CHECK_THROWS_AS(recovery_roundtrip(cone, E, neg), InvalidInputError);
}

TEST_CASE("fast recovery matches a dense linear solve") {
  Rng rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const Index gamma = 2 + static_cast<Index>(rng.uniform_index(5));
    const Index n = gamma + static_cast<Index>(rng.uniform_index(4));
    const Index m = gamma + static_cast<Index>(rng.uniform_index(2 * gamma));

    // Planted cone around an all-positive profile (see design tests).
    Vector<double> q(gamma);
    for (Index i = 0; i < gamma; ++i) q[i] = rng.uniform(-1.0, 1.0);
    q /= q.norm();
    Matrix<double> Y(gamma, m);
    for (Index j = 0; j < m; ++j) {
      Vector<double> r(gamma);
      for (Index i = 0; i < gamma; ++i) r[i] = rng.uniform(-1.0, 1.0);
      Y.col(j) = r + (rng.uniform(0.3, 1.0) - q.dot(r)) * q;
    }
    Matrix<double> lift = Matrix<double>::Identity(n, gamma);
    if (n > gamma) {
      Matrix<double> G(n, gamma);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < gamma; ++j) G(i, j) = rng.gaussian();
      Eigen::HouseholderQR<Matrix<double>> qr(G);
      lift = Matrix<double>(qr.householderQ()).leftCols(gamma);
    }
    const ConeGenerator<double> cone(Matrix<double>(lift * Y));
    if (cone.rank != static_cast<int>(gamma)) continue;

    const auto E = design_ensemble<double>(cone, std::nullopt, std::nullopt, 200 + trial);
    Vector<double> coeffs(m);
    for (Index j = 0; j < m; ++j) coeffs[j] = rng.uniform(0.0, 1.0);
    const Vector<double> z = cone.X * coeffs;
    const Vector<double> b = measure(E, z);

    // Dense reference: solve V^T w = b in span coordinates, then lift.
    const Matrix<double> V = E.iso.project_cols(E.vectors);
    const Vector<double> w = oracle::lu_solve(Matrix<double>(V.transpose()), b);
    const Vector<double> z_dense = E.iso.lift(w);

    const Vector<double> z_fast = recover(E, b).z;
    const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
    CHECK((z_fast - z_dense).cwiseAbs().maxCoeff() < 1e-10 * scale);
    CHECK((z_fast - z).cwiseAbs().maxCoeff() < 1e-9 * scale);
  }
}

TEST_CASE("recovery cost is three transforms regardless of gamma") {
  for (Index n : {8, 16, 64}) {
    const auto u = make_benchmark_union<double>(n);
    const ConeGenerator<double> cone(u.X1);
    const auto E = design_ensemble<double>(cone, Vector<double>(u.q1), u.delta, 7);
    const Vector<double> b = measure(E, Vector<double>(u.X1.col(0)));
    const std::uint64_t before = fft_transform_count();
    recover_linear(E, b);
    CHECK(fft_transform_count() - before == 3);
  }
}

TEST_CASE("measurement noise propagates affinely") {
  // recover_linear(b + e) - recover_linear(b) depends only on e, through
  // the same triangular elimination and circulant solve.
  const auto u = make_benchmark_union<double>(16);
  const ConeGenerator<double> cone(u.X1);
  const auto E = design_ensemble<double>(cone, Vector<double>(u.q1), u.delta, 7);
  Rng rng(79);
  const Vector<double> b = measure(E, Vector<double>(u.X1 * Vector<double>::Constant(31, 0.004)));
  Vector<double> e(E.gamma);
  for (Index k = 0; k < E.gamma; ++k) e[k] = 1e-3 * rng.gaussian();

  const Vector<double> diff = recover_linear(E, Vector<double>(b + e)) - recover_linear(E, b);

  Vector<double> ce(E.gamma);
  ce[0] = e[0];
  for (Index k = 1; k < E.gamma; ++k) ce[k] = e[k] - E.deltas[k - 1] * e[0];
  const Vector<double> expected = E.iso.lift(circulant_solve<double>(E.anchor, ce));
  CHECK((diff - expected).cwiseAbs().maxCoeff() < 1e-12);
}
