#pragma once

#include "conepr/benchmark.hpp"
#include "conepr/design.hpp"
#include "conepr/detect.hpp"
#include "conepr/recover.hpp"
#include "conepr/rng.hpp"
#include "conepr/stability.hpp"
#include "conepr/types.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace conepr {

// Every float in a CSV is printed with 17 significant digits, enough to
// round-trip an IEEE double exactly.
inline std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidInputError("cannot write " + path);
  }
  out << text;
}

enum class ExperimentMode { Noiseless, Noisy };

struct ExperimentConfig {
  std::vector<Index> n_values;
  int trials = 100;
  ExperimentMode mode = ExperimentMode::Noiseless;
  std::vector<double> snr_db;        // noisy mode only
  std::uint64_t seed = 0;
  std::string out_path;              // empty: no file output
  bool run_two_step = true;
  bool run_altmin = false;

  void validate() const {
    if (n_values.empty()) {
      throw InvalidInputError("config: need at least one signal length");
    }
    for (Index n : n_values) {
      if (n < 3) {
        throw InvalidInputError("config: signal lengths must be at least 3");
      }
    }
    if (trials < 1) {
      throw InvalidInputError("config: need at least one trial");
    }
    if (mode == ExperimentMode::Noisy && snr_db.empty()) {
      throw InvalidInputError("config: noisy mode needs an SNR list");
    }
    if (!run_two_step) {
      throw InvalidInputError(
          "config: the two-step pipeline defines the sweep; baselines only add columns");
    }
  }
};

// Deterministic target draw for one cone of the two-cone simulation family.
template <typename Scalar>
Vector<Scalar> random_target(const BenchmarkUnion<Scalar>& u, int cone_index,
                             std::uint64_t seed, Vector<Scalar>* coefficients = nullptr) {
  if (cone_index != 0 && cone_index != 1) {
    throw InvalidInputError("random_target: cone index must be 0 or 1");
  }
  Rng rng(seed);
  return random_cone_target<Scalar>(cone_index == 0 ? u.X1 : u.X2, rng, coefficients);
}

// The simulation family's detector, used verbatim (not renormalized): the
// noisy threshold T = (r/2) x min response must be expressed in the same
// scale as the raw queries |<z, g>| + noise.
template <typename Scalar>
DetectorBank<Scalar> benchmark_bank(const BenchmarkUnion<Scalar>& u) {
  DetectorBank<Scalar> bank;
  bank.ambient_dim = u.X1.rows();
  bank.cone_count = 2;
  PairDetector<Scalar> det;
  det.g = u.g;
  det.positive_cone = 0;
  det.null_cone = 1;
  det.min_positive_margin = (u.X1.transpose() * u.g).minCoeff();
  bank.detectors[{0, 1}] = det;
  return bank;
}

namespace detail {

template <typename F>
double median_of_5_seconds(F&& body) {
  body();  // warmup, excluded
  double samples[5];
  for (double& s : samples) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    s = std::chrono::duration<double>(t1 - t0).count();
  }
  std::sort(samples, samples + 5);
  return samples[2];
}

}  // namespace detail

struct NoiselessTrialRow {
  Index n = 0;
  int trial = 0;
  int detected = -1;
  std::uint64_t queries = 0;
  double error_db = 0.0;
  double altmin_error_db = std::numeric_limits<double>::quiet_NaN();  // only when enabled
};

struct NoiselessSummary {
  Index n = 0;
  double mean_error_db = 0.0;
  double mean_recover_seconds = 0.0;
};

struct NoiselessRun {
  std::vector<NoiselessTrialRow> rows;
  std::vector<NoiselessSummary> summaries;
  std::string results_csv;   // deterministic for a fixed config
  std::string timing_csv;    // wall-clock, inherently run-dependent
};

inline std::string timing_path_for(const std::string& out_path) {
  const std::string ext = ".csv";
  if (out_path.size() > ext.size() &&
      out_path.compare(out_path.size() - ext.size(), ext.size(), ext) == 0) {
    return out_path.substr(0, out_path.size() - ext.size()) + "_timing.csv";
  }
  return out_path + "_timing";
}

template <typename Scalar>
Vector<Scalar> altmin_baseline(Index n_measurements, const Vector<Scalar>& target, int iters,
                               std::uint64_t seed);

// Noiseless sweep over the two-cone simulation family: per (n, trial), draw
// a target in the full-rank cone, detect it (one query), measure the n
// ensemble vectors through the same oracle (n queries), reconstruct, and
// score.  Timing is kept in a separate file so the results CSV is
// byte-identical across reruns of the same config.  With run_altmin set, an
// extra column scores the generic baseline on the same target at the same
// n + 1 measurement budget -- the budget at which the designed pipeline is
// exact and the generic solver is starved.
template <typename Scalar>
NoiselessRun run_noiseless(const ExperimentConfig& cfg) {
  cfg.validate();
  NoiselessRun run;
  std::string results = std::string("n,trial,detected,queries,error_db") +
                        (cfg.run_altmin ? ",altmin_error_db" : "") + '\n';
  std::string timing = "n,trial,recover_seconds\n";

  for (Index n : cfg.n_values) {
    const auto u = make_benchmark_union<Scalar>(n);
    const auto bank = benchmark_bank<Scalar>(u);
    const ConeGenerator<Scalar> cone(u.X1);
    const auto E = design_ensemble<Scalar>(cone, Vector<Scalar>(u.q1), u.delta,
                                           derive_seed(cfg.seed, static_cast<std::uint64_t>(n), 0));
    double err_sum = 0.0;
    double time_sum = 0.0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t trial_seed =
          derive_seed(cfg.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial + 1));
      const Vector<Scalar> z = random_target<Scalar>(u, 0, trial_seed);
      ExactOracle<Scalar> oracle(z);

      NoiselessTrialRow row;
      row.n = n;
      row.trial = trial;
      row.detected = detect<Scalar>(bank, oracle);

      Vector<Scalar> b(E.gamma);
      for (Index k = 0; k < E.gamma; ++k) {
        b[k] = oracle.query(Vector<Scalar>(E.vectors.col(k)));
      }
      row.queries = oracle.query_count();

      RecoveryResult<Scalar> rec;
      const double seconds = detail::median_of_5_seconds([&] { rec = recover<Scalar>(E, b); });
      row.error_db = static_cast<double>(relative_error_db<Scalar>(z, rec.z));
      err_sum += row.error_db;
      time_sum += seconds;

      results += std::to_string(row.n) + ',' + std::to_string(row.trial) + ',' +
                 std::to_string(row.detected) + ',' + std::to_string(row.queries) + ',' +
                 csv_double(row.error_db);
      if (cfg.run_altmin) {
        const Vector<Scalar> xr =
            altmin_baseline<Scalar>(n + 1, z, 200, derive_seed(trial_seed, 3, 0));
        row.altmin_error_db = static_cast<double>(relative_error_db<Scalar>(z, xr));
        results += ',' + csv_double(row.altmin_error_db);
      }
      results += '\n';
      timing += std::to_string(row.n) + ',' + std::to_string(row.trial) + ',' +
                csv_double(seconds) + '\n';
      run.rows.push_back(row);
    }
    run.summaries.push_back(
        {n, err_sum / cfg.trials, time_sum / cfg.trials});
  }

  run.results_csv = std::move(results);
  run.timing_csv = std::move(timing);
  if (!cfg.out_path.empty()) {
    write_text_file(cfg.out_path, run.results_csv);
    write_text_file(timing_path_for(cfg.out_path), run.timing_csv);
  }
  return run;
}

struct NoisyTrialRow {
  Index n = 0;
  double snr_db = 0.0;
  int trial = 0;
  double sigma = 0.0;
  int detected = -1;
  bool detection_correct = false;
  double detect_success_bound = 1.0;
  double error_db = 0.0;
};

struct NoisySummary {
  Index n = 0;
  double snr_db = 0.0;
  double detection_rate = 0.0;
  double mean_success_bound = 1.0;
  double mean_error_db = 0.0;
};

struct NoisyRun {
  std::vector<NoisyTrialRow> rows;
  std::vector<NoisySummary> summaries;
  std::string results_csv;
};

// Noisy sweep: targets in the full-rank cone, every magnitude independently
// corrupted by N(0, sigma^2) where sigma realizes the requested SNR
//   SNR = 10 log10(||M^T z||^2 / (m sigma^2)),  M = [g, f_1 .. f_n],
// m = n + 1 columns.  Detection runs the threshold test with the
// prior-information scale r = 0.9 x (true coefficient sum); reconstruction
// uses the signed linear core, since noise can push magnitudes negative.
template <typename Scalar>
NoisyRun run_noisy(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.mode != ExperimentMode::Noisy) {
    throw InvalidInputError("run_noisy: config mode must be noisy");
  }
  NoisyRun run;
  std::string results =
      "n,snr_db,trial,sigma,detected,detection_correct,detect_success_bound,error_db\n";

  for (Index n : cfg.n_values) {
    const auto u = make_benchmark_union<Scalar>(n);
    const auto bank = benchmark_bank<Scalar>(u);
    const ConeGenerator<Scalar> cone(u.X1);
    const auto E = design_ensemble<Scalar>(cone, Vector<Scalar>(u.q1), u.delta,
                                           derive_seed(cfg.seed, static_cast<std::uint64_t>(n), 0));
    Matrix<Scalar> M(n, E.gamma + 1);
    M.col(0) = u.g;
    M.rightCols(E.gamma) = E.vectors;

    for (double snr : cfg.snr_db) {
      double err_sum = 0.0;
      double bound_sum = 0.0;
      int correct = 0;
      for (int trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t trial_seed = derive_seed(
            derive_seed(cfg.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial + 1)),
            static_cast<std::uint64_t>(std::llround(snr * 1000.0)), 1);
        Vector<Scalar> coeffs;
        const Vector<Scalar> z = random_target<Scalar>(u, 0, trial_seed, &coeffs);

        const Scalar signal_power = (M.transpose() * z).squaredNorm();
        const Scalar m_count = Scalar(E.gamma + 1);
        const Scalar sigma =
            std::sqrt(signal_power / (m_count * std::pow(Scalar(10), Scalar(snr) / Scalar(10))));

        GaussianNoiseOracle<Scalar> oracle(z, sigma, derive_seed(trial_seed, 2, 0));
        const Scalar r = Scalar(0.9) * coeffs.sum();

        NoisyTrialRow row;
        row.n = n;
        row.snr_db = snr;
        row.trial = trial;
        row.sigma = static_cast<double>(sigma);
        const auto det = detect_noisy<Scalar>(bank, oracle, r, sigma);
        row.detected = det.cone;
        row.detection_correct = det.cone == 0;
        row.detect_success_bound = static_cast<double>(det.success_bound);

        Vector<Scalar> b(E.gamma);
        for (Index k = 0; k < E.gamma; ++k) {
          b[k] = oracle.query(Vector<Scalar>(E.vectors.col(k)));
        }
        const Vector<Scalar> zr = recover_linear<Scalar>(E, b);
        row.error_db = static_cast<double>(relative_error_db<Scalar>(z, zr));

        err_sum += row.error_db;
        bound_sum += row.detect_success_bound;
        correct += row.detection_correct ? 1 : 0;

        results += std::to_string(row.n) + ',' + csv_double(row.snr_db) + ',' +
                   std::to_string(row.trial) + ',' + csv_double(row.sigma) + ',' +
                   std::to_string(row.detected) + ',' +
                   std::to_string(row.detection_correct ? 1 : 0) + ',' +
                   csv_double(row.detect_success_bound) + ',' + csv_double(row.error_db) + '\n';
        run.rows.push_back(row);
      }
      run.summaries.push_back({n, snr, static_cast<double>(correct) / cfg.trials,
                               bound_sum / cfg.trials, err_sum / cfg.trials});
    }
  }

  run.results_csv = std::move(results);
  if (!cfg.out_path.empty()) {
    write_text_file(cfg.out_path, run.results_csv);
  }
  return run;
}

// Alternating-minimization comparison baseline with i.i.d. standard
// Gaussian real measurement vectors: spectral initialization by power
// iteration, then alternate sign estimation with a least-squares solve
// against a fixed QR factorization.  Returns the iterate with the best
// magnitude residual.  This is deliberately generic plumbing -- it makes no
// use of the cone structure and serves only as a measurement-count foil.
template <typename Scalar>
Vector<Scalar> altmin_baseline(Index n_measurements, const Vector<Scalar>& target, int iters,
                               std::uint64_t seed) {
  require_finite(target, "altmin_baseline");
  const Index n = target.size();
  if (n_measurements < 1 || n < 1) {
    throw InvalidInputError("altmin_baseline: empty problem");
  }
  Rng rng(seed);
  Matrix<Scalar> A(n_measurements, n);
  for (Index i = 0; i < n_measurements; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = Scalar(rng.gaussian());
  const Vector<Scalar> b = (A * target).cwiseAbs();
  if (b.norm() == Scalar(0)) {
    return Vector<Scalar>::Zero(n);
  }

  const Scalar norm_est = std::sqrt(b.squaredNorm() / Scalar(n_measurements));
  const Eigen::HouseholderQR<Matrix<Scalar>> qr(A);
  Vector<Scalar> best = Vector<Scalar>::Zero(n);
  Scalar best_resid = b.norm();

  const auto refine = [&](Vector<Scalar> x) {
    for (int it = 0; it < iters; ++it) {
      const Vector<Scalar> signs =
          (A * x).unaryExpr([](Scalar v) { return v >= Scalar(0) ? Scalar(1) : Scalar(-1); });
      const Vector<Scalar> x_next = qr.solve(Vector<Scalar>(signs.cwiseProduct(b)));
      const Scalar step = (x_next - x).norm();
      const Scalar resid = ((A * x_next).cwiseAbs() - b).norm();
      if (resid < best_resid) {
        best_resid = resid;
        best = x_next;
      }
      const Scalar scale = std::max(Scalar(1), x.norm());
      x = x_next;
      if (step <= Scalar(1e-10) * scale) {
        break;
      }
    }
  };

  // Spectral start -- leading eigenvector of A^T diag(b^2) A, scaled to the
  // norm estimate -- plus a few random restarts against the same
  // measurements: sign iterations have shallow local minima, and restarts
  // are the standard cheap way out for a fixed measurement budget.
  Vector<Scalar> x0(n);
  for (Index i = 0; i < n; ++i) x0[i] = Scalar(rng.gaussian());
  x0 /= x0.norm();
  for (int it = 0; it < 50; ++it) {
    x0 = A.transpose() * (b.array().square() * (A * x0).array()).matrix();
    const Scalar nrm = x0.norm();
    if (nrm == Scalar(0)) {
      break;
    }
    x0 /= nrm;
  }
  refine(Vector<Scalar>(norm_est * x0));
  for (int restart = 0; restart < 4; ++restart) {
    Vector<Scalar> xr(n);
    for (Index i = 0; i < n; ++i) xr[i] = Scalar(rng.gaussian());
    refine(Vector<Scalar>(norm_est * xr.normalized()));
  }
  return best;
}

struct StabilityCurves {
  std::vector<Index> gammas;
  std::vector<double> grid;
  std::string csv;  // x,gamma,probability,probability_raw
};

// Tabulate the recovery success bound as a function of x = epsilon / (2
// sigma^2).  The probability column is clamped to [0, 1]; the raw column
// keeps the vacuous negative values so the tabulation stays invertible.
inline StabilityCurves stability_curves(const std::vector<Index>& gammas,
                                        const std::vector<double>& grid,
                                        const std::string& out_path = {}) {
  if (gammas.empty() || grid.empty()) {
    throw InvalidInputError("stability_curves: need at least one gamma and one grid point");
  }
  StabilityCurves out;
  out.gammas = gammas;
  out.grid = grid;
  std::string csv = "x,gamma,probability,probability_raw\n";
  for (Index gamma : gammas) {
    for (double x : grid) {
      const double raw = success_probability<double>(gamma, 1.0, 2.0 * x);
      const double clamped = std::clamp(raw, 0.0, 1.0);
      csv += csv_double(x) + ',' + std::to_string(gamma) + ',' + csv_double(clamped) + ',' +
             csv_double(raw) + '\n';
    }
  }
  out.csv = std::move(csv);
  if (!out_path.empty()) {
    write_text_file(out_path, out.csv);
  }
  return out;
}

}  // namespace conepr
