// Command-line front end: detectability analysis, measurement design,
// recovery from measurement files, and the simulation/stability sweeps.

#include "conepr/harness.hpp"
#include "conepr/serialization.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace conepr;

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
      throw InvalidInputError(std::string(what) + ": cannot parse '" + tok + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw InvalidInputError(std::string(what) + ": empty list");
  }
  return out;
}

// "begin:step:end", endpoints inclusive.
std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> parts;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ':')) parts.push_back(std::strtod(tok.c_str(), nullptr));
  if (parts.size() != 3 || parts[1] <= 0.0 || parts[2] < parts[0]) {
    throw InvalidInputError("grid: expected begin:step:end with positive step");
  }
  std::vector<double> grid;
  const long count = std::lround((parts[2] - parts[0]) / parts[1]);
  for (long i = 0; i <= count; ++i) {
    const double x = parts[0] + static_cast<double>(i) * parts[1];
    if (x > parts[2] + parts[1] * 1e-9) break;
    grid.push_back(x);
  }
  return grid;
}

int cmd_analyze(const std::string& union_path) {
  const auto u = union_from_json<double>(load_json_file(union_path));
  const auto rep = detectability_check(u);
  json out;
  out["cone_count"] = u.cone_count();
  out["ambient_dim"] = u.ambient_dim();
  out["detectable"] = rep.detectable;
  if (rep.bank) {
    out["bank"] = to_json<double>(*rep.bank);
  }
  if (rep.failing_pair) {
    out["failing_pair"] = json::array({rep.failing_pair->first, rep.failing_pair->second});
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_design(const std::string& cone_path, const std::string& q1_path, double delta,
               bool has_delta, std::uint64_t seed) {
  const ConeGenerator<double> cone(matrix_from_json<double>(load_json_file(cone_path), "cone"));
  std::optional<Vector<double>> q1;
  if (!q1_path.empty()) {
    q1 = vector_from_json<double>(load_json_file(q1_path), "q1");
  }
  std::optional<double> delta_opt;
  if (has_delta) {
    delta_opt = delta;
  }
  const auto E = design_ensemble<double>(cone, q1, delta_opt, seed, cone_path);
  std::cout << to_json<double>(E).dump(2) << '\n';
  return 0;
}

int cmd_recover(const std::string& ensemble_path, const std::string& measurements_path,
                bool linear) {
  const auto E = ensemble_from_json<double>(load_json_file(ensemble_path));
  const auto b = vector_from_json<double>(load_json_file(measurements_path), "measurements");
  json out;
  if (linear) {
    out["z"] = to_json<double>(recover_linear<double>(E, b));
  } else {
    const auto res = recover<double>(E, b);
    out["z"] = to_json<double>(res.z);
    out["residual"] = res.residual;
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_simulate(const ExperimentConfig& cfg) {
  if (cfg.mode == ExperimentMode::Noiseless) {
    const auto run = run_noiseless<double>(cfg);
    std::printf("%8s %16s %18s\n", "n", "mean_error_db", "mean_recover_sec");
    for (const auto& s : run.summaries) {
      std::printf("%8lld %16.6f %18.3e\n", static_cast<long long>(s.n), s.mean_error_db,
                  s.mean_recover_seconds);
    }
    std::printf("results: %s\ntiming:  %s\n", cfg.out_path.c_str(),
                timing_path_for(cfg.out_path).c_str());
  } else {
    const auto run = run_noisy<double>(cfg);
    std::printf("%8s %10s %16s %16s %16s\n", "n", "snr_db", "detect_rate", "detect_bound",
                "mean_error_db");
    for (const auto& s : run.summaries) {
      std::printf("%8lld %10.1f %16.4f %16.4f %16.6f\n", static_cast<long long>(s.n), s.snr_db,
                  s.detection_rate, s.mean_success_bound, s.mean_error_db);
    }
    std::printf("results: %s\n", cfg.out_path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase retrieval on unions of finitely generated cones: "
               "detect the cone from magnitude measurements, then recover the signal "
               "with an FFT-time circulant solve."};
  app.require_subcommand(1);

  std::string union_path;
  auto* analyze = app.add_subcommand("analyze", "Detectability report for a union of cones");
  analyze->add_option("union", union_path, "union JSON file: {\"cones\": [matrix, ...]}")
      ->required();

  std::string cone_path, q1_path;
  double delta = 0.0;
  std::uint64_t design_seed = 0;
  auto* design = app.add_subcommand("design", "Build a measurement ensemble for one cone");
  design->add_option("cone", cone_path, "generator matrix JSON file")->required();
  auto* q1_opt = design->add_option("--q1", q1_path, "interior point JSON file (vector)");
  auto* delta_opt = design->add_option("--delta", delta, "fixed spacing override");
  design->add_option("--seed", design_seed, "random seed for the anchor search");
  (void)q1_opt;

  std::string ensemble_path, measurements_path;
  bool linear = false;
  auto* rec = app.add_subcommand("recover", "Recover a signal from magnitude measurements");
  rec->add_option("ensemble", ensemble_path, "ensemble JSON file")->required();
  rec->add_option("measurements", measurements_path, "measurement vector JSON file")->required();
  rec->add_flag("--linear", linear, "signed linear core (for noisy, possibly negative data)");

  ExperimentConfig cfg;
  long long n_min = 8, n_max = 64, n_step = 1;
  std::string mode_str = "noiseless", snr_str;
  bool paper_family = false;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo sweep over the built-in two-cone family");
  sim->add_flag("--paper", paper_family, "use the built-in simulation family (required)");
  sim->add_option("--n-min", n_min, "smallest signal length")->required();
  sim->add_option("--n-max", n_max, "largest signal length")->required();
  sim->add_option("--n-step", n_step, "signal length stride (default 1)");
  sim->add_option("--trials", cfg.trials, "trials per configuration")->required();
  sim->add_option("--mode", mode_str, "noiseless or noisy")->required();
  sim->add_option("--snr", snr_str, "comma-separated SNR list in dB (noisy mode)");
  sim->add_option("--seed", cfg.seed, "global random seed");
  sim->add_option("--out", cfg.out_path, "results CSV path")->required();
  sim->add_flag("--altmin", cfg.run_altmin, "add the alternating-minimization baseline column");

  std::string gammas_str = "81,801,8001", grid_str = "0:0.1:10", curves_out;
  auto* stab = app.add_subcommand("stability", "Tabulate recovery success-probability curves");
  stab->add_option("--gammas", gammas_str, "comma-separated measurement counts");
  stab->add_option("--grid", grid_str, "x grid as begin:step:end");
  stab->add_option("--out", curves_out, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      return cmd_analyze(union_path);
    }
    if (design->parsed()) {
      return cmd_design(cone_path, q1_path, delta, delta_opt->count() > 0, design_seed);
    }
    if (rec->parsed()) {
      return cmd_recover(ensemble_path, measurements_path, linear);
    }
    if (sim->parsed()) {
      if (!paper_family) {
        throw InvalidInputError("simulate: only the built-in family is available; pass --paper");
      }
      if (n_min < 3 || n_max < n_min || n_step < 1) {
        throw InvalidInputError("simulate: need 3 <= n-min <= n-max and a positive stride");
      }
      for (long long n = n_min; n <= n_max; n += n_step) {
        cfg.n_values.push_back(static_cast<Index>(n));
      }
      cfg.mode = mode_str == "noisy" ? ExperimentMode::Noisy : ExperimentMode::Noiseless;
      if (mode_str != "noisy" && mode_str != "noiseless") {
        throw InvalidInputError("simulate: mode must be noiseless or noisy");
      }
      if (cfg.mode == ExperimentMode::Noisy) {
        cfg.snr_db = parse_list(snr_str, "snr");
      }
      return cmd_simulate(cfg);
    }
    if (stab->parsed()) {
      std::vector<Index> gammas;
      for (double g : parse_list(gammas_str, "gammas")) {
        gammas.push_back(static_cast<Index>(g));
      }
      const auto curves = stability_curves(gammas, parse_grid(grid_str), curves_out);
      std::printf("wrote %zu rows to %s\n",
                  curves.gammas.size() * curves.grid.size(), curves_out.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
