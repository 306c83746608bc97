#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "camlevy/averaging.hpp"
#include "camlevy/cam.hpp"
#include "camlevy/sigma_est.hpp"
#include "camlevy/stats.hpp"

namespace camlevy::cli {

/// Full-versus-reduced comparison for one of the sample slow systems.
struct ExperimentConfig {
  std::string system = "linear";  ///< linear | cubic | bilinear
  double mu = 1.0;
  double zeta = 1.0;
  double c = 1.0;
  std::optional<double> rho;  ///< unset: gamma*
  CamParams cam = CamParams::from_alpha_star(-1.0, 1.5, 0.1, 0.5);
  std::vector<double> eps_list{1e-1, 1e-2, 1e-3};

  /// Reduced noise scale; estimated with `sigma` when unset.
  std::optional<double> Sigma;
  sigma_est::SigmaConfig sigma = [] {
    sigma_est::SigmaConfig s;
    s.eps = 1e-4;
    s.T = 1.0;
    s.Delta = 1e-2;
    s.n_samples = 1000;
    s.repeats = 5;
    return s;
  }();

  double T = 2000.0;       ///< slow time per run after burn-in
  double burn = 20.0;      ///< discarded slow time at the start of each run
  std::size_t runs = 4;    ///< independent runs per model and eps
  std::optional<double> x0;        ///< default 0, or c for bilinear
  std::optional<double> dt_slow;   ///< default averaging::default_slow_step
  double reduced_dt = 1e-2;
  double record_dt = 5e-2;         ///< spacing of stored states

  double core_lo = -5.0;
  double core_hi = 5.0;
  std::size_t core_bins = 100;
  std::size_t tail_bins = 12;

  std::vector<double> acd_lags{0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
  std::size_t acd_blocks = 25;  ///< ACD blocks per run

  std::uint64_t master_seed = 1;
  unsigned workers = 1;
};

struct ModelSummary {
  stats::Histogram histogram;
  std::vector<stats::AcdSummary> acd;
  std::size_t truncated_runs = 0;
  double min_value = 0.0;
  std::vector<std::string> warnings;
};

struct ExperimentLevel {
  double eps = 0.0;
  ModelSummary full;
  ModelSummary reduced;
  double l1 = 0.0;  ///< histogram L1 distance full vs reduced
};

struct ExperimentResult {
  double Sigma = 0.0;
  bool Sigma_estimated = false;
  CamDerived derived;
  std::vector<ExperimentLevel> levels;  ///< in the order of eps_list
  /// Number of eps steps (in decreasing eps) where L1 increased.
  std::size_t ordering_violations = 0;
};

SlowSystem make_system(const ExperimentConfig& config);

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Per-eps histogram and ACD CSVs plus summary.json in `dir`.
void write_experiment(const std::filesystem::path& dir,
                      const ExperimentConfig& config,
                      const ExperimentResult& result);

nlohmann::json experiment_summary(const ExperimentConfig& config,
                                  const ExperimentResult& result);

}  // namespace camlevy::cli
