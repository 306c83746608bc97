#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "camlevy/errors.hpp"
#include "camlevy/io.hpp"
#include "camlevy/parallel.hpp"

namespace camlevy::cli {

namespace {

std::size_t ratio_steps(double big, double small, const char* what) {
  const double r = big / small;
  const double n = std::round(r);
  if (n < 1.0 || std::abs(r - n) > 1e-9 * n) {
    throw DomainError(std::string("experiment: ") + what +
                      " must be an integer multiple of the time step");
  }
  return static_cast<std::size_t>(n);
}

std::string eps_tag(double eps) {
  std::ostringstream s;
  s << eps;
  return s.str();
}

// Simulates `runs` trajectories with `simulate(r)` and pools their stored
// states after burn-in.
template <class Simulate>
ModelSummary summarize(const ExperimentConfig& cfg,
                       const std::vector<double>& edges, Simulate&& simulate) {
  std::vector<Trajectory> runs(cfg.runs);
  parallel_for(cfg.runs, cfg.workers,
               [&](std::size_t r) { runs[r] = simulate(r); });

  const auto burn = static_cast<std::size_t>(std::round(cfg.burn / cfg.record_dt));
  std::vector<std::size_t> lags;
  for (const double lag : cfg.acd_lags) {
    lags.push_back(static_cast<std::size_t>(std::round(lag / cfg.record_dt)));
  }

  ModelSummary out;
  out.histogram = stats::histogram({}, edges);
  out.min_value = std::numeric_limits<double>::infinity();
  std::vector<std::span<const double>> blocks;
  for (const auto& traj : runs) {
    if (traj.truncated) ++out.truncated_runs;
    out.warnings.insert(out.warnings.end(), traj.warnings.begin(),
                        traj.warnings.end());
    if (traj.values.size() <= burn) continue;
    const std::span<const double> kept(traj.values.data() + burn,
                                       traj.values.size() - burn);
    stats::accumulate(out.histogram, kept);
    for (const double v : traj.values) out.min_value = std::min(out.min_value, v);
    if (!traj.truncated && cfg.acd_blocks > 0 && !lags.empty()) {
      for (const auto block : stats::split_blocks(kept, cfg.acd_blocks)) {
        if (block.size() > *std::max_element(lags.begin(), lags.end())) {
          blocks.push_back(block);
        }
      }
    }
  }
  if (!blocks.empty()) out.acd = stats::acd_ensemble(blocks, lags);
  return out;
}

}  // namespace

SlowSystem make_system(const ExperimentConfig& cfg) {
  SlowSystem sys;
  if (cfg.system == "linear") {
    sys = averaging::linear(cfg.mu, cfg.zeta);
  } else if (cfg.system == "cubic") {
    sys = averaging::cubic(cfg.mu, cfg.zeta);
  } else if (cfg.system == "bilinear") {
    sys = averaging::bilinear(cfg.c, cfg.zeta);
  } else {
    throw DomainError("experiment: unknown system '" + cfg.system +
                      "' (expected linear, cubic or bilinear)");
  }
  sys.rho = cfg.rho;
  return sys;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const SlowSystem sys = make_system(cfg);
  averaging::validate(sys);
  ExperimentResult result;
  result.derived = cam::derive(cfg.cam);
  if (cfg.eps_list.empty()) throw DomainError("experiment: empty eps list");
  if (cfg.runs == 0) throw DomainError("experiment: runs must be positive");
  if (!(cfg.T > 0.0) || !(cfg.burn >= 0.0) || !(cfg.record_dt > 0.0)) {
    throw DomainError("experiment: T, burn and record_dt must be positive");
  }
  if (cfg.Sigma) {
    result.Sigma = *cfg.Sigma;
  } else {
    sigma_est::SigmaConfig sc = cfg.sigma;
    sc.master_seed = cfg.master_seed;
    sc.workers = cfg.workers;
    result.Sigma = sigma_est::estimate_sigma(cfg.cam, sc).Sigma;
    result.Sigma_estimated = true;
  }

  const double x0 = cfg.x0.value_or(cfg.system == "bilinear" ? cfg.c : 0.0);
  const auto edges = stats::heavy_tail_edges(cfg.core_lo, cfg.core_hi,
                                             cfg.core_bins, cfg.tail_bins);
  const double total = cfg.burn + cfg.T;

  const std::size_t reduced_every =
      ratio_steps(cfg.record_dt, cfg.reduced_dt, "record_dt");
  const auto reduced_steps = static_cast<std::size_t>(
      std::ceil(total / cfg.reduced_dt - 1e-9));
  const bool reduced_depends_on_eps =
      cfg.rho && std::abs(*cfg.rho - result.derived.gamma_star) > 1e-12;

  ModelSummary shared_reduced;
  for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
    const double eps = cfg.eps_list[i];
    const std::uint64_t level = static_cast<std::uint64_t>(i + 1) << 32;
    ExperimentLevel lvl;
    lvl.eps = eps;

    const double dt_slow =
        cfg.dt_slow.value_or(averaging::default_slow_step(sys, eps));
    const std::size_t full_every = ratio_steps(cfg.record_dt, dt_slow, "record_dt");
    const auto full_steps =
        static_cast<std::size_t>(std::ceil(total / dt_slow - 1e-9));
    averaging::RunOptions full_opts;
    full_opts.record_every = full_every;
    lvl.full = summarize(cfg, edges, [&](std::size_t r) {
      RngStream rng(cfg.master_seed, level | r);
      return averaging::simulate_full(sys, cfg.cam, eps, x0, dt_slow,
                                      full_steps, rng, full_opts);
    });

    if (i == 0 || reduced_depends_on_eps) {
      const auto rsys = averaging::reduce(sys, cfg.cam, result.Sigma, eps);
      averaging::RunOptions red_opts;
      red_opts.record_every = reduced_every;
      const std::uint64_t base =
          (reduced_depends_on_eps ? level : 0) | (std::uint64_t{1} << 31);
      shared_reduced = summarize(cfg, edges, [&](std::size_t r) {
        RngStream rng(cfg.master_seed, base | r);
        return averaging::simulate_reduced(rsys, x0, cfg.reduced_dt,
                                           reduced_steps, rng, red_opts);
      });
    }
    lvl.reduced = shared_reduced;
    lvl.l1 = stats::l1_distance(lvl.full.histogram, lvl.reduced.histogram);
    result.levels.push_back(std::move(lvl));
  }

  // Ordering check in decreasing eps.
  std::vector<const ExperimentLevel*> order;
  for (const auto& l : result.levels) order.push_back(&l);
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->eps > b->eps; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i]->l1 > order[i - 1]->l1) ++result.ordering_violations;
  }
  return result;
}

nlohmann::json experiment_summary(const ExperimentConfig& cfg,
                                  const ExperimentResult& result) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : result.levels) {
    levels.push_back({{"eps", l.eps},
                      {"l1", l.l1},
                      {"full_truncated_runs", l.full.truncated_runs},
                      {"reduced_truncated_runs", l.reduced.truncated_runs},
                      {"full_min", l.full.min_value},
                      {"reduced_min", l.reduced.min_value},
                      {"full_outside_edges",
                       l.full.histogram.below + l.full.histogram.above},
                      {"reduced_outside_edges",
                       l.reduced.histogram.below + l.reduced.histogram.above}});
  }
  const auto& d = result.derived;
  return {{"system", cfg.system},
          {"cam", {{"L", cfg.cam.L}, {"E", cfg.cam.E}, {"g", cfg.cam.g}, {"b", cfg.cam.b}}},
          {"alpha_star", d.alpha_star},
          {"beta_star", d.beta_star},
          {"gamma_star", d.gamma_star},
          {"Sigma", result.Sigma},
          {"Sigma_estimated", result.Sigma_estimated},
          {"runs", cfg.runs},
          {"T", cfg.T},
          {"master_seed", cfg.master_seed},
          {"levels", levels},
          {"ordering_violations", result.ordering_violations},
          {"l1_nonincreasing", result.ordering_violations <= 1}};
}

void write_experiment(const std::filesystem::path& dir,
                      const ExperimentConfig& cfg,
                      const ExperimentResult& result) {
  for (const auto& l : result.levels) {
    const std::string tag = eps_tag(l.eps);
    io::write_histogram(dir / ("hist_full_eps" + tag + ".csv"), l.full.histogram);
    io::write_histogram(dir / ("hist_reduced_eps" + tag + ".csv"),
                        l.reduced.histogram);
    io::write_acd(dir / ("acd_full_eps" + tag + ".csv"), l.full.acd, cfg.record_dt);
    io::write_acd(dir / ("acd_reduced_eps" + tag + ".csv"), l.reduced.acd,
                  cfg.record_dt);
  }
  io::write_json(dir / "summary.json", experiment_summary(cfg, result));
}

}  // namespace camlevy::cli
