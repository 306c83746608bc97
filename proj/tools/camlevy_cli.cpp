// camlevy: command-line front end for simulation, estimation and the
// full-versus-reduced experiments. Exit codes: 0 success, 2 domain or
// configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <string>
#include <vector>

#include "camlevy/cam.hpp"
#include "camlevy/errors.hpp"
#include "camlevy/io.hpp"
#include "camlevy/oulp.hpp"
#include "camlevy/parallel.hpp"
#include "camlevy/sigma_est.hpp"
#include "camlevy/stable.hpp"
#include "camlevy/stats.hpp"
#include "experiment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace camlevy;

namespace {

// Options registered on a subcommand that may also come from the --config
// JSON document (same key as the long flag name). Flags win.
class Options {
 public:
  explicit Options(CLI::App* app) : app_(app) {
    app_->add_option("--seed", seed, "master seed")->capture_default_str();
    app_->add_option("--workers", workers, "worker threads")->capture_default_str();
    app_->add_option("--config", config, "JSON config file");
    app_->add_option("--out", out, "output path")->capture_default_str();
  }

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help) {
    CLI::Option* opt =
        app_->add_option("--" + name, var, help)->capture_default_str();
    fill_.push_back([opt, name, &var](const json& cfg) {
      if (opt->count() == 0 && cfg.contains(name)) {
        var = cfg.at(name).template get<T>();
      }
    });
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& var, const std::string& help) {
    CLI::Option* opt = app_->add_flag("--" + name, var, help);
    fill_.push_back([opt, name, &var](const json& cfg) {
      if (opt->count() == 0 && cfg.contains(name)) var = cfg.at(name).get<bool>();
    });
    return opt;
  }

  /// Loads --config and fills every option not given on the command line.
  void resolve() {
    if (config.empty()) return;
    const json cfg = io::read_json(config);
    if (!cfg.is_object()) throw DomainError("config: top level must be an object");
    for (const auto& f : fill_) f(cfg);
    if (cfg.contains("seed") && app_->get_option("--seed")->count() == 0) {
      seed = cfg.at("seed").get<std::uint64_t>();
    }
    if (cfg.contains("workers") && app_->get_option("--workers")->count() == 0) {
      workers = cfg.at("workers").get<unsigned>();
    }
    if (cfg.contains("out") && app_->get_option("--out")->count() == 0) {
      out = cfg.at("out").get<std::string>();
    }
  }

  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string config;
  std::string out;

 private:
  CLI::App* app_;
  std::vector<std::function<void(const json&)>> fill_;
};

struct CamFlags {
  double L = -1.0;
  double E = std::sqrt(2.0 / 1.5);
  double g = 0.1;
  double b = 0.5;
  double alpha_star = 0.0;

  void add(Options& o) {
    o.add("L", L, "CAM drift rate (< 0)");
    o.add("E", E, "CAM multiplicative amplitude");
    o.add("g", g, "CAM correlated additive amplitude");
    o.add("b", b, "CAM independent additive amplitude");
    o.add("alpha-star", alpha_star, "if > 0, choose E so that alpha* = -2L/E^2");
  }
  CamParams params() const {
    if (alpha_star > 0.0) return CamParams::from_alpha_star(L, alpha_star, g, b);
    return {L, E, g, b};
  }
};

struct SigmaFlags {
  sigma_est::SigmaConfig c;
  std::string units = "sample";

  void add(Options& o) {
    o.add("eps", c.eps, "time-scale separation");
    o.add("T", c.T, "integration horizon");
    o.add("delta", c.Delta, "partition length Delta");
    o.add("n-samples", c.n_samples, "realizations N_S per estimate");
    o.add("dt", c.dt, "fast step (0: eps/10)");
    o.add("repeats", c.repeats, "independent estimates for quartiles");
    add_fit(o);
    o.add("min-delta-ratio", c.min_delta_ratio, "Condition A threshold on Delta/eps");
    o.add("min-partitions", c.min_partitions, "Condition B threshold on N_Y");
  }
  void add_fit(Options& o) {
    o.add("l-min", c.fit.l_min, "lowest fit wavenumber");
    o.add("l-max", c.fit.l_max, "highest fit wavenumber");
    o.add("n-grid", c.fit.n_grid, "fit grid points");
    o.add("grid-units", units, "sample (l in units of 1/IQR scale) or absolute");
  }
  sigma_est::SigmaConfig config(const Options& o) {
    if (units == "sample") {
      c.fit.units = sigma_est::GridUnits::SampleScale;
    } else if (units == "absolute") {
      c.fit.units = sigma_est::GridUnits::Absolute;
    } else {
      throw DomainError("grid-units must be 'sample' or 'absolute'");
    }
    c.master_seed = o.seed;
    c.workers = o.workers;
    return c;
  }
};

Trajectory thin(Trajectory traj, std::size_t stride) {
  if (stride <= 1) return traj;
  std::vector<double> kept;
  for (std::size_t n = 0; n < traj.values.size(); n += stride) {
    kept.push_back(traj.values[n]);
  }
  traj.values = std::move(kept);
  traj.dt *= static_cast<double>(stride);
  return traj;
}

fs::path out_or(const Options& o, const std::string& fallback) {
  return o.out.empty() ? fs::path(fallback) : fs::path(o.out);
}

json quartiles_json(const stats::Quartiles& q) {
  return {{"q25", q.q25}, {"median", q.median}, {"q75", q.q75}};
}

// Sample spacing from the trajectory sidecar when present.
double sidecar_dt(const fs::path& csv) {
  fs::path sidecar = csv;
  sidecar.replace_extension(".json");
  if (!fs::exists(sidecar)) return 1.0;
  const json meta = io::read_json(sidecar);
  return meta.value("dt", 1.0);
}

// Consecutive partition integrals from `chunks` independent paths, chunk c
// on stream (seed, c).
std::vector<double> partition_samples(const CamParams& p, double eps,
                                      double delta, std::size_t count,
                                      double dt, std::size_t chunks,
                                      const Options& o) {
  chunks = std::max<std::size_t>(1, std::min(chunks, count));
  std::vector<std::vector<double>> parts(chunks);
  parallel_for(chunks, o.workers, [&](std::size_t c) {
    const std::size_t n = count / chunks + (c < count % chunks ? 1 : 0);
    RngStream rng(o.seed, c);
    parts[c] = sigma_est::partition_integrals(p, eps, delta, n, dt, rng);
  });
  std::vector<double> all;
  for (const auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and stable-reduction toolkit for CAM-noise systems"};
  app.require_subcommand(1);

  // simulate-cam -----------------------------------------------------------
  auto* sim_cam = app.add_subcommand("simulate-cam", "simulate the CAM SDE");
  Options sim_cam_o(sim_cam);
  CamFlags sim_cam_p;
  sim_cam_p.add(sim_cam_o);
  double sc_eps = 1.0, sc_dt = 0.01, sc_y0 = 0.0;
  std::size_t sc_steps = 1000, sc_stride = 1;
  bool sc_stationary = false;
  sim_cam_o.add("eps", sc_eps, "time-scale separation (1: unit-time process)");
  sim_cam_o.add("dt", sc_dt, "time step");
  sim_cam_o.add("steps", sc_steps, "number of steps");
  sim_cam_o.add("y0", sc_y0, "initial value");
  sim_cam_o.add("stride", sc_stride, "store every n-th state");
  sim_cam_o.flag("stationary-start", sc_stationary,
                 "start from an exact stationary draw instead of y0");
  sim_cam->callback([&] {
    sim_cam_o.resolve();
    const CamParams p = sim_cam_p.params();
    cam::derive(p);
    RngStream rng(sim_cam_o.seed, 0);
    const double y0 = sc_stationary ? cam::sample_stationary(p, rng) : sc_y0;
    Trajectory traj = thin(cam::simulate_fast(p, sc_eps, y0, sc_dt, sc_steps, rng),
                           sc_stride);
    if (sc_steps == 0) traj.values.clear();
    const fs::path out = out_or(sim_cam_o, "cam.csv");
    io::write_trajectory(out, traj);
    std::cout << "wrote " << traj.values.size() << " rows to " << out.string()
              << '\n';
    for (const auto& w : traj.warnings) std::cerr << "warning: " << w << '\n';
  });

  // simulate-oulp ----------------------------------------------------------
  auto* sim_oulp = app.add_subcommand("simulate-oulp",
                                      "simulate an Ornstein-Uhlenbeck-Levy process");
  Options sim_oulp_o(sim_oulp);
  OulpParams op;
  double so_eps = 1.0, so_dt = 0.01, so_z0 = 0.0;
  std::size_t so_steps = 1000, so_stride = 1;
  bool so_stationary = false;
  sim_oulp_o.add("theta", op.theta, "relaxation rate");
  sim_oulp_o.add("sigma-z", op.sigma_z, "noise scale");
  sim_oulp_o.add("alpha", op.alpha, "stability index");
  sim_oulp_o.add("beta", op.beta, "skewness");
  sim_oulp_o.add("eps", so_eps, "time-scale separation");
  sim_oulp_o.add("dt", so_dt, "time step");
  sim_oulp_o.add("steps", so_steps, "number of steps");
  sim_oulp_o.add("z0", so_z0, "initial value");
  sim_oulp_o.add("stride", so_stride, "store every n-th state");
  sim_oulp_o.flag("stationary-start", so_stationary,
                  "start from a draw of the stationary law instead of z0");
  sim_oulp->callback([&] {
    sim_oulp_o.resolve();
    op.validate();
    RngStream rng(sim_oulp_o.seed, 0);
    const double z0 = so_stationary ? stable::sample(op.stationary_law(), rng) : so_z0;
    Trajectory traj =
        thin(oulp::simulate(op, so_eps, z0, so_dt, so_steps, rng), so_stride);
    if (so_steps == 0) traj.values.clear();
    const fs::path out = out_or(sim_oulp_o, "oulp.csv");
    io::write_trajectory(out, traj);
    std::cout << "wrote " << traj.values.size() << " rows to " << out.string()
              << '\n';
    for (const auto& w : traj.warnings) std::cerr << "warning: " << w << '\n';
  });

  // derive-params ----------------------------------------------------------
  auto* derive = app.add_subcommand("derive-params",
                                    "stable-reduction parameters of a CAM process");
  Options derive_o(derive);
  CamFlags derive_p;
  derive_p.add(derive_o);
  derive->callback([&] {
    derive_o.resolve();
    const CamParams p = derive_p.params();
    const CamDerived d = cam::derive(p);
    const json doc = {{"L", p.L},
                      {"E", p.E},
                      {"g", p.g},
                      {"b", p.b},
                      {"nu", d.nu},
                      {"alpha_star", d.alpha_star},
                      {"beta_star", d.beta_star},
                      {"sigma_star", d.sigma_star},
                      {"gamma_star", d.gamma_star},
                      {"normalization", d.normalization},
                      {"h_plus", d.h_plus},
                      {"h_minus", d.h_minus},
                      {"theta", -p.drift_rate()}};
    std::cout << doc.dump(2) << '\n';
    if (!derive_o.out.empty()) io::write_json(derive_o.out, doc);
  });

  // estimate-sigma ---------------------------------------------------------
  auto* est = app.add_subcommand("estimate-sigma",
                                 "estimate the reduced noise scale Sigma");
  Options est_o(est);
  CamFlags est_p;
  est_p.add(est_o);
  SigmaFlags est_s;
  est_s.add(est_o);
  est->callback([&] {
    est_o.resolve();
    const auto e = sigma_est::estimate_sigma(est_p.params(), est_s.config(est_o));
    const json report = io::sigma_report(e);
    io::write_json(out_or(est_o, "sigma.json"), report);
    std::cout << "Sigma = " << io::format_number(e.Sigma) << " (sigma_Y = "
              << io::format_number(e.sigma_Y) << ", N_Y = " << e.n_partitions
              << ")\n";
  });

  // sweep-sigma ------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep-sigma",
                                   "sigma_Y across Delta or eps (scaling laws)");
  Options sweep_o(sweep);
  CamFlags sweep_p;
  sweep_p.add(sweep_o);
  SigmaFlags sweep_s;
  sweep_s.c.eps = 1e-4;
  sweep_s.add(sweep_o);
  std::string sweep_vary = "delta";
  std::vector<double> sweep_values{5e-4, 1e-3, 2e-3, 4e-3};
  std::size_t sweep_partitions = 100;
  sweep_o.add("vary", sweep_vary, "delta (T = N_Y Delta) or eps (T, Delta fixed)");
  sweep_o.add("values", sweep_values, "values of the varied parameter");
  sweep_o.add("n-partitions", sweep_partitions, "N_Y for the Delta sweep");
  sweep->callback([&] {
    sweep_o.resolve();
    const CamParams p = sweep_p.params();
    const CamDerived d = cam::derive(p);
    if (sweep_vary != "delta" && sweep_vary != "eps") {
      throw DomainError("vary must be 'delta' or 'eps'");
    }
    std::vector<io::SweepRow> rows;
    std::vector<double> lx, ly;
    for (const double v : sweep_values) {
      sigma_est::SigmaConfig c = sweep_s.config(sweep_o);
      if (sweep_vary == "delta") {
        c.Delta = v;
        c.T = v * static_cast<double>(sweep_partitions);
      } else {
        c.eps = v;
      }
      c.dt = sweep_s.c.dt;
      const auto e = sigma_est::estimate_sigma(p, c);
      rows.push_back({e.config.eps, e.config.Delta, e.sigma_Y,
                      e.sigma_Y_quartiles.q25, e.sigma_Y_quartiles.q75});
      lx.push_back(std::log(v));
      ly.push_back(std::log(e.sigma_Y));
    }
    const fs::path out = out_or(sweep_o, "sweep.csv");
    io::write_sweep(out, rows);
    json summary = {{"vary", sweep_vary},
                    {"expected_slope",
                     sweep_vary == "delta" ? 1.0 / d.alpha_star : d.gamma_star}};
    if (lx.size() >= 2) summary["slope"] = stats::fit_line(lx, ly).slope;
    fs::path side = out;
    side.replace_extension(".json");
    io::write_json(side, summary);
    std::cout << summary.dump() << '\n';
  });

  // acd --------------------------------------------------------------------
  auto* acd = app.add_subcommand("acd", "autocodifference of a stored series");
  Options acd_o(acd);
  std::string acd_input;
  std::vector<std::size_t> acd_lags{0, 1, 2, 5, 10, 20, 50, 100};
  std::size_t acd_blocks = 100;
  double acd_dt = 0.0;
  acd_o.add("input", acd_input, "trajectory CSV")->required();
  acd_o.add("lags", acd_lags, "lags in samples");
  acd_o.add("blocks", acd_blocks, "non-overlapping blocks for quartiles");
  acd_o.add("dt", acd_dt, "sample spacing (0: from the sidecar, else 1)");
  acd->callback([&] {
    acd_o.resolve();
    const auto series = io::read_series(acd_input);
    const auto blocks = stats::split_blocks(series, acd_blocks);
    const auto rows = stats::acd_ensemble(blocks, acd_lags);
    const double dt = acd_dt > 0.0 ? acd_dt : sidecar_dt(acd_input);
    const fs::path out = out_or(acd_o, "acd.csv");
    io::write_acd(out, rows, dt);
    std::cout << "wrote " << rows.size() << " lags to " << out.string() << '\n';
  });

  // codiff -----------------------------------------------------------------
  auto* codiff = app.add_subcommand(
      "codiff", "codifference and cosum of consecutive partition integrals");
  Options codiff_o(codiff);
  CamFlags codiff_p;
  codiff_p.add(codiff_o);
  std::string cd_input;
  double cd_eps = 1.0, cd_delta = 5.0, cd_dt = 0.0, cd_alpha = 0.0, cd_beta = 0.0;
  std::size_t cd_pairs = 10000, cd_repeats = 20;
  SigmaFlags cd_fit;
  cd_fit.add_fit(codiff_o);
  codiff_o.add("input", cd_input, "series of Y_j (otherwise simulated)");
  codiff_o.add("alpha", cd_alpha, "index for the scale fit of --input data");
  codiff_o.add("beta", cd_beta, "skewness for the scale fit of --input data");
  codiff_o.add("eps", cd_eps, "time-scale separation");
  codiff_o.add("delta", cd_delta, "partition length Delta");
  codiff_o.add("dt", cd_dt, "fast step (0: eps/10)");
  codiff_o.add("pairs", cd_pairs, "pairs per repeat");
  codiff_o.add("repeats", cd_repeats, "repeats (or blocks of --input)");
  codiff->callback([&] {
    codiff_o.resolve();
    const auto fit = cd_fit.config(codiff_o).fit;
    std::vector<std::vector<double>> series;
    double alpha = cd_alpha, beta = cd_beta;
    if (!cd_input.empty()) {
      if (!(alpha > 0.0)) throw DomainError("codiff: --alpha is required with --input");
      const auto all = io::read_series(cd_input);
      for (const auto block : stats::split_blocks(all, cd_repeats)) {
        series.emplace_back(block.begin(), block.end());
      }
    } else {
      const CamParams p = codiff_p.params();
      const CamDerived d = cam::derive(p);
      alpha = d.alpha_star;
      beta = d.beta_star;
      const double dt = cd_dt > 0.0 ? cd_dt : cd_eps / 10.0;
      series.resize(cd_repeats);
      parallel_for(cd_repeats, codiff_o.workers, [&](std::size_t r) {
        RngStream rng(codiff_o.seed, r);
        series[r] = sigma_est::partition_integrals(p, cd_eps, cd_delta,
                                                   cd_pairs + 1, dt, rng);
      });
    }
    std::vector<double> cd_re, cd_im, cs_re, cs_im, self;
    std::size_t unreliable = 0;
    for (const auto& y : series) {
      if (y.size() < 3) throw DomainError("codiff: too few values per repeat");
      const double s = sigma_est::fit_scale(y, alpha, beta, fit).sigma;
      const std::span<const double> all(y);
      const auto r = stats::codiff_cosum(all.first(all.size() - 1),
                                         all.subspan(1), s);
      cd_re.push_back(r.cd.real());
      cd_im.push_back(r.cd.imag());
      cs_re.push_back(r.cs.real());
      cs_im.push_back(r.cs.imag());
      self.push_back(stats::codiff_cosum(all, all, s).cd.real());
      if (r.unreliable) ++unreliable;
    }
    const json doc = {{"cd_re", quartiles_json(stats::quartiles(cd_re))},
                      {"cd_im", quartiles_json(stats::quartiles(cd_im))},
                      {"cs_re", quartiles_json(stats::quartiles(cs_re))},
                      {"cs_im", quartiles_json(stats::quartiles(cs_im))},
                      {"cd_self", quartiles_json(stats::quartiles(self))},
                      {"repeats", series.size()},
                      {"unreliable", unreliable},
                      {"delta_over_eps", cd_delta / cd_eps}};
    std::cout << doc.dump(2) << '\n';
    if (!codiff_o.out.empty()) io::write_json(codiff_o.out, doc);
  });

  // tails ------------------------------------------------------------------
  auto* tails = app.add_subcommand("tails", "tail exponent and skew ratio");
  Options tails_o(tails);
  CamFlags tails_p;
  tails_p.add(tails_o);
  std::string tl_input, tl_hist;
  double tl_eps = 1.0, tl_delta = 1.0, tl_dt = 0.0;
  std::size_t tl_count = 100000, tl_chunks = 16;
  stats::TailFitOptions tl_opts;
  tails_o.add("input", tl_input, "series CSV (otherwise simulated Y_j)");
  tails_o.add("eps", tl_eps, "time-scale separation");
  tails_o.add("delta", tl_delta, "partition length Delta");
  tails_o.add("dt", tl_dt, "fast step (0: eps/10)");
  tails_o.add("count", tl_count, "number of Y_j");
  tails_o.add("chunks", tl_chunks, "independent paths the Y_j are drawn from");
  tails_o.add("quantile", tl_opts.quantile, "tail region starts at this |x| quantile");
  tails_o.add("bins-per-decade", tl_opts.bins_per_decade, "log bins per decade");
  tails_o.add("min-bin-count", tl_opts.min_bin_count, "smallest usable bin count");
  tails_o.add("histogram", tl_hist, "optional histogram CSV of the samples");
  tails->callback([&] {
    tails_o.resolve();
    std::vector<double> samples;
    json expected;
    if (!tl_input.empty()) {
      samples = io::read_series(tl_input);
    } else {
      const CamParams p = tails_p.params();
      const CamDerived d = cam::derive(p);
      const double dt = tl_dt > 0.0 ? tl_dt : tl_eps / 10.0;
      samples = partition_samples(p, tl_eps, tl_delta, tl_count, dt, tl_chunks,
                                  tails_o);
      expected = {{"exponent", -(1.0 + d.alpha_star)}, {"skew_ratio", d.beta_star}};
    }
    const auto fit = stats::tail_fit(samples, tl_opts);
    json doc = {{"exponent", fit.exponent},
                {"skew_ratio", fit.skew_ratio},
                {"r_lo", fit.r_lo},
                {"r_hi", fit.r_hi},
                {"tail_samples", fit.tail_samples},
                {"bins_used", fit.bins_used},
                {"samples", samples.size()}};
    if (!expected.is_null()) doc["expected"] = expected;
    std::cout << doc.dump(2) << '\n';
    if (!tails_o.out.empty()) io::write_json(tails_o.out, doc);
    if (!tl_hist.empty()) {
      const auto q = stats::quartiles(samples);
      const double half = 5.0 * std::max(q.q75 - q.q25, 1e-300);
      const auto edges = stats::heavy_tail_edges(q.median - half, q.median + half, 100);
      io::write_histogram(tl_hist, stats::histogram(samples, edges));
    }
  });

  // experiment -------------------------------------------------------------
  auto* exp = app.add_subcommand("experiment",
                                 "full versus reduced slow system comparison");
  Options exp_o(exp);
  CamFlags exp_p;
  exp_p.alpha_star = 1.5;
  exp_p.add(exp_o);
  cli::ExperimentConfig ec;
  SigmaFlags exp_s;
  exp_s.c = ec.sigma;
  double ex_sigma = 0.0, ex_x0 = std::numeric_limits<double>::quiet_NaN();
  double ex_rho = std::numeric_limits<double>::quiet_NaN();
  double ex_dt_slow = 0.0;
  exp_o.add("system", ec.system, "linear | cubic | bilinear");
  exp_o.add("mu", ec.mu, "linear/cubic drift parameter");
  exp_o.add("zeta", ec.zeta, "noise coupling amplitude");
  exp_o.add("c", ec.c, "bilinear drift constant");
  exp_o.add("rho", ex_rho, "timescale exponent (default gamma*)");
  exp_o.add("eps-list", ec.eps_list, "time-scale separations");
  exp_o.add("Sigma", ex_sigma, "reduced noise scale (0: estimate inline)");
  exp_o.add("sigma-eps", exp_s.c.eps, "eps for the inline Sigma estimate");
  exp_o.add("sigma-delta", exp_s.c.Delta, "Delta for the inline Sigma estimate");
  exp_o.add("sigma-samples", exp_s.c.n_samples, "N_S for the inline Sigma estimate");
  exp_o.add("sigma-repeats", exp_s.c.repeats, "repeats for the inline Sigma estimate");
  exp_o.add("T", ec.T, "slow time per run after burn-in");
  exp_o.add("burn", ec.burn, "discarded slow time per run");
  exp_o.add("runs", ec.runs, "runs per model and eps");
  exp_o.add("x0", ex_x0, "initial state (default 0, or c for bilinear)");
  exp_o.add("dt-slow", ex_dt_slow, "slow step of the full system (0: default rule)");
  exp_o.add("reduced-dt", ec.reduced_dt, "time step of the reduced system");
  exp_o.add("record-dt", ec.record_dt, "spacing of stored states");
  exp_o.add("core-lo", ec.core_lo, "histogram core range, low end");
  exp_o.add("core-hi", ec.core_hi, "histogram core range, high end");
  exp_o.add("core-bins", ec.core_bins, "uniform core bins");
  exp_o.add("acd-lags", ec.acd_lags, "ACD lags in time units");
  exp_o.add("acd-blocks", ec.acd_blocks, "ACD blocks per run");
  exp->callback([&] {
    exp_o.resolve();
    ec.cam = exp_p.params();
    ec.sigma = exp_s.c;
    if (ex_sigma > 0.0) ec.Sigma = ex_sigma;
    if (std::isfinite(ex_x0)) ec.x0 = ex_x0;
    if (std::isfinite(ex_rho)) ec.rho = ex_rho;
    if (ex_dt_slow > 0.0) ec.dt_slow = ex_dt_slow;
    ec.master_seed = exp_o.seed;
    ec.workers = exp_o.workers;
    const auto result = cli::run_experiment(ec);
    const fs::path dir = out_or(exp_o, "experiment");
    cli::write_experiment(dir, ec, result);
    std::cout << cli::experiment_summary(ec, result).dump(2) << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
