#include "camlevy/sigma_est.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "camlevy/errors.hpp"
#include "camlevy/parallel.hpp"
#include "camlevy/stable.hpp"

namespace camlevy::sigma_est {

namespace {

// Number of fast steps covering `span` with steps no longer than dt.
std::size_t steps_for(double span, double dt) {
  return static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
}

double stationary_start(const CamParams& p, double eps, double dt,
                        RngStream& rng) {
  const cam::FastStepper stepper(p, eps, dt);
  double y = cam::sample_stationary(p, rng);
  const std::size_t burn = steps_for(cam::burn_in_time(p) * eps, dt);
  for (std::size_t n = 0; n < burn; ++n) y = stepper.step(y, rng);
  return y;
}

}  // namespace

std::vector<double> sample_integrals(const CamParams& p, double eps, double T,
                                     std::size_t n_samples, double dt,
                                     std::uint64_t master_seed,
                                     std::uint64_t first_stream,
                                     unsigned workers) {
  p.validate();
  if (!(eps > 0.0) || !(T > 0.0) || !(dt > 0.0)) {
    throw DomainError("sigma_est: eps, T and dt must be positive");
  }
  if (dt > eps / 10.0 * (1.0 + 1e-12)) {
    throw DomainError("sigma_est: dt = " + std::to_string(dt) +
                      " violates dt <= eps/10 = " + std::to_string(eps / 10.0));
  }
  const std::size_t n_steps = steps_for(T, dt);
  const double h = T / static_cast<double>(n_steps);
  std::vector<double> out(n_samples);
  parallel_for(n_samples, workers, [&](std::size_t j) {
    RngStream rng(master_seed, first_stream + j);
    const cam::FastStepper stepper(p, eps, h);
    double y = stationary_start(p, eps, h, rng);
    double sum = 0.5 * y;
    for (std::size_t n = 1; n < n_steps; ++n) {
      y = stepper.step(y, rng);
      sum += y;
    }
    y = stepper.step(y, rng);
    sum += 0.5 * y;
    out[j] = h * sum;
  });
  return out;
}

std::vector<double> partition_integrals(const CamParams& p, double eps,
                                        double Delta, std::size_t count,
                                        double dt, RngStream& rng) {
  p.validate();
  if (!(Delta > 0.0) || !(dt > 0.0) || !(eps > 0.0)) {
    throw DomainError("sigma_est: eps, Delta and dt must be positive");
  }
  const std::size_t per_block = steps_for(Delta, dt);
  const double h = Delta / static_cast<double>(per_block);
  const cam::FastStepper stepper(p, eps, h);
  double y = stationary_start(p, eps, h, rng);
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    double sum = 0.5 * y;
    for (std::size_t n = 1; n < per_block; ++n) {
      y = stepper.step(y, rng);
      sum += y;
    }
    y = stepper.step(y, rng);
    sum += 0.5 * y;
    out[j] = h * sum;
  }
  return out;
}

ScaleFit fit_scale(std::span<const double> samples, double alpha, double beta,
                   const FitOptions& options) {
  if (samples.size() < 2) throw DomainError("fit_scale: need samples");
  if (!(options.l_max > options.l_min) || options.n_grid < 2 ||
      !(options.l_min >= 0.0)) {
    throw DomainError("fit_scale: invalid wavenumber grid");
  }
  StableParams{alpha, beta, 1.0}.validate();

  const auto q = stats::quartiles({samples.begin(), samples.end()});
  double guess = 0.5 * (q.q75 - q.q25);
  if (!(guess > 0.0)) {
    double mean_abs = 0.0;
    for (const double x : samples) mean_abs += std::abs(x);
    guess = mean_abs / static_cast<double>(samples.size());
  }
  if (!(guess > 0.0)) {
    throw NumericalError("fit_scale: degenerate samples (all equal)");
  }

  const double unit = options.units == GridUnits::SampleScale ? guess : 1.0;
  const auto grid = stats::linspace(options.l_min / unit, options.l_max / unit,
                                    options.n_grid);
  const auto target = stats::ecf(samples, grid);

  // log psi(l; sigma) = -sigma^alpha |l|^alpha Xi(l): sigma enters only
  // through the prefactor.
  std::vector<std::complex<double>> shape(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    shape[i] = stable::log_characteristic_function({alpha, beta, 1.0}, grid[i]);
  }
  const double a = stable::branch_of(alpha) == stable::Branch::Gaussian ? 2.0
                   : stable::branch_of(alpha) == stable::Branch::LogCauchy
                       ? 1.0
                       : alpha;
  auto objective = [&](double sigma) {
    const double factor = std::pow(sigma, a);
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      sum += std::norm(std::exp(factor * shape[i]) - target[i]);
    }
    return sum;
  };

  constexpr int kScan = 241;
  const double log_lo = std::log(guess) - 3.0 * std::log(10.0);
  const double log_hi = std::log(guess) + 3.0 * std::log(10.0);
  std::vector<double> sigmas(kScan), values(kScan);
  for (int i = 0; i < kScan; ++i) {
    sigmas[i] = std::exp(log_lo + (log_hi - log_lo) * i / (kScan - 1));
    values[i] = objective(sigmas[i]);
  }
  std::vector<int> minima;
  for (int i = 1; i + 1 < kScan; ++i) {
    if (values[i] < values[i - 1] && values[i] <= values[i + 1]) {
      minima.push_back(i);
    }
  }
  if (minima.empty()) {
    throw NumericalError("fit_scale: objective minimum on the scan boundary");
  }
  int best = minima.front();
  for (const int i : minima) {
    if (values[i] < values[best]) best = i;
  }
  // As sigma -> 0 or infinity the objective flattens to sum |1 - ecf|^2 and
  // sum |ecf|^2. Near these limits psi is tiny but still rotates (beta != 0),
  // which leaves shallow ripples; a minimum only competes if it lies in the
  // lower half of the range between the best value and the flat limits.
  double plateau_small = 0.0;
  double plateau_large = 0.0;
  for (const auto& v : target) {
    plateau_small += std::norm(1.0 - v);
    plateau_large += std::norm(v);
  }
  const double plateau = std::min(plateau_small, plateau_large);
  for (const int i : minima) {
    if (i == best) continue;
    if (values[i] > values[best] + 0.5 * (plateau - values[best])) continue;
    const int lo = std::min(i, best);
    const int hi = std::max(i, best);
    double barrier = values[lo];
    for (int j = lo; j <= hi; ++j) barrier = std::max(barrier, values[j]);
    const double tolerance = 1e-6 * (1.0 + values[best]);
    if (barrier - values[i] > tolerance) {
      throw NumericalError(
          "fit_scale: objective is not unimodal (local minima near sigma = " +
          std::to_string(sigmas[best]) + " and " + std::to_string(sigmas[i]) +
          ")");
    }
  }
  const auto [sigma, value] = boost::math::tools::brent_find_minima(
      objective, sigmas[best - 1], sigmas[best + 1],
      std::numeric_limits<double>::digits / 2);
  return {sigma, value / static_cast<double>(grid.size())};
}

std::size_t check_conditions(const SigmaConfig& c) {
  if (!(c.eps > 0.0) || !(c.T > 0.0) || !(c.Delta > 0.0)) {
    throw DomainError("sigma_est: eps, T and Delta must be positive");
  }
  const double ratio = c.Delta / c.eps;
  if (ratio < c.min_delta_ratio * (1.0 - 1e-9)) {
    throw DomainError("Condition A violated: Delta/eps = " +
                      std::to_string(ratio) + " < " +
                      std::to_string(c.min_delta_ratio) +
                      " (partitions not effectively independent)");
  }
  const double partitions = c.T / c.Delta;
  const double rounded = std::round(partitions);
  if (rounded < 1.0 || std::abs(partitions - rounded) > 1e-6 * rounded) {
    throw DomainError("Condition B violated: T/Delta = " +
                      std::to_string(partitions) + " is not a positive integer");
  }
  if (rounded < static_cast<double>(c.min_partitions)) {
    throw DomainError("Condition B violated: N_Y = T/Delta = " +
                      std::to_string(partitions) + " < " +
                      std::to_string(c.min_partitions));
  }
  return static_cast<std::size_t>(rounded);
}

SigmaEstimate estimate_sigma(const CamParams& p, const SigmaConfig& config) {
  const CamDerived d = cam::derive(p);
  SigmaEstimate est;
  est.config = config;
  if (est.config.dt <= 0.0) est.config.dt = config.eps / 10.0;
  est.n_partitions = check_conditions(est.config);
  if (config.repeats == 0 || config.n_samples < 2) {
    throw DomainError("sigma_est: need at least one repeat and two samples");
  }
  const SigmaConfig& c = est.config;
  const double a = d.alpha_star;
  const double partition_factor =
      std::pow(static_cast<double>(est.n_partitions), 1.0 / a);
  const double scaling =
      std::pow(c.eps, d.gamma_star) * std::pow(c.Delta, 1.0 / a);

  std::vector<double> sigma_S, sigma_Y, Sigma, residual;
  for (std::size_t r = 0; r < c.repeats; ++r) {
    const auto samples =
        sample_integrals(p, c.eps, c.T, c.n_samples, c.dt, c.master_seed,
                         r * c.n_samples, c.workers);
    const ScaleFit fit = fit_scale(samples, a, d.beta_star, c.fit);
    sigma_S.push_back(fit.sigma);
    sigma_Y.push_back(fit.sigma / partition_factor);
    Sigma.push_back(sigma_Y.back() / scaling);
    residual.push_back(fit.residual);
  }
  est.sigma_S_repeats = sigma_S;
  est.sigma_S = stats::quartiles(sigma_S).median;
  est.sigma_Y_quartiles = stats::quartiles(sigma_Y);
  est.sigma_Y = est.sigma_Y_quartiles.median;
  est.Sigma_quartiles = stats::quartiles(Sigma);
  est.Sigma = est.Sigma_quartiles.median;
  est.residual = stats::quartiles(residual).median;
  return est;
}

}  // namespace camlevy::sigma_est
