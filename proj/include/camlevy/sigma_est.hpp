#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "camlevy/cam.hpp"
#include "camlevy/rng.hpp"
#include "camlevy/stats.hpp"

namespace camlevy::sigma_est {

/// Realizations S_j of int_0^T y_{s/eps} ds by the trapezoid rule over fast
/// steps of size dt, each from its own stream (master_seed, first_stream + j)
/// and its own stationary start: an exact draw from p_s followed by the
/// cam::burn_in_time span of fast dynamics. Throws DomainError unless
/// dt <= eps/10.
std::vector<double> sample_integrals(const CamParams& p, double eps, double T,
                                     std::size_t n_samples, double dt,
                                     std::uint64_t master_seed,
                                     std::uint64_t first_stream = 0,
                                     unsigned workers = 1);

/// Consecutive partition integrals Y_j = int_{(j-1)Delta}^{j Delta} y_{s/eps} ds
/// along a single stationary path (so neighbouring values are serially
/// dependent, exactly as the partition of one long integral).
std::vector<double> partition_integrals(const CamParams& p, double eps,
                                        double Delta, std::size_t count,
                                        double dt, RngStream& rng);

enum class GridUnits {
  Absolute,     ///< l in the units of 1/samples
  SampleScale,  ///< l in units of 1/s_hat, s_hat = IQR/2 of the samples
};

struct FitOptions {
  double l_min = 0.05;
  double l_max = 2.0;
  std::size_t n_grid = 40;
  GridUnits units = GridUnits::SampleScale;
};

struct ScaleFit {
  double sigma = 0.0;
  /// Objective at the minimum divided by the number of grid points.
  double residual = 0.0;
};

/// Least-squares fit of the stable characteristic function with fixed
/// (alpha, beta) to the empirical one on a uniform l grid:
///   sigma_S = argmin_sigma sum_l |psi(l; sigma) - ecf(l)|^2.
/// With GridUnits::SampleScale the grid is [l_min, l_max] / s_hat, which
/// keeps psi spanning the same range whatever the size of the samples.
/// A log-spaced scan around s_hat brackets the minimum and Brent's method
/// refines it to relative 1e-6. Throws NumericalError when the scan finds
/// a second separated local minimum in the lower half of the range between
/// the best value and the flat limits of the objective, or the minimum sits
/// on the scan boundary.
ScaleFit fit_scale(std::span<const double> samples, double alpha, double beta,
                   const FitOptions& options = {});

struct SigmaConfig {
  double eps = 1e-5;
  double T = 1.0;
  double Delta = 1e-2;
  std::size_t n_samples = 1000;
  double dt = 0.0;  ///< 0 means eps/10
  std::size_t repeats = 1;
  FitOptions fit;
  /// Conditions enforced on the partition: Delta/eps >= min_delta_ratio
  /// (effective independence) and T/Delta >= min_partitions (many terms).
  double min_delta_ratio = 5.0;
  std::size_t min_partitions = 50;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;
};

struct SigmaEstimate {
  SigmaConfig config;
  std::size_t n_partitions = 0;  ///< N_Y = T / Delta
  // medians over repeats
  double sigma_S = 0.0;
  double sigma_Y = 0.0;
  double Sigma = 0.0;
  double residual = 0.0;
  stats::Quartiles sigma_Y_quartiles;
  stats::Quartiles Sigma_quartiles;
  std::vector<double> sigma_S_repeats;
};

/// Checks the two partition conditions and returns N_Y. Throws DomainError
/// naming Condition A or Condition B.
std::size_t check_conditions(const SigmaConfig& config);

/// sigma_S from fit_scale, sigma_Y = sigma_S / N_Y^{1/alpha*} and
/// Sigma = sigma_Y / (eps^{gamma*} Delta^{1/alpha*}); repeat r uses streams
/// [r N_S, (r+1) N_S).
SigmaEstimate estimate_sigma(const CamParams& p, const SigmaConfig& config);

}  // namespace camlevy::sigma_est
