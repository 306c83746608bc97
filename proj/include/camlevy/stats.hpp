#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace camlevy::stats {

/// Empirical characteristic function (1/N) sum_j exp(i k x_j) at each k.
std::vector<std::complex<double>> ecf(std::span<const double> samples,
                                      std::span<const double> k_grid);

/// Evenly spaced grid of n points on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// max_k |a(k) - b(k)|.
double sup_distance(std::span<const std::complex<double>> a,
                    std::span<const std::complex<double>> b);

struct Quartiles {
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
};

/// Linear-interpolation percentiles (the "type 7" rule).
Quartiles quartiles(std::vector<double> values);
double percentile(std::vector<double> values, double fraction);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Weighted least-squares line; empty weights mean unit weights.
LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> weights = {});

// ---------------------------------------------------------------------------
// Autocodifference

struct AcdPoint {
  std::size_t lag = 0;
  std::complex<double> value;
  /// The denominator ECFs sank below three Monte Carlo standard errors, so
  /// the log-ratio is dominated by noise.
  bool unreliable = false;
};

/// Plug-in estimate of
///   ACD(tau) = log[ E e^{i(y_{t+tau} - y_t)} / (E e^{i y_{t+tau}} E e^{-i y_t}) ]
/// with expectations replaced by time averages over the overlapping pairs.
/// Lags are in samples and must be shorter than the series.
std::vector<AcdPoint> acd_estimate(std::span<const double> series,
                                   std::span<const std::size_t> lags);

struct AcdSummary {
  std::size_t lag = 0;
  Quartiles re;
  Quartiles im;
  std::size_t unreliable = 0;  ///< realizations flagged at this lag
};

/// Per-lag median and quartiles of acd_estimate across realizations.
std::vector<AcdSummary> acd_ensemble(
    std::span<const std::span<const double>> realizations,
    std::span<const std::size_t> lags);

/// Splits a series into `blocks` non-overlapping equal blocks (the tail that
/// does not fill a block is dropped).
std::vector<std::span<const double>> split_blocks(std::span<const double> series,
                                                  std::size_t blocks);

// ---------------------------------------------------------------------------
// Codifference and cosum

struct CodiffCosum {
  std::complex<double> cd;
  std::complex<double> cs;
  bool unreliable = false;
};

/// CD(U, V) = log E e^{i(U - V)} - log E e^{iU} - log E e^{-iV} and
/// CS(U, V) = CD(U, -V), from paired samples divided by `scale`, with all
/// expectations at unit argument.
CodiffCosum codiff_cosum(std::span<const double> first,
                         std::span<const double> second, double scale = 1.0);

// ---------------------------------------------------------------------------
// Tail fit

struct TailFitOptions {
  /// Tail region starts at this quantile of |x|.
  double quantile = 0.99;
  int bins_per_decade = 10;
  /// Bins with fewer combined counts are dropped from the regression.
  std::size_t min_bin_count = 10;
  std::size_t min_tail_samples = 500;
};

struct TailFit {
  double exponent = 0.0;    ///< slope of log density vs log |r|
  double skew_ratio = 0.0;  ///< (n+ - n-)/(n+ + n-) over the fitted bins
  double r_lo = 0.0;
  double r_hi = 0.0;
  std::size_t tail_samples = 0;
  std::size_t bins_used = 0;
};

/// Log-binned tail histogram of |x| beyond the quantile threshold; the
/// exponent is a Poisson-weighted least-squares slope of log density on
/// log |r| for both tails combined, the skew ratio the count-weighted mean
/// of (u(r) - u(-r))/(u(r) + u(-r)). Throws DomainError with fewer than
/// min_tail_samples tail points or fewer than three usable bins.
TailFit tail_fit(std::span<const double> samples,
                 const TailFitOptions& options = {});

// ---------------------------------------------------------------------------
// Histograms

/// Uniform bins on [core_lo, core_hi] plus `tail_bins` log-spaced bins on
/// each side reaching out to `tail_reach` times the core half-width.
std::vector<double> heavy_tail_edges(double core_lo, double core_hi,
                                     std::size_t core_bins,
                                     std::size_t tail_bins = 12,
                                     double tail_reach = 1e6);

struct Histogram {
  std::vector<double> edges;
  std::vector<double> counts;
  /// count / (in-range total * width); integrates to 1 over the edges.
  std::vector<double> density;
  double below = 0.0;
  double above = 0.0;

  std::size_t bins() const { return counts.size(); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  double total() const;
};

Histogram histogram(std::span<const double> samples, std::vector<double> edges);
/// Adds samples to an existing histogram and renormalizes the density.
void accumulate(Histogram& hist, std::span<const double> samples);

/// sum_i |d1_i - d2_i| width_i on shared edges.
double l1_distance(const Histogram& a, const Histogram& b);
/// sum_i |d_i - (bin average of pdf)| width_i, bin averages by 7-point
/// Gauss-Legendre quadrature.
double l1_distance(const Histogram& hist,
                   const std::function<double(double)>& pdf);
/// Same, against precomputed bin probabilities.
double l1_distance(const Histogram& hist, std::span<const double> bin_mass);

}  // namespace camlevy::stats
