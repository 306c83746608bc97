#pragma once

#include <complex>
#include <span>
#include <vector>

#include "camlevy/rng.hpp"

namespace camlevy {

/// Parameters of the alpha-stable law S_alpha(beta, sigma) whose
/// characteristic function is exp[-sigma^alpha |k|^alpha Xi(k; alpha, beta)].
struct StableParams {
  double alpha = 2.0;  ///< stability index, (0, 2]
  double beta = 0.0;   ///< skewness, [-1, 1]
  double sigma = 1.0;  ///< scale, > 0

  /// Throws DomainError naming the violated bound.
  void validate() const;
};

namespace stable {

/// Indices within this distance of 1 or 2 use the Cauchy-type logarithmic
/// branch or the Gaussian branch respectively.
inline constexpr double kBranchSnap = 1e-6;

enum class Branch { General, LogCauchy, Gaussian };
Branch branch_of(double alpha);

/// Xi(k; alpha, beta) = 1 - i beta sgn(k) phi(k), phi = tan(pi alpha / 2) or
/// -(2/pi) log|k| on the alpha = 1 branch.
std::complex<double> xi(double k, double alpha, double beta);

/// log psi(k) = -sigma^alpha |k|^alpha Xi(k); zero at k = 0.
std::complex<double> log_characteristic_function(const StableParams& p,
                                                 double k);
std::complex<double> characteristic_function(const StableParams& p, double k);

/// One variate by the Chambers-Mallows-Stuck transform of a uniform angle
/// and a unit exponential. alpha = 2 draws sigma * sqrt(2) * N(0, 1).
double sample(const StableParams& p, RngStream& rng);

/// Increment of the Levy motion with unit-time law p over a step dt:
/// a draw from S_alpha(beta, sigma dt^{1/alpha}). Throws DomainError for
/// dt <= 0.
double sample_increment(const StableParams& p, double dt, RngStream& rng);

struct PdfOptions {
  double abs_tolerance = 1e-10;
  int max_level = 20;  ///< at most 2^max_level trapezoid panels
};

/// Density on x_grid by Fourier inversion,
/// f(x) = (1/pi) int_0^K Re[exp(-ikx) psi(k)] dk, with K chosen so that
/// |psi(K)| < 1e-12 and the trapezoid rule refined by interval halving
/// (in u with k = K u^q, q = ceil(2/alpha) for alpha < 1, else q = 1).
/// Negative round-off is clipped to 0. Throws NumericalError when the
/// refinement does not converge within PdfOptions::max_level.
std::vector<double> pdf_numeric(const StableParams& p,
                                std::span<const double> x_grid,
                                const PdfOptions& options = {});

}  // namespace stable
}  // namespace camlevy
