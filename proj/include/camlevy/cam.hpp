#pragma once

#include <cstddef>

#include "camlevy/rng.hpp"
#include "camlevy/stable.hpp"
#include "camlevy/trajectory.hpp"

namespace camlevy {

/// Linear CAM-noise SDE (Ito form)
///   dy = (L + E^2/2) y dt + (E y + g) dW1 + b dW2.
struct CamParams {
  double L = -1.0;  ///< drift rate, < 0
  double E = 1.0;   ///< multiplicative amplitude, != 0
  double g = 0.1;   ///< correlated additive amplitude, != 0
  double b = 0.5;   ///< independent additive amplitude, != 0

  /// nu = -(L/E^2 + 1/2); the stationary law has a finite mean iff nu > 0.
  double nu() const { return -(L / (E * E) + 0.5); }
  /// Ito drift coefficient L + E^2/2.
  double drift_rate() const { return L + 0.5 * E * E; }

  /// The same SDE written with E > 0 and b > 0. (E, g, W1) -> (-E, -g, -W1)
  /// and (b, W2) -> (-b, -W2) leave the process unchanged.
  CamParams canonical() const;

  /// Checks L < 0, E, g, b nonzero and finite, and nu > 0.
  void validate() const;

  /// Parameters with L fixed and E chosen so that alpha* = -2L/E^2.
  static CamParams from_alpha_star(double L, double alpha_star, double g,
                                   double b);
};

/// Quantities derived from CamParams for the stable reduction.
struct CamDerived {
  double nu = 0.0;
  double alpha_star = 0.0;  ///< 2 nu + 1
  double beta_star = 0.0;   ///< tanh(pi g nu / b)
  double sigma_star = 0.0;  ///< GCLT scale for i.i.d. draws from p_s
  double gamma_star = 0.0;  ///< 1 - 1/alpha*
  double normalization = 0.0;
  double h_plus = 0.0;   ///< tail amplitude h(+1)
  double h_minus = 0.0;  ///< tail amplitude h(-1)

  StableParams stable_law(double sigma) const {
    return {alpha_star, beta_star, sigma};
  }
};

namespace cam {

/// Reduction parameters. Throws DomainError when nu <= 0 ("no stationary
/// mean") or nu >= 1/2 ("Gaussian-attraction regime, unsupported").
CamDerived derive(const CamParams& p);

/// Normalization constant of p_s from the complex-Gamma closed form
///   2 pi (2b)^{-(2 nu + 1)} Gamma(2 nu + 1) / (E |Gamma(nu + 1 + i g nu / b)|^2).
double normalization_constant(const CamParams& p);
/// The same constant from tanh-sinh quadrature over xi in (-pi/2, pi/2).
/// Throws NumericalError if the quadrature error estimate is too large.
double normalization_quadrature(const CamParams& p);

/// Tail amplitude h(s) with p_s(y) ~ h(sgn y) |y|^{-2(nu+1)}.
double tail_amplitude(const CamParams& p, int sign);

/// Stationary density with the normalization precomputed.
class StationaryDensity {
 public:
  explicit StationaryDensity(const CamParams& p);
  double operator()(double y) const;
  const CamParams& params() const { return params_; }
  double normalization() const { return normalization_; }

 private:
  CamParams params_;
  double nu_;
  double normalization_;
};

double stationary_pdf(const CamParams& p, double y);

/// Exact draw from p_s. Under y = (b tan(xi) - g)/E the density becomes
/// proportional to exp(2 g nu xi / b) cos(xi)^{2 nu} on (-pi/2, pi/2); xi is
/// proposed from the truncated exponential factor and accepted with
/// probability cos(xi)^{2 nu}.
double sample_stationary(const CamParams& p, RngStream& rng);

/// Burn-in span in unit (slow) time: 20 ACD e-folding times, using the
/// asymptotic decay rate nu E^2 as the e-folding rate.
double burn_in_time(const CamParams& p);

/// Coefficients of one weak order-2.0 step, kept separate so the step can be
/// exercised with zero noise amplitudes.
struct StepCoefficients {
  double drift_rate;  ///< L + E^2/2
  double E;
  double g;
  double b;
};

/// One explicit weak order-2.0 step of size h for given Gaussian increments
/// dW1, dW2 (each of variance h).
double weak_step(const StepCoefficients& c, double y, double h, double dW1,
                 double dW2);

/// Advances y_{t/eps} by fast substeps of size dt, consuming two normals per
/// step. Equivalent to the unit-time scheme with step dt/eps.
class FastStepper {
 public:
  FastStepper(const CamParams& p, double eps, double dt);
  double step(double y, RngStream& rng) const;
  double internal_step() const { return h_; }

 private:
  StepCoefficients coefficients_;
  double h_;
  double sqrt_h_;
};

/// n_steps weak order-2.0 steps of size dt from y0. A step larger than one
/// tenth of the unit time scale is recorded as a warning.
Trajectory simulate(const CamParams& p, double y0, double dt,
                    std::size_t n_steps, RngStream& rng);

/// The fast process y_{t/eps}: coefficients rescaled by 1/eps (drift) and
/// 1/sqrt(eps) (noise). dt > eps/10 is recorded as a warning.
Trajectory simulate_fast(const CamParams& p, double eps, double y0, double dt,
                         std::size_t n_steps, RngStream& rng);

}  // namespace cam
}  // namespace camlevy
