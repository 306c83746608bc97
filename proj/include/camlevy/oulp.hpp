#pragma once

#include <complex>
#include <cstddef>

#include "camlevy/cam.hpp"
#include "camlevy/rng.hpp"
#include "camlevy/stable.hpp"
#include "camlevy/trajectory.hpp"

namespace camlevy {

/// Ornstein-Uhlenbeck-Levy process dz = -theta z dt + sigma_z dL^{(alpha,beta)}
/// with dL ~ S_alpha(beta, dt^{1/alpha}).
struct OulpParams {
  double theta = 1.0;
  double sigma_z = 1.0;
  double alpha = 1.5;
  double beta = 0.0;

  void validate() const;
  /// The driving law for a unit time step, S_alpha(beta, 1).
  StableParams driver() const { return {alpha, beta, 1.0}; }
  /// Stationary law S_alpha(beta, sigma_z (alpha theta)^{-1/alpha}).
  StableParams stationary_law() const;
};

namespace oulp {

/// Euler-Maruyama path of z_{t/eps}:
///   z_{n+1} = z_n - (theta/eps) z_n dt + sigma_z (dt/eps)^{1/alpha} xi_n,
/// xi_n ~ S_alpha(beta, 1). dt > eps/(10 theta) is recorded as a warning.
Trajectory simulate(const OulpParams& p, double eps, double z0, double dt,
                    std::size_t n_steps, RngStream& rng);

/// Characteristic function of the stationary law.
std::complex<double> stationary_cf(const OulpParams& p, double k);

/// Leading-order characteristic function of v_t = int_0^t z_{s/eps} ds
/// started from z0 (valid for theta t / eps >> 1).
std::complex<double> integral_cf(const OulpParams& p, double eps, double z0,
                                 double m, double t);

/// Scale of v_t for z0 = 0: eps^{1-1/alpha} t^{1/alpha} sigma_z / theta.
double integral_scale(const OulpParams& p, double eps, double t);

/// Analytic autocodifference at lag tau >= 0 (unit-time process):
///   s^alpha {1 + a^alpha - |1-a|^alpha
///            + i beta tan(pi alpha/2) [(1 - a^alpha) - |1-a|^alpha]},
/// a = exp(-theta tau), s^alpha = sigma_z^alpha/(alpha theta). The sign of
/// the imaginary part follows from z_{t+tau} = a z_t + independent stable
/// noise. Throws DomainError on the alpha = 1 branch.
std::complex<double> acd_analytic(const OulpParams& p, double tau);

/// OULP whose integral matches the CAM integral law: alpha*, beta* from
/// cam::derive, theta = nu E^2 = -(L + E^2/2) and sigma_z = Sigma theta.
OulpParams match_from_cam(const CamParams& p, double Sigma);

}  // namespace oulp
}  // namespace camlevy
