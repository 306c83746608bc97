#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "camlevy/cam.hpp"
#include "camlevy/rng.hpp"
#include "camlevy/stable.hpp"
#include "camlevy/trajectory.hpp"

namespace camlevy {

/// Open interval (lo, hi).
struct Domain {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lo && x < hi; }
};

/// Shape of the noise coupling f2. Constant and Linear carry the amplitude
/// zeta (f2 = zeta and f2 = zeta x) and get closed-form transforms and
/// Marcus flows.
enum class NoiseCoupling { Constant, Linear, General };

/// Slow equation dx = f1(x) dt + eps^{-rho} f2(x) y_{t/eps} dt.
struct SlowSystem {
  std::string name;
  std::function<double(double)> f1;
  std::function<double(double)> f2;
  NoiseCoupling coupling = NoiseCoupling::General;
  double zeta = 0.0;  ///< amplitude for Constant / Linear coupling
  /// Timescale exponent; unset means rho = gamma*.
  std::optional<double> rho;
  Domain domain;
  /// Relaxation time of the drift, used for the default slow step.
  double relaxation_time = 1.0;
  std::vector<std::pair<std::string, double>> params;
};

namespace averaging {

/// f1 = -mu x, f2 = zeta.
SlowSystem linear(double mu, double zeta);
/// f1 = -(mu x + x^3), f2 = zeta.
SlowSystem cubic(double mu, double zeta);
/// f1 = c - x, f2 = zeta x on (0, inf).
SlowSystem bilinear(double c, double zeta);

/// f1, f2 set, nonempty domain, positive relaxation time.
void validate_structure(const SlowSystem& sys);
/// validate_structure plus f2 != 0 over a scan of the domain. Throws
/// DomainError.
void validate(const SlowSystem& sys);

/// eta = U(x) with U' = 1/f2, its inverse, and the drift
/// f_tilde(eta) = f1(U^{-1}(eta)) / f2(U^{-1}(eta)).
struct Transform {
  std::function<double(double)> U;
  std::function<double(double)> U_inverse;
  std::function<double(double)> f_tilde;
  double x_ref = 0.0;
};

/// Closed forms for Constant (x_ref = 0) and Linear (x_ref = 1) coupling;
/// otherwise adaptive Gauss-Kronrod quadrature of 1/f2 from x_ref (default:
/// the domain midpoint, or 0 / +-1 for half-infinite or infinite domains)
/// inverted by bracketing and TOMS 748.
Transform transform(const SlowSystem& sys,
                    std::optional<double> x_ref = std::nullopt);

enum class Interpretation { Marcus, ItoEquivalent, Stratonovich };

/// dX = f1(X) dt + f2(X) <> dL, dL ~ noise per unit time.
struct ReducedSystem {
  SlowSystem system;
  StableParams noise;  ///< S_{alpha*}(beta*, eps^{gamma* - rho} Sigma)
  Interpretation interpretation = Interpretation::Marcus;
  double eps = 0.0;
  double Sigma = 0.0;
  double rho = 0.0;
};

/// Reduced stable-driven SDE. Throws as cam::derive on regime violations
/// and DomainError for Sigma <= 0 or eps <= 0.
ReducedSystem reduce(const SlowSystem& sys, const CamParams& cam, double Sigma,
                     double eps);

/// End point lambda(1) of d lambda / ds = g(lambda) jump, lambda(0) = x,
/// by fourth-order Runge-Kutta with step-doubling error control. Throws
/// DomainError when the flow leaves the domain.
double marcus_increment(const std::function<double(double)>& g, double x,
                        double jump, const Domain& domain = {});

/// Flow of scale * f2 for the system's coupling: x + scale zeta jump for
/// Constant, x exp(scale zeta jump) for Linear, Runge-Kutta otherwise.
double marcus_increment(const SlowSystem& sys, double scale, double x,
                        double jump);

/// One Heun step of dx = f1(x) dt, split into substeps so that each
/// substep times the local drift rate stays below 1/2.
double drift_step(const std::function<double(double)>& f1, double x, double dt);

struct RunOptions {
  std::size_t record_every = 1;  ///< store every n-th slow step
  /// |x| bound for the blow-up guard. Non-finite values always stop the run.
  /// Unbounded by default: the bilinear system's multiplicative jumps reach
  /// far beyond any fixed bound and are pulled back by the drift.
  double blowup = std::numeric_limits<double>::infinity();
  /// Fast substep for the full system; 0 means eps/10.
  double fast_dt = 0.0;
};

/// min(10 eps, relaxation_time / 100).
double default_slow_step(const SlowSystem& sys, double eps);

/// Co-integrates the CAM process (from an exact stationary draw plus
/// burn-in) and the slow variable. Over each slow step the forcing
/// I = eps^{-rho} int y_{s/eps} ds is accumulated by the trapezoid rule over
/// fast substeps; the drift is advanced by drift_step and then x is moved
/// along the flow of f2 for time I. A blow-up or domain exit truncates the
/// trajectory and sets the flag. Throws DomainError unless the fast step is
/// at most eps/10 and divides dt_slow. f2 may vanish here (zeta = 0
/// decouples x from y).
Trajectory simulate_full(const SlowSystem& sys, const CamParams& cam,
                         double eps, double x0, double dt_slow,
                         std::size_t n_steps, RngStream& rng,
                         const RunOptions& options = {});

/// Per step: drift_step, then a Marcus jump with a stable increment of the
/// reduced noise over dt. As in simulate_full, f2 may vanish.
Trajectory simulate_reduced(const ReducedSystem& rsys, double x0, double dt,
                            std::size_t n_steps, RngStream& rng,
                            const RunOptions& options = {});

}  // namespace averaging
}  // namespace camlevy
