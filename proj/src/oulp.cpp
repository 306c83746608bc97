#include "camlevy/oulp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "camlevy/errors.hpp"

namespace camlevy {

void OulpParams::validate() const {
  if (!(theta > 0.0)) throw DomainError("oulp: theta must be positive");
  if (!(sigma_z > 0.0)) throw DomainError("oulp: sigma_z must be positive");
  driver().validate();
}

StableParams OulpParams::stationary_law() const {
  return {alpha, beta, sigma_z * std::pow(alpha * theta, -1.0 / alpha)};
}

namespace oulp {

Trajectory simulate(const OulpParams& p, double eps, double z0, double dt,
                    std::size_t n_steps, RngStream& rng) {
  if (!(dt > 0.0) || !(eps > 0.0)) {
    throw DomainError("oulp: dt and eps must be positive");
  }
  if (!(p.theta > 0.0)) throw DomainError("oulp: theta must be positive");
  if (!(p.sigma_z >= 0.0)) throw DomainError("oulp: sigma_z must be >= 0");
  p.driver().validate();

  Trajectory traj;
  traj.model = "oulp";
  traj.dt = dt;
  traj.master_seed = rng.master_seed();
  traj.stream_index = rng.index();
  traj.params = {{"theta", p.theta}, {"sigma_z", p.sigma_z},
                 {"alpha", p.alpha}, {"beta", p.beta},
                 {"eps", eps},       {"dt", dt},
                 {"z0", z0}};
  if (dt > eps / (10.0 * p.theta)) {
    traj.warnings.push_back("dt exceeds eps/(10 theta); relaxation "
                            "under-resolved");
  }
  const double decay = p.theta * dt / eps;
  const double noise = p.sigma_z * std::pow(dt / eps, 1.0 / p.alpha);
  const StableParams unit = p.driver();
  traj.values.reserve(n_steps + 1);
  double z = z0;
  traj.values.push_back(z);
  for (std::size_t n = 0; n < n_steps; ++n) {
    const double kick = noise > 0.0 ? noise * stable::sample(unit, rng) : 0.0;
    z = z - decay * z + kick;
    traj.values.push_back(z);
  }
  return traj;
}

std::complex<double> stationary_cf(const OulpParams& p, double k) {
  return stable::characteristic_function(p.stationary_law(), k);
}

double integral_scale(const OulpParams& p, double eps, double t) {
  return std::pow(eps, 1.0 - 1.0 / p.alpha) * std::pow(t, 1.0 / p.alpha) *
         p.sigma_z / p.theta;
}

std::complex<double> integral_cf(const OulpParams& p, double eps, double z0,
                                 double m, double t) {
  if (!(t > 0.0)) throw DomainError("oulp: integral_cf needs t > 0");
  const std::complex<double> drift(
      0.0, eps * m * z0 / p.theta * (1.0 - std::exp(-p.theta * t / eps)));
  const StableParams law{p.alpha, p.beta, integral_scale(p, eps, t)};
  return std::exp(drift + stable::log_characteristic_function(law, m));
}

std::complex<double> acd_analytic(const OulpParams& p, double tau) {
  if (!(tau >= 0.0)) throw DomainError("oulp: acd lag must be >= 0");
  if (stable::branch_of(p.alpha) == stable::Branch::LogCauchy) {
    throw DomainError("oulp: analytic ACD undefined for alpha = 1");
  }
  const double a = p.alpha;
  const double prefactor = std::pow(p.sigma_z, a) / (a * p.theta);
  const double decay_a = std::exp(-a * p.theta * tau);
  const double overlap = std::pow(std::abs(1.0 - std::exp(-p.theta * tau)), a);
  const double tan_term =
      stable::branch_of(a) == stable::Branch::Gaussian
          ? 0.0
          : std::tan(std::numbers::pi * a / 2.0);
  const double real = 1.0 + decay_a - overlap;
  const double imag = p.beta * tan_term * ((1.0 - decay_a) - overlap);
  return prefactor * std::complex<double>(real, imag);
}

OulpParams match_from_cam(const CamParams& p, double Sigma) {
  if (!(Sigma > 0.0)) {
    throw DomainError("oulp: Sigma must be positive, got " +
                      std::to_string(Sigma));
  }
  const CamDerived d = cam::derive(p);
  const double theta = -p.drift_rate();
  return {theta, Sigma * theta, d.alpha_star, d.beta_star};
}

}  // namespace oulp
}  // namespace camlevy
