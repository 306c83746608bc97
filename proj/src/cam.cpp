#include "camlevy/cam.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "camlevy/errors.hpp"
#include "camlevy/special.hpp"

namespace camlevy {

using std::numbers::pi;

CamParams CamParams::canonical() const {
  CamParams c = *this;
  if (c.E < 0.0) {
    c.E = -c.E;
    c.g = -c.g;
  }
  if (c.b < 0.0) c.b = -c.b;
  return c;
}

void CamParams::validate() const {
  if (!std::isfinite(L) || !std::isfinite(E) || !std::isfinite(g) ||
      !std::isfinite(b)) {
    throw DomainError("cam: parameters must be finite");
  }
  if (!(L < 0.0)) throw DomainError("cam: L must be negative");
  if (E == 0.0) throw DomainError("cam: E must be nonzero");
  if (g == 0.0) throw DomainError("cam: g must be nonzero");
  if (b == 0.0) throw DomainError("cam: b must be nonzero");
  if (!(nu() > 0.0)) {
    throw DomainError("cam: nu = " + std::to_string(nu()) +
                      " <= 0, no stationary mean");
  }
}

CamParams CamParams::from_alpha_star(double L, double alpha_star, double g,
                                     double b) {
  if (!(L < 0.0) || !(alpha_star > 0.0)) {
    throw DomainError("cam: from_alpha_star needs L < 0 and alpha* > 0");
  }
  return {L, std::sqrt(-2.0 * L / alpha_star), g, b};
}

namespace cam {

double normalization_constant(const CamParams& raw) {
  raw.validate();
  const CamParams p = raw.canonical();
  const double nu = p.nu();
  // The integral of exp(kappa xi) cos^{2 nu}(xi) puts kappa / 2 = g nu / b
  // into the Gamma arguments.
  const double x = p.g * nu / p.b;
  const double log_numerator = std::log(2.0 * pi) -
                               (2.0 * nu + 1.0) * std::log(2.0 * p.b) +
                               std::lgamma(2.0 * nu + 1.0);
  const double log_denominator =
      std::log(p.E) + 2.0 * log_gamma({nu + 1.0, x}).real();
  return std::exp(log_numerator - log_denominator);
}

double normalization_quadrature(const CamParams& raw) {
  raw.validate();
  const CamParams p = raw.canonical();
  const double nu = p.nu();
  const double kappa = 2.0 * p.g * nu / p.b;
  auto integrand = [&](double xi) {
    const double c = std::cos(xi);
    return std::exp(kappa * xi) * std::pow(std::max(c, 0.0), 2.0 * nu);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  const double integral =
      integrator.integrate(integrand, -pi / 2.0, pi / 2.0, 1e-14, &error, &l1);
  if (!std::isfinite(integral) || error > 1e-10 * l1) {
    throw NumericalError("cam: normalization quadrature failed (error " +
                         std::to_string(error) + ")");
  }
  return integral / (std::pow(p.b, 2.0 * nu + 1.0) * p.E);
}

double tail_amplitude(const CamParams& raw, int sign) {
  const CamParams p = raw.canonical();
  const double nu = p.nu();
  const double s = sign >= 0 ? 1.0 : -1.0;
  return std::exp(pi * p.g * nu * s / p.b) /
         (normalization_constant(p) * std::pow(p.E, 2.0 * (nu + 1.0)));
}

CamDerived derive(const CamParams& raw) {
  raw.validate();
  const CamParams p = raw.canonical();
  CamDerived d;
  d.nu = p.nu();
  if (d.nu >= 0.5) {
    throw DomainError("cam: nu = " + std::to_string(d.nu) +
                      " >= 1/2 (Gaussian-attraction regime, unsupported)");
  }
  d.alpha_star = 2.0 * d.nu + 1.0;
  d.gamma_star = 1.0 - 1.0 / d.alpha_star;
  d.beta_star = std::tanh(pi * p.g * d.nu / p.b);
  d.normalization = normalization_constant(p);
  const double e_power = std::pow(p.E, 2.0 * (d.nu + 1.0));
  d.h_plus = std::exp(pi * p.g * d.nu / p.b) / (d.normalization * e_power);
  d.h_minus = std::exp(-pi * p.g * d.nu / p.b) / (d.normalization * e_power);

  // Gamma(1 - a) for a in (1, 2) via Gamma(2 - a) / (1 - a): a positive
  // Gamma value over a negative denominator. cos(pi a / 2) is negative too.
  const double a = d.alpha_star;
  const double gamma_one_minus_a = std::tgamma(2.0 - a) / (1.0 - a);
  const double power = (d.h_plus + d.h_minus) * gamma_one_minus_a / a *
                       std::cos(pi * a / 2.0);
  if (!(power > 0.0)) {
    throw NumericalError("cam: sigma* power term is not positive");
  }
  d.sigma_star = std::pow(power, 1.0 / a);
  return d;
}

StationaryDensity::StationaryDensity(const CamParams& p)
    : params_(p.canonical()),
      nu_(params_.nu()),
      normalization_(normalization_constant(p)) {}

double StationaryDensity::operator()(double y) const {
  const CamParams& p = params_;
  const double u = p.E * y + p.g;
  const double spread = u * u + p.b * p.b;
  return std::pow(spread, -(nu_ + 1.0)) *
         std::exp(2.0 * p.g * nu_ / p.b * std::atan(u / p.b)) / normalization_;
}

double stationary_pdf(const CamParams& p, double y) {
  return StationaryDensity(p)(y);
}

double sample_stationary(const CamParams& raw, RngStream& rng) {
  const CamParams p = raw.canonical();
  const double nu = p.nu();
  const double kappa = 2.0 * p.g * nu / p.b;
  for (;;) {
    const double u = rng.uniform();
    double xi = 0.0;
    if (std::abs(kappa) < 1e-12) {
      xi = pi * (u - 0.5);
    } else if (kappa > 0.0) {
      xi = pi / 2.0 + std::log(u + (1.0 - u) * std::exp(-kappa * pi)) / kappa;
    } else {
      xi = -pi / 2.0 + std::log(u + (1.0 - u) * std::exp(kappa * pi)) / kappa;
    }
    const double c = std::cos(xi);
    if (!(c > 0.0)) continue;
    if (rng.uniform() <= std::pow(c, 2.0 * nu)) {
      return (p.b * std::tan(xi) - p.g) / p.E;
    }
  }
}

double burn_in_time(const CamParams& p) {
  return 20.0 / (p.nu() * p.E * p.E);
}

double weak_step(const StepCoefficients& c, double y, double h, double dW1,
                 double dW2) {
  const double sqrt_h = std::sqrt(h);
  const double base = y + c.drift_rate * y * h + c.b * dW2;
  const double diffusion = c.E * y + c.g;
  const double support = base + diffusion * dW1;
  const double support_plus = base + diffusion * sqrt_h;
  const double support_minus = base - diffusion * sqrt_h;
  return y + 0.5 * c.drift_rate * (y + support) * h +
         0.25 * (c.E * support_plus + 2.0 * c.E * y + c.E * support_minus +
                 4.0 * c.g) *
             dW1 +
         0.25 * (c.E * support_plus - c.E * support_minus) *
             ((dW1 * dW1 - h) / sqrt_h) +
         c.b * dW2;
}

FastStepper::FastStepper(const CamParams& p, double eps, double dt)
    : coefficients_{p.drift_rate(), p.E, p.g, p.b},
      h_(dt / eps),
      sqrt_h_(std::sqrt(dt / eps)) {
  if (!(dt > 0.0) || !(eps > 0.0)) {
    throw DomainError("cam: time step and eps must be positive");
  }
}

double FastStepper::step(double y, RngStream& rng) const {
  const double dW1 = sqrt_h_ * rng.normal();
  const double dW2 = sqrt_h_ * rng.normal();
  return weak_step(coefficients_, y, h_, dW1, dW2);
}

Trajectory simulate_fast(const CamParams& p, double eps, double y0, double dt,
                         std::size_t n_steps, RngStream& rng) {
  p.validate();
  const FastStepper stepper(p, eps, dt);
  Trajectory traj;
  traj.model = "cam";
  traj.dt = dt;
  traj.master_seed = rng.master_seed();
  traj.stream_index = rng.index();
  traj.params = {{"L", p.L}, {"E", p.E},     {"g", p.g},
                 {"b", p.b}, {"eps", eps}, {"dt", dt}, {"y0", y0}};
  if (dt > eps / 10.0) {
    traj.warnings.push_back("dt = " + std::to_string(dt) +
                            " exceeds eps/10 = " + std::to_string(eps / 10.0) +
                            "; fast dynamics under-resolved");
  }
  traj.values.reserve(n_steps + 1);
  double y = y0;
  traj.values.push_back(y);
  for (std::size_t n = 0; n < n_steps; ++n) {
    y = stepper.step(y, rng);
    traj.values.push_back(y);
  }
  return traj;
}

Trajectory simulate(const CamParams& p, double y0, double dt,
                    std::size_t n_steps, RngStream& rng) {
  return simulate_fast(p, 1.0, y0, dt, n_steps, rng);
}

}  // namespace cam
}  // namespace camlevy
