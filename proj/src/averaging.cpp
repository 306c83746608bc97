#include "camlevy/averaging.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <string>

#include "camlevy/errors.hpp"

namespace camlevy::averaging {

namespace {

std::vector<double> scan_points(const Domain& d) {
  std::vector<double> pts;
  const bool lo_finite = std::isfinite(d.lo);
  const bool hi_finite = std::isfinite(d.hi);
  if (lo_finite && hi_finite) {
    for (int i = 1; i < 1000; ++i) pts.push_back(d.lo + (d.hi - d.lo) * i / 1000.0);
    return pts;
  }
  for (int i = -60; i <= 60; ++i) {
    const double r = std::pow(10.0, i / 10.0);
    if (lo_finite) {
      pts.push_back(d.lo + r);
    } else if (hi_finite) {
      pts.push_back(d.hi - r);
    } else {
      pts.push_back(r);
      pts.push_back(-r);
    }
  }
  if (!lo_finite && !hi_finite) pts.push_back(0.0);
  return pts;
}

double default_reference(const Domain& d) {
  const bool lo_finite = std::isfinite(d.lo);
  const bool hi_finite = std::isfinite(d.hi);
  if (lo_finite && hi_finite) return 0.5 * (d.lo + d.hi);
  if (lo_finite) return d.lo + 1.0;
  if (hi_finite) return d.hi - 1.0;
  return 0.0;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : -1.0; }

Trajectory start_trajectory(const std::string& model, const SlowSystem& sys,
                            double dt, std::size_t record_every,
                            const RngStream& rng) {
  Trajectory traj;
  traj.model = model + ":" + sys.name;
  traj.dt = dt * static_cast<double>(record_every);
  traj.master_seed = rng.master_seed();
  traj.stream_index = rng.index();
  traj.params = sys.params;
  return traj;
}

}  // namespace

SlowSystem linear(double mu, double zeta) {
  SlowSystem s;
  s.name = "linear";
  s.f1 = [mu](double x) { return -mu * x; };
  s.f2 = [zeta](double) { return zeta; };
  s.coupling = NoiseCoupling::Constant;
  s.zeta = zeta;
  s.relaxation_time = 1.0 / std::abs(mu);
  s.params = {{"mu", mu}, {"zeta", zeta}};
  return s;
}

SlowSystem cubic(double mu, double zeta) {
  SlowSystem s;
  s.name = "cubic";
  s.f1 = [mu](double x) { return -(mu * x + x * x * x); };
  s.f2 = [zeta](double) { return zeta; };
  s.coupling = NoiseCoupling::Constant;
  s.zeta = zeta;
  s.relaxation_time = 1.0 / std::abs(mu);
  s.params = {{"mu", mu}, {"zeta", zeta}};
  return s;
}

SlowSystem bilinear(double c, double zeta) {
  SlowSystem s;
  s.name = "bilinear";
  s.f1 = [c](double x) { return c - x; };
  s.f2 = [zeta](double x) { return zeta * x; };
  s.coupling = NoiseCoupling::Linear;
  s.zeta = zeta;
  s.domain = {0.0, std::numeric_limits<double>::infinity()};
  s.relaxation_time = 1.0 / std::abs(c);
  s.params = {{"c", c}, {"zeta", zeta}};
  return s;
}

void validate_structure(const SlowSystem& sys) {
  if (!sys.f1 || !sys.f2) throw DomainError("averaging: f1 and f2 must be set");
  if (!(sys.domain.lo < sys.domain.hi)) {
    throw DomainError("averaging: empty domain");
  }
  if (!(sys.relaxation_time > 0.0) || !std::isfinite(sys.relaxation_time)) {
    throw DomainError("averaging: relaxation time must be positive and finite");
  }
}

void validate(const SlowSystem& sys) {
  validate_structure(sys);
  if (sys.coupling != NoiseCoupling::General && sys.zeta == 0.0) {
    throw DomainError("averaging: zeta must be nonzero (f2 vanishes)");
  }
  if (sys.coupling == NoiseCoupling::Linear && sys.domain.contains(0.0)) {
    throw DomainError("averaging: f2 = zeta x vanishes at 0 inside the domain");
  }
  double first = 0.0;
  for (const double x : scan_points(sys.domain)) {
    const double v = sys.f2(x);
    if (!std::isfinite(v) || v == 0.0 || (first != 0.0 && sign_of(v) != first)) {
      throw DomainError("averaging: f2 vanishes inside the domain (near x = " +
                        std::to_string(x) + ")");
    }
    first = sign_of(v);
  }
}

Transform transform(const SlowSystem& sys, std::optional<double> x_ref) {
  validate(sys);
  Transform t;
  const Domain domain = sys.domain;
  const double zeta = sys.zeta;
  switch (sys.coupling) {
    case NoiseCoupling::Constant: {
      const double r = x_ref.value_or(0.0);
      t.x_ref = r;
      t.U = [=](double x) { return (x - r) / zeta; };
      t.U_inverse = [=](double eta) { return r + zeta * eta; };
      break;
    }
    case NoiseCoupling::Linear: {
      const double r = x_ref.value_or(domain.lo >= 0.0 ? 1.0 : -1.0);
      if (!domain.contains(r)) throw DomainError("averaging: x_ref outside domain");
      t.x_ref = r;
      t.U = [=](double x) { return std::log(x / r) / zeta; };
      t.U_inverse = [=](double eta) { return r * std::exp(zeta * eta); };
      break;
    }
    case NoiseCoupling::General: {
      const double r = x_ref.value_or(default_reference(domain));
      if (!domain.contains(r)) throw DomainError("averaging: x_ref outside domain");
      t.x_ref = r;
      const auto f2 = sys.f2;
      const double orientation = sign_of(f2(r));
      auto U = [=](double x) {
        if (!domain.contains(x)) {
          throw DomainError("averaging: U evaluated outside the domain");
        }
        if (x == r) return 0.0;
        auto inv = [&](double s) { return 1.0 / f2(s); };
        return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
            inv, r, x, 15, 1e-11);
      };
      t.U = U;
      t.U_inverse = [=](double eta) {
        // U is increasing when f2 > 0 and decreasing otherwise.
        auto F = [&](double x) { return orientation * (U(x) - eta); };
        double a = r;
        double Fa = F(a);
        if (Fa == 0.0) return a;
        const double dir = Fa < 0.0 ? 1.0 : -1.0;
        const double bound = dir > 0.0 ? domain.hi : domain.lo;
        double width = std::max(1.0, std::abs(r));
        for (int iter = 0; iter < 400; ++iter) {
          double b = a + dir * width;
          if (!domain.contains(b)) b = 0.5 * (a + bound);
          const double Fb = F(b);
          if ((Fa < 0.0) != (Fb < 0.0) || Fb == 0.0) {
            double lo = std::min(a, b), hi = std::max(a, b);
            double Flo = lo == a ? Fa : Fb, Fhi = lo == a ? Fb : Fa;
            if (Flo == 0.0) return lo;
            if (Fhi == 0.0) return hi;
            std::uintmax_t max_iter = 200;
            const auto [x1, x2] = boost::math::tools::toms748_solve(
                F, lo, hi, Flo, Fhi, boost::math::tools::eps_tolerance<double>(52),
                max_iter);
            return 0.5 * (x1 + x2);
          }
          a = b;
          Fa = Fb;
          width *= 2.0;
        }
        throw NumericalError("averaging: U inverse could not bracket eta = " +
                             std::to_string(eta));
      };
      break;
    }
  }
  const auto f1 = sys.f1;
  const auto f2 = sys.f2;
  const auto inverse = t.U_inverse;
  t.f_tilde = [=](double eta) {
    const double x = inverse(eta);
    return f1(x) / f2(x);
  };
  return t;
}

ReducedSystem reduce(const SlowSystem& sys, const CamParams& cam, double Sigma,
                     double eps) {
  validate(sys);
  const CamDerived d = cam::derive(cam);
  if (!(Sigma > 0.0) || !std::isfinite(Sigma)) {
    throw DomainError("averaging: Sigma must be positive");
  }
  if (!(eps > 0.0)) throw DomainError("averaging: eps must be positive");
  ReducedSystem r;
  r.system = sys;
  r.eps = eps;
  r.Sigma = Sigma;
  r.rho = sys.rho.value_or(d.gamma_star);
  r.noise = {d.alpha_star, d.beta_star,
             std::pow(eps, d.gamma_star - r.rho) * Sigma};
  if (sys.coupling == NoiseCoupling::Constant) {
    r.interpretation = Interpretation::ItoEquivalent;
  } else if (stable::branch_of(d.alpha_star) == stable::Branch::Gaussian) {
    r.interpretation = Interpretation::Stratonovich;
  } else {
    r.interpretation = Interpretation::Marcus;
  }
  return r;
}

double marcus_increment(const std::function<double(double)>& g, double x,
                        double jump, const Domain& domain) {
  if (!domain.contains(x)) {
    throw DomainError("marcus: start point " + std::to_string(x) +
                      " outside the domain");
  }
  if (jump == 0.0) return x;
  auto rhs = [&](double lambda) { return jump * g(lambda); };
  auto rk4 = [&](double y, double h) {
    const double k1 = rhs(y);
    const double k2 = rhs(y + 0.5 * h * k1);
    const double k3 = rhs(y + 0.5 * h * k2);
    const double k4 = rhs(y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };
  constexpr double kTol = 1e-13;
  double s = 0.0;
  double y = x;
  double h = 1.0;
  for (int iter = 0; iter < 1000000; ++iter) {
    if (s >= 1.0) return y;
    h = std::min(h, 1.0 - s);
    const double full = rk4(y, h);
    const double half = rk4(rk4(y, 0.5 * h), 0.5 * h);
    if (!std::isfinite(full) || !std::isfinite(half)) {
      h *= 0.25;
      continue;
    }
    const double err = std::abs(half - full) / 15.0;
    const double scale = kTol * (1.0 + std::abs(half));
    if (err <= scale) {
      s += h;
      y = half + (half - full) / 15.0;
      if (!domain.contains(y)) {
        throw DomainError("marcus: flow left the domain at " +
                          std::to_string(y) + " (jump " +
                          std::to_string(jump) + " from " + std::to_string(x) +
                          ")");
      }
    }
    const double factor =
        err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < 1e-14) break;
  }
  throw NumericalError("marcus: flow integration did not converge");
}

double marcus_increment(const SlowSystem& sys, double scale, double x,
                        double jump) {
  double y = 0.0;
  switch (sys.coupling) {
    case NoiseCoupling::Constant:
      y = x + scale * sys.zeta * jump;
      break;
    case NoiseCoupling::Linear:
      y = x * std::exp(scale * sys.zeta * jump);
      break;
    case NoiseCoupling::General: {
      const auto& f2 = sys.f2;
      return marcus_increment([&](double v) { return scale * f2(v); }, x, jump,
                              sys.domain);
    }
  }
  if (!sys.domain.contains(y)) {
    throw DomainError("marcus: flow left the domain at " + std::to_string(y));
  }
  return y;
}

double drift_step(const std::function<double(double)>& f1, double x,
                  double dt) {
  double remaining = dt;
  for (int iter = 0; remaining > 0.0; ++iter) {
    if (iter > 100000) throw NumericalError("drift: substepping did not finish");
    const double delta = 1e-6 * (1.0 + std::abs(x));
    const double slope = std::abs(f1(x + delta) - f1(x - delta)) / (2.0 * delta);
    const double rate = std::max(slope, std::abs(f1(x)) / (1.0 + std::abs(x)));
    const double h = rate * remaining > 0.5 ? 0.5 / rate : remaining;
    const double k1 = f1(x);
    const double predictor = x + h * k1;
    x += 0.5 * h * (k1 + f1(predictor));
    remaining = h == remaining ? 0.0 : remaining - h;
    if (!std::isfinite(x)) break;
  }
  return x;
}

double default_slow_step(const SlowSystem& sys, double eps) {
  return std::min(10.0 * eps, sys.relaxation_time / 100.0);
}

Trajectory simulate_full(const SlowSystem& sys, const CamParams& cam,
                         double eps, double x0, double dt_slow,
                         std::size_t n_steps, RngStream& rng,
                         const RunOptions& options) {
  validate_structure(sys);
  const CamDerived d = cam::derive(cam);
  if (!(eps > 0.0) || !(dt_slow > 0.0)) {
    throw DomainError("averaging: eps and dt_slow must be positive");
  }
  if (!sys.domain.contains(x0)) throw DomainError("averaging: x0 outside domain");
  const double fast = options.fast_dt > 0.0 ? options.fast_dt : eps / 10.0;
  if (fast > eps / 10.0 * (1.0 + 1e-12)) {
    throw DomainError("averaging: fast step " + std::to_string(fast) +
                      " exceeds eps/10");
  }
  const double ratio = dt_slow / fast;
  const double substeps = std::round(ratio);
  if (substeps < 1.0 || std::abs(ratio - substeps) > 1e-9 * substeps) {
    throw DomainError("averaging: dt_slow must be an integer multiple of the "
                      "fast step");
  }
  const auto m = static_cast<std::size_t>(substeps);
  const std::size_t every = std::max<std::size_t>(1, options.record_every);
  const double rho = sys.rho.value_or(d.gamma_star);
  const double forcing_scale = std::pow(eps, -rho);

  Trajectory traj = start_trajectory("full", sys, dt_slow, every, rng);
  traj.params.insert(traj.params.end(),
                     {{"L", cam.L}, {"E", cam.E}, {"g", cam.g}, {"b", cam.b},
                      {"eps", eps}, {"rho", rho}, {"dt_slow", dt_slow},
                      {"dt_fast", fast}, {"x0", x0}});

  const cam::FastStepper stepper(cam, eps, fast);
  double y = cam::sample_stationary(cam, rng);
  const auto burn = static_cast<std::size_t>(
      std::ceil(cam::burn_in_time(cam) * eps / fast));
  for (std::size_t n = 0; n < burn; ++n) y = stepper.step(y, rng);

  double x = x0;
  traj.values.reserve(n_steps / every + 1);
  traj.values.push_back(x);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    double sum = 0.5 * y;
    for (std::size_t j = 1; j < m; ++j) {
      y = stepper.step(y, rng);
      sum += y;
    }
    y = stepper.step(y, rng);
    sum += 0.5 * y;
    const double forcing = forcing_scale * fast * sum;
    try {
      x = drift_step(sys.f1, x, dt_slow);
      x = marcus_increment(sys, 1.0, x, forcing);
    } catch (const DomainError& e) {
      traj.truncated = true;
      traj.warnings.push_back(std::string("halted at step ") +
                              std::to_string(n) + ": " + e.what());
      break;
    }
    if (!std::isfinite(x) || std::abs(x) > options.blowup) {
      traj.truncated = true;
      traj.warnings.push_back("blow-up guard at step " + std::to_string(n));
      break;
    }
    if (n % every == 0) traj.values.push_back(x);
  }
  return traj;
}

Trajectory simulate_reduced(const ReducedSystem& rsys, double x0, double dt,
                            std::size_t n_steps, RngStream& rng,
                            const RunOptions& options) {
  const SlowSystem& sys = rsys.system;
  validate_structure(sys);
  rsys.noise.validate();
  if (!(dt > 0.0)) throw DomainError("averaging: dt must be positive");
  if (!sys.domain.contains(x0)) throw DomainError("averaging: x0 outside domain");
  const std::size_t every = std::max<std::size_t>(1, options.record_every);
  Trajectory traj = start_trajectory("reduced", sys, dt, every, rng);
  traj.params.insert(traj.params.end(),
                     {{"alpha", rsys.noise.alpha}, {"beta", rsys.noise.beta},
                      {"scale", rsys.noise.sigma}, {"eps", rsys.eps},
                      {"Sigma", rsys.Sigma}, {"rho", rsys.rho}, {"dt", dt},
                      {"x0", x0}});
  const StableParams unit{rsys.noise.alpha, rsys.noise.beta, 1.0};
  const double scale = rsys.noise.sigma;

  double x = x0;
  traj.values.reserve(n_steps / every + 1);
  traj.values.push_back(x);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double jump = stable::sample_increment(unit, dt, rng);
    try {
      x = drift_step(sys.f1, x, dt);
      x = marcus_increment(sys, scale, x, jump);
    } catch (const DomainError& e) {
      traj.truncated = true;
      traj.warnings.push_back(std::string("halted at step ") +
                              std::to_string(n) + ": " + e.what());
      break;
    }
    if (!std::isfinite(x) || std::abs(x) > options.blowup) {
      traj.truncated = true;
      traj.warnings.push_back("blow-up guard at step " + std::to_string(n));
      break;
    }
    if (n % every == 0) traj.values.push_back(x);
  }
  return traj;
}

}  // namespace camlevy::averaging
