#include <doctest.h>

#include <cmath>
#include <numbers>

#include "camlevy/errors.hpp"
#include "camlevy/oulp.hpp"
#include "camlevy/sigma_est.hpp"
#include "test_util.hpp"

using namespace camlevy;

namespace {

// Trapezoid integral of z_{s/eps} over [0, t] from z0, n steps per unit t/eps.
double path_integral(const OulpParams& p, double eps, double z0, double t,
                     double dt, RngStream& rng) {
  const auto n = static_cast<std::size_t>(std::llround(t / dt));
  const auto path = oulp::simulate(p, eps, z0, dt, n, rng).values;
  double s = 0.5 * (path.front() + path.back());
  for (std::size_t i = 1; i + 1 < path.size(); ++i) s += path[i];
  return s * dt;
}

}  // namespace

TEST_CASE("validation") {
  CHECK_THROWS_AS((OulpParams{0.0, 1.0, 1.5, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((OulpParams{1.0, -1.0, 1.5, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((OulpParams{1.0, 1.0, 2.5, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS(oulp::acd_analytic({1.0, 1.0, 1.0, 0.0}, 0.5), DomainError);
  CHECK_THROWS_AS(oulp::acd_analytic({1.0, 1.0, 1.5, 0.0}, -0.5), DomainError);
  CHECK_THROWS_AS(oulp::match_from_cam({-1.0, 1.0, 0.1, 0.5}, 0.0), DomainError);
}

TEST_CASE("stationary law") {
  const OulpParams p{2.0, 0.7, 1.6, 0.4};
  CHECK(oulp::stationary_cf(p, 0.0) == std::complex<double>(1.0, 0.0));
  for (const double k : stats::linspace(-5.0, 5.0, 51)) {
    CHECK(std::abs(oulp::stationary_cf(p, k)) <= 1.0);
  }
  CHECK(p.stationary_law().sigma ==
        doctest::Approx(0.7 * std::pow(1.6 * 2.0, -1.0 / 1.6)));

  SUBCASE("ensemble of endpoints matches the stationary CF") {
    const double dt = 0.002;
    const auto z = testutil::draws(20000, 41, [&](RngStream& r) {
      return oulp::simulate(p, 1.0, 0.0, dt, 3000, r).values.back();
    });
    CHECK(testutil::ecf_vs_law(z, p.stationary_law(), stats::linspace(-2.0, 2.0, 41)) <
          0.02);
  }
}

TEST_CASE("analytic ACD") {
  SUBCASE("lag zero and decay") {
    const OulpParams p{1.3, 0.9, 1.5, 0.0};
    const double s_alpha = std::pow(0.9, 1.5) / (1.5 * 1.3);
    CHECK(oulp::acd_analytic(p, 0.0).real() == doctest::Approx(2.0 * s_alpha));
    CHECK(oulp::acd_analytic(p, 0.0).imag() == 0.0);
    CHECK(std::abs(oulp::acd_analytic(p, 60.0)) < 1e-12);
  }
  SUBCASE("real part nonincreasing for beta = 0") {
    for (const double a : {1.2, 1.5, 1.9, 2.0}) {
      const OulpParams p{0.8, 1.0, a, 0.0};
      double prev = oulp::acd_analytic(p, 0.0).real();
      for (const double tau : stats::linspace(0.01, 8.0, 400)) {
        const double cur = oulp::acd_analytic(p, tau).real();
        CHECK(cur <= prev + 1e-15);
        prev = cur;
      }
    }
  }
  SUBCASE("alpha = 2 reduces to the Gaussian autocovariance form") {
    const OulpParams p{1.0, 1.0, 2.0, 0.7};
    for (const double tau : {0.1, 1.0, 3.0}) {
      // 2 var - 2 cov with var = 1/2: 1 + a^2 - (1 - a)^2 = 2a
      const double a = std::exp(-tau);
      CHECK(oulp::acd_analytic(p, tau).real() == doctest::Approx(a));
      CHECK(oulp::acd_analytic(p, tau).imag() == 0.0);
    }
  }
  SUBCASE("agrees with a simulated path, sign of the imaginary part included") {
    const OulpParams p{1.0, 1.0, 1.5, 0.8};
    const double dt = 0.01;
    RngStream rng(42, 0);
    const auto path = oulp::simulate(p, 1.0, 0.0, dt, 4000000, rng).values;
    const std::vector<std::size_t> lags{20, 50, 100, 200};
    const auto blocks = stats::split_blocks(path, 40);
    const auto summary = stats::acd_ensemble(blocks, lags);
    for (std::size_t i = 0; i < lags.size(); ++i) {
      const auto expected = oulp::acd_analytic(p, static_cast<double>(lags[i]) * dt);
      CAPTURE(lags[i]);
      CHECK(std::abs(summary[i].re.median - expected.real()) < 0.05);
      CHECK(std::abs(summary[i].im.median - expected.imag()) < 0.04);
      CHECK(summary[i].im.median < 0.0);
      CHECK(expected.imag() < 0.0);
    }
  }
}

TEST_CASE("integral law") {
  const OulpParams p{1.0, 1.0, 1.5, 0.5};
  const double eps = 0.01, dt = eps / 20.0;

  SUBCASE("integral_cf at z0 = 0 is the stable law of integral_scale") {
    const StableParams law{1.5, 0.5, oulp::integral_scale(p, eps, 2.0)};
    for (const double m : {-3.0, 0.5, 2.0}) {
      CHECK(std::abs(oulp::integral_cf(p, eps, 0.0, m, 2.0) -
                     stable::characteristic_function(law, m)) < 1e-15);
    }
    CHECK(oulp::integral_scale(p, eps, 1.0) ==
          doctest::Approx(std::pow(eps, 1.0 / 3.0)));
  }
  SUBCASE("relaxation of z0 shifts the mean") {
    const double z0 = 3.0, t = 1.0;
    const auto shifted = oulp::integral_cf(p, eps, z0, 1.0, t);
    const auto centred = oulp::integral_cf(p, eps, 0.0, 1.0, t);
    CHECK(std::arg(shifted / centred) ==
          doctest::Approx(eps * z0 * (1.0 - std::exp(-t / eps))));
  }
  SUBCASE("simulation matches integral_cf, scale grows as t^{1/alpha}") {
    std::vector<double> logt, logs;
    for (const double t : {0.25, 0.5, 1.0, 2.0}) {
      const auto v = testutil::draws(4000, 43, [&](RngStream& r) {
        return path_integral(p, eps, 0.0, t, dt, r);
      });
      const double scale = oulp::integral_scale(p, eps, t);
      std::vector<double> k = stats::linspace(-1.5 / scale, 1.5 / scale, 31);
      const auto e = stats::ecf(v, k);
      double worst = 0.0;
      for (std::size_t i = 0; i < k.size(); ++i) {
        worst = std::max(worst, std::abs(e[i] - oulp::integral_cf(p, eps, 0.0, k[i], t)));
      }
      CAPTURE(t);
      CHECK(worst < 0.04);
      logt.push_back(std::log(t));
      logs.push_back(std::log(sigma_est::fit_scale(v, p.alpha, p.beta).sigma));
    }
    CHECK(stats::fit_line(logt, logs).slope == doctest::Approx(1.0 / 1.5).epsilon(0.05 * 1.5));
  }
}

TEST_CASE("matching to a CAM process") {
  const CamParams cam_p = CamParams::from_alpha_star(-1.0, 1.5, 0.1, 0.5);
  const auto m = oulp::match_from_cam(cam_p, 0.85);
  const auto d = cam::derive(cam_p);
  CHECK(m.theta == doctest::Approx(d.nu * cam_p.E * cam_p.E));
  CHECK(m.theta > 0.0);
  CHECK(m.alpha == d.alpha_star);
  CHECK(m.beta == d.beta_star);
  CHECK(m.sigma_z / m.theta == doctest::Approx(0.85));

  SUBCASE("the integral scale does not depend on theta for fixed Sigma") {
    const CamParams slower{-3.0, std::sqrt(6.0 / 1.5), 0.3, 1.5};
    const auto m2 = oulp::match_from_cam(slower, 0.85);
    CHECK(m2.theta != doctest::Approx(m.theta));
    for (const double t : {0.1, 1.0, 7.0}) {
      CHECK(oulp::integral_scale(m2, 1e-3, t) ==
            doctest::Approx(oulp::integral_scale(m, 1e-3, t)).epsilon(1e-14));
    }
  }
}

TEST_CASE("simulate") {
  const OulpParams p{1.0, 1.0, 1.5, 0.0};
  RngStream a(3, 1), b(3, 1);
  const auto t1 = oulp::simulate(p, 0.1, 0.5, 0.001, 100, a);
  const auto t2 = oulp::simulate(p, 0.1, 0.5, 0.001, 100, b);
  CHECK(t1.values == t2.values);
  CHECK(t1.warnings.empty());
  RngStream c(3, 1);
  CHECK(oulp::simulate(p, 0.1, 0.5, 0.05, 10, c).warnings.size() == 1);
  SUBCASE("no noise gives the Euler relaxation") {
    RngStream r(3, 1);
    const auto quiet = oulp::simulate({2.0, 0.0, 1.5, 0.0}, 1.0, 1.0, 0.01, 3, r);
    CHECK(quiet.values.back() == doctest::Approx(std::pow(0.98, 3)));
  }
}
