#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "camlevy/cam.hpp"
#include "camlevy/errors.hpp"
#include "test_util.hpp"

using namespace camlevy;
using std::numbers::pi;

namespace {

// A sweep of 24 admissible parameter sets (nu in (0, 1/2)).
std::vector<CamParams> sweep() {
  std::vector<CamParams> out;
  for (const double a : {1.1, 1.4, 1.7, 1.95}) {
    for (const double g : {-1.0, 0.1, 0.8}) {
      for (const double b : {0.2, 1.3}) {
        out.push_back(CamParams::from_alpha_star(-0.7, a, g, b));
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("validation") {
  CHECK_THROWS_AS((CamParams{1.0, 1.0, 0.1, 0.5}.validate()), DomainError);
  CHECK_THROWS_AS((CamParams{-1.0, 0.0, 0.1, 0.5}.validate()), DomainError);
  CHECK_THROWS_AS((CamParams{-1.0, 1.0, 0.0, 0.5}.validate()), DomainError);
  CHECK_THROWS_AS((CamParams{-1.0, 1.0, 0.1, 0.0}.validate()), DomainError);
  // L/E^2 = -1/2 gives nu = 0
  CHECK_THROWS_WITH_AS(cam::derive({-0.5, 1.0, 0.1, 0.5}),
                       doctest::Contains("no stationary mean"), DomainError);
  CHECK_THROWS_WITH_AS(cam::derive({-1.0, 1.0, 0.1, 0.5}),
                       doctest::Contains("Gaussian-attraction regime"), DomainError);
}

TEST_CASE("derive") {
  SUBCASE("closed forms") {
    const CamParams p{-1.0, std::sqrt(2.0 / 1.5), 0.1, 0.5};
    const auto d = cam::derive(p);
    CHECK(d.nu == doctest::Approx(0.25));
    CHECK(d.alpha_star == doctest::Approx(1.5));
    CHECK(d.gamma_star == doctest::Approx(1.0 / 3.0));
    CHECK(d.beta_star == doctest::Approx(std::tanh(pi * 0.1 * 0.25 / 0.5)));
  }
  SUBCASE("alpha* depends only on L/E^2, beta* only on g nu / b") {
    const CamParams base{-1.0, 1.2, 0.3, 0.7};
    const auto d0 = cam::derive(base);
    const auto d1 = cam::derive({-2.0, 1.2 * std::sqrt(2.0), 0.9, 0.4});
    CHECK(d1.alpha_star == doctest::Approx(d0.alpha_star).epsilon(1e-14));
    const auto d2 = cam::derive({-2.0, 1.2 * std::sqrt(2.0), 0.6, 1.4});
    CHECK(d2.beta_star == doctest::Approx(d0.beta_star).epsilon(1e-14));
    const auto d3 = cam::derive({-1.0, 1.2, 3.0, 7.0});
    CHECK(d3.alpha_star == d0.alpha_star);
    CHECK(d3.beta_star == doctest::Approx(d0.beta_star).epsilon(1e-14));
  }
  SUBCASE("sign canonicalization") {
    const auto d0 = cam::derive({-1.0, 1.2, 0.3, 0.7});
    const auto d1 = cam::derive({-1.0, -1.2, -0.3, -0.7});
    CHECK(d1.beta_star == doctest::Approx(d0.beta_star).epsilon(1e-14));
    CHECK(d1.sigma_star == doctest::Approx(d0.sigma_star).epsilon(1e-14));
  }
  SUBCASE("tail-ratio law") {
    for (const auto& p : sweep()) {
      const auto d = cam::derive(p);
      CHECK(std::abs((d.h_plus - d.h_minus) / (d.h_plus + d.h_minus) - d.beta_star) <
            1e-12);
      CHECK(cam::tail_amplitude(p, +1) == doctest::Approx(d.h_plus).epsilon(1e-14));
      CHECK(cam::tail_amplitude(p, -1) == doctest::Approx(d.h_minus).epsilon(1e-14));
    }
  }
  SUBCASE("sigma* against the reflection form") {
    for (const auto& p : sweep()) {
      const auto d = cam::derive(p);
      const double a = d.alpha_star;
      const double expected = std::pow(
          (d.h_plus + d.h_minus) * pi / (2.0 * std::tgamma(a + 1.0) * std::sin(pi * a / 2.0)),
          1.0 / a);
      CHECK(d.sigma_star > 0.0);
      CHECK(d.sigma_star == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("tails of p_s follow h(s) |y|^{-2(nu+1)}") {
    const CamParams p{-1.0, 1.1, 0.4, 0.6};
    const auto d = cam::derive(p);
    const double y = 1e7;
    const double decay = std::pow(y, -2.0 * (d.nu + 1.0));
    CHECK(cam::stationary_pdf(p, y) / decay == doctest::Approx(d.h_plus).epsilon(1e-5));
    CHECK(cam::stationary_pdf(p, -y) / decay == doctest::Approx(d.h_minus).epsilon(1e-5));
  }
}

TEST_CASE("normalization") {
  SUBCASE("closed form vs quadrature over a sweep") {
    for (const auto& p : sweep()) {
      const double closed = cam::normalization_constant(p);
      const double quad = cam::normalization_quadrature(p);
      CHECK(std::abs(closed / quad - 1.0) < 1e-8);
    }
  }
  SUBCASE("g -> 0 limit against the Wallis integral") {
    const CamParams p = CamParams::from_alpha_star(-1.0, 1.6, 1e-12, 0.8);
    const double nu = p.nu();
    const double wallis =
        std::sqrt(pi) * std::tgamma(nu + 0.5) / std::tgamma(nu + 1.0);
    const double expected = wallis / (std::pow(p.b, 2.0 * nu + 1.0) * p.E);
    CHECK(cam::normalization_constant(p) == doctest::Approx(expected).epsilon(1e-10));
  }
  SUBCASE("p_s integrates to one and is positive") {
    for (const auto& p : sweep()) {
      CHECK(std::abs(testutil::total_mass(p.canonical()) - 1.0) < 1e-6);
      for (const double y : {-1e6, -3.0, 0.0, 0.2, 50.0, 1e8}) {
        CHECK(cam::stationary_pdf(p, y) > 0.0);
      }
    }
  }
}

TEST_CASE("stationary sampler matches p_s") {
  for (const auto& p : {CamParams::from_alpha_star(-1.0, 1.5, 0.1, 0.5),
                        CamParams{-1.0, 1.118, 1.0, 0.3},
                        CamParams::from_alpha_star(-1.0, 1.8, -0.7, 0.2)}) {
    const auto y = testutil::draws(1000000, 31, [&](RngStream& r) {
      return cam::sample_stationary(p, r);
    });
    const cam::StationaryDensity f(p);
    auto h = stats::histogram(y, stats::heavy_tail_edges(-5.0, 5.0, 100));
    CHECK(stats::l1_distance(h, [&](double v) { return f(v); }) < 0.01);
  }
}

TEST_CASE("weak step") {
  const cam::StepCoefficients c{-0.4, 1.1, 0.3, 0.6};

  SUBCASE("zero noise amplitudes give the Heun step") {
    const cam::StepCoefficients quiet{c.drift_rate, 0.0, 0.0, 0.0};
    const double y = 1.7, h = 0.05;
    const double heun = y + 0.5 * h * (c.drift_rate * y +
                                       c.drift_rate * (y + c.drift_rate * y * h));
    CHECK(cam::weak_step(quiet, y, h, 0.3, -0.2) == doctest::Approx(heun).epsilon(1e-15));
  }
  SUBCASE("dW = 0 leaves the Ito-correction residual") {
    const double y = 0.8, h = 0.01;
    const double heun = y + 0.5 * h * (c.drift_rate * y +
                                       c.drift_rate * (y + c.drift_rate * y * h));
    CHECK(cam::weak_step(c, y, h, 0.0, 0.0) - heun ==
          doctest::Approx(-0.5 * c.E * (c.E * y + c.g) * h).epsilon(1e-12));
  }
  SUBCASE("one-step moments are locally third order") {
    // Exact expectation over (dW1, dW2) by 3-point Gauss-Hermite (exact for the
    // degree-4 polynomials involved), against the moment ODEs of the SDE.
    const std::array<double, 3> unit_nodes{-std::sqrt(3.0), 0.0, std::sqrt(3.0)};
    const std::array<double, 3> weights{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
    const double y = 0.9;
    auto scheme = [&](double h) {
      double m1 = 0.0, m2 = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const double next = cam::weak_step(c, y, h, std::sqrt(h) * unit_nodes[i],
                                             std::sqrt(h) * unit_nodes[j]);
          m1 += weights[i] * weights[j] * next;
          m2 += weights[i] * weights[j] * next * next;
        }
      }
      return std::array<double, 2>{m1, m2};
    };
    auto exact = [&](double h) {
      // m1' = a m1, m2' = (2a + E^2) m2 + 2 E g m1 + g^2 + b^2
      auto rhs = [&](const std::array<double, 2>& m) {
        return std::array<double, 2>{
            c.drift_rate * m[0],
            (2.0 * c.drift_rate + c.E * c.E) * m[1] + 2.0 * c.E * c.g * m[0] +
                c.g * c.g + c.b * c.b};
      };
      std::array<double, 2> m{y, y * y};
      const int n = 2000;
      const double s = h / n;
      for (int k = 0; k < n; ++k) {
        const auto k1 = rhs(m);
        const auto k2 = rhs(std::array<double, 2>{m[0] + 0.5 * s * k1[0], m[1] + 0.5 * s * k1[1]});
        const auto k3 = rhs(std::array<double, 2>{m[0] + 0.5 * s * k2[0], m[1] + 0.5 * s * k2[1]});
        const auto k4 = rhs(std::array<double, 2>{m[0] + s * k3[0], m[1] + s * k3[1]});
        for (int q = 0; q < 2; ++q) {
          m[q] += s / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
        }
      }
      return m;
    };
    const double h = 0.02;
    const double mean_1 = std::abs(scheme(h)[0] - exact(h)[0]);
    const double mean_2 = std::abs(scheme(h / 2)[0] - exact(h / 2)[0]);
    CHECK(mean_1 < h * h * h);
    CHECK(mean_1 / mean_2 > 7.0);
    // b dW2 inside the support values leaves -E^2 b^2 h^2 / 4 in the second
    // moment; everything else is third order.
    for (const double step : {h, h / 2}) {
      const double leading = -0.25 * c.E * c.E * c.b * c.b * step * step;
      const double rest = scheme(step)[1] - exact(step)[1] - leading;
      CHECK(std::abs(rest) < 10.0 * step * step * step);
    }
    const double second_1 = std::abs(scheme(h)[1] - exact(h)[1]);
    CHECK(second_1 < h * h);
  }
}

TEST_CASE("fast-time rescaling") {
  const CamParams p = CamParams::from_alpha_star(-1.0, 1.5, 0.1, 0.5);
  const double eps = 1.0 / 1024.0, dt = eps / 16.0;
  RngStream a(5, 3), b(5, 3);
  const auto fast = cam::simulate_fast(p, eps, 0.2, dt, 5000, a);
  const auto unit = cam::simulate(p, 0.2, dt / eps, 5000, b);
  CHECK(fast.values == unit.values);
  CHECK(fast.warnings.empty());
  CHECK(fast.master_seed == 5);
  CHECK(fast.stream_index == 3);
}

TEST_CASE("simulate") {
  const CamParams p = CamParams::from_alpha_star(-1.0, 1.5, 0.1, 0.5);
  SUBCASE("determinism") {
    RngStream a(9, 0), b(9, 0), c(10, 0);
    const auto t1 = cam::simulate(p, 0.0, 0.01, 1000, a);
    const auto t2 = cam::simulate(p, 0.0, 0.01, 1000, b);
    const auto t3 = cam::simulate(p, 0.0, 0.01, 1000, c);
    CHECK(t1.values == t2.values);
    CHECK(t1.values != t3.values);
    CHECK(t1.values.size() == 1001);
  }
  SUBCASE("coarse steps are flagged") {
    RngStream r(1, 0);
    const auto t = cam::simulate_fast(p, 0.01, 0.0, 0.01, 10, r);
    REQUIRE(t.warnings.size() == 1);
    CHECK(t.warnings[0].find("eps/10") != std::string::npos);
  }
  SUBCASE("zero steps") {
    RngStream r(1, 0);
    CHECK(cam::simulate(p, 0.3, 0.01, 0, r).values == std::vector<double>{0.3});
  }
  SUBCASE("burn-in span") {
    CHECK(cam::burn_in_time(p) == doctest::Approx(20.0 / (0.25 * p.E * p.E)));
  }
}
