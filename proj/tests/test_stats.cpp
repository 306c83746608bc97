#include <doctest.h>

#include <cmath>
#include <numbers>

#include "camlevy/errors.hpp"
#include "camlevy/stats.hpp"
#include "test_util.hpp"

using namespace camlevy;

TEST_CASE("ecf") {
  const std::vector<double> x{-1.2, 0.3, 4.0, 7.5};
  const std::vector<double> k{0.0, 0.7, -0.7, 2.0};
  const auto e = stats::ecf(x, k);
  CHECK(e[0] == std::complex<double>(1.0, 0.0));
  CHECK(std::abs(e[2] - std::conj(e[1])) < 1e-15);
  std::complex<double> direct = 0.0;
  for (const double v : x) direct += std::exp(std::complex<double>(0.0, 2.0 * v));
  CHECK(std::abs(e[3] - direct / 4.0) < 1e-15);
  CHECK_THROWS_AS(stats::ecf({}, k), DomainError);
}

TEST_CASE("small helpers") {
  const auto g = stats::linspace(-1.0, 3.0, 5);
  CHECK(g == std::vector<double>{-1.0, 0.0, 1.0, 2.0, 3.0});

  const auto q = stats::quartiles({4.0, 1.0, 3.0, 2.0});
  CHECK(q.q25 == doctest::Approx(1.75));
  CHECK(q.median == doctest::Approx(2.5));
  CHECK(q.q75 == doctest::Approx(3.25));
  CHECK(stats::percentile({5.0}, 0.9) == 5.0);

  const std::vector<double> xs{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> ys{1.0, 3.0, 5.0, 7.0};
  const auto line = stats::fit_line(xs, ys);
  CHECK(line.slope == doctest::Approx(2.0));
  CHECK(line.intercept == doctest::Approx(1.0));
  // a point with zero weight does not pull the line
  const std::vector<double> ys2{1.0, 3.0, 5.0, 100.0};
  const std::vector<double> w{1.0, 1.0, 1.0, 0.0};
  CHECK(stats::fit_line(xs, ys2, w).slope == doctest::Approx(2.0));
  CHECK_THROWS_AS(stats::fit_line(std::vector<double>{1.0, 1.0}, ys2), DomainError);

  const std::vector<std::complex<double>> a{{1.0, 0.0}, {0.0, 1.0}};
  const std::vector<std::complex<double>> b{{1.0, 0.5}, {0.0, 1.0}};
  CHECK(stats::sup_distance(a, b) == doctest::Approx(0.5));

  std::vector<double> series(103);
  const auto blocks = stats::split_blocks(series, 10);
  CHECK(blocks.size() == 10);
  for (const auto& blk : blocks) CHECK(blk.size() == 10);
  CHECK_THROWS_AS(stats::split_blocks(series, 200), DomainError);
}

TEST_CASE("autocodifference") {
  const StableParams law{1.5, 0.3, 1.0};
  const auto x = testutil::draws(200000, 51, [&](RngStream& r) {
    return stable::sample(law, r);
  });

  SUBCASE("lag zero equals CD(Y, Y)") {
    const std::vector<std::size_t> lags{0};
    const auto acd = stats::acd_estimate(x, lags);
    const auto cd = stats::codiff_cosum(x, x);
    CHECK(std::abs(acd[0].value - cd.cd) < 1e-12);
    // -log psi(1) - log psi(-1) = 2 sigma^alpha
    CHECK(acd[0].value.real() == doctest::Approx(2.0).epsilon(0.02));
  }
  SUBCASE("independent draws have no serial dependence") {
    const std::vector<std::size_t> lags{1, 5, 40};
    for (const auto& p : stats::acd_estimate(x, lags)) {
      CHECK(std::abs(p.value) < 0.02);
      CHECK_FALSE(p.unreliable);
    }
  }
  SUBCASE("every value repeated once") {
    std::vector<double> repeated;
    for (const double v : x) {
      repeated.push_back(v);
      repeated.push_back(v);
    }
    const std::vector<std::size_t> lags{1};
    // Half the pairs are identical and half independent, so
    // E e^{i(y' - y)} = (1 + |psi(1)|^2) / 2 with |psi(1)|^2 = e^{-2}.
    CHECK(stats::acd_estimate(repeated, lags)[0].value.real() ==
          doctest::Approx(std::log(0.5 * (std::exp(2.0) + 1.0))).epsilon(0.02));
  }
  SUBCASE("ensemble quartiles bracket the median") {
    const auto blocks = stats::split_blocks(x, 20);
    const std::vector<std::size_t> lags{0, 3};
    const auto s = stats::acd_ensemble(blocks, lags);
    REQUIRE(s.size() == 2);
    CHECK(s[0].re.q25 <= s[0].re.median);
    CHECK(s[0].re.median <= s[0].re.q75);
    CHECK(s[0].re.median == doctest::Approx(2.0).epsilon(0.05));
  }
  SUBCASE("lag beyond the series") {
    const std::vector<std::size_t> lags{x.size()};
    CHECK_THROWS_AS(stats::acd_estimate(x, lags), DomainError);
  }
  SUBCASE("deterministic") {
    const std::vector<std::size_t> lags{0, 2, 7};
    const auto a = stats::acd_estimate(x, lags);
    const auto b = stats::acd_estimate(x, lags);
    for (std::size_t i = 0; i < lags.size(); ++i) CHECK(a[i].value == b[i].value);
  }
}

TEST_CASE("codifference and cosum") {
  const StableParams law{1.6, 0.5, 1.0};
  const auto u = testutil::draws(200000, 52, [&](RngStream& r) {
    return stable::sample(law, r);
  });
  const auto v = testutil::draws(200000, 53, [&](RngStream& r) {
    return stable::sample(law, r);
  });
  const auto independent = stats::codiff_cosum(u, v);
  CHECK(std::abs(independent.cd) < 0.02);
  CHECK(std::abs(independent.cs) < 0.02);

  // U = V: CD = 2 sigma^alpha; CS(U, U) = log psi(2) - 2 log psi(1)
  const auto same = stats::codiff_cosum(u, u);
  CHECK(same.cd.real() == doctest::Approx(2.0).epsilon(0.02));
  const auto two = stable::log_characteristic_function(law, 2.0);
  const auto one = stable::log_characteristic_function(law, 1.0);
  CHECK(std::abs(same.cs - (two - 2.0 * one)) < 0.05);

  // scaling the data by c and passing scale c gives the same numbers
  std::vector<double> u3(u), v3(v);
  for (auto& s : u3) s *= 3.0;
  for (auto& s : v3) s *= 3.0;
  const auto scaled = stats::codiff_cosum(u3, v3, 3.0);
  CHECK(std::abs(scaled.cd - independent.cd) < 1e-12);
  CHECK_THROWS_AS(stats::codiff_cosum(u, std::vector<double>(3)), DomainError);
}

TEST_CASE("tail fit") {
  SUBCASE("recovers alpha and beta of stable draws") {
    for (const auto law : {StableParams{1.5, 0.0, 1.0}, StableParams{1.5, 0.5, 1.0},
                           StableParams{1.7, -0.3, 1.0}}) {
      const auto x = testutil::draws(10000000, 54, [&](RngStream& r) {
        return stable::sample(law, r);
      });
      const auto fit = stats::tail_fit(x);
      CAPTURE(law.alpha);
      CAPTURE(law.beta);
      CHECK(fit.exponent == doctest::Approx(-(1.0 + law.alpha)).epsilon(0.1 / 2.5));
      CHECK(std::abs(fit.skew_ratio - law.beta) < 0.1);
      CHECK(fit.r_lo > 0.0);
      CHECK(fit.bins_used >= 3);
    }
  }
  SUBCASE("pure power law") {
    // |X| = U^{-1/a}: density a r^{-1-a} on r > 1
    const double a = 1.3;
    const auto x = testutil::draws(2000000, 55, [&](RngStream& r) {
      const double m = std::pow(r.uniform(), -1.0 / a);
      return r.uniform() < 0.8 ? m : -m;
    });
    const auto fit = stats::tail_fit(x);
    CHECK(fit.exponent == doctest::Approx(-(1.0 + a)).epsilon(0.02));
    CHECK(fit.skew_ratio == doctest::Approx(0.6).epsilon(0.05));
  }
  SUBCASE("too few tail samples") {
    const auto x = testutil::draws(1000, 56, [](RngStream& r) { return r.normal(); });
    CHECK_THROWS_WITH_AS(stats::tail_fit(x), doctest::Contains("insufficient"),
                         DomainError);
  }
}

TEST_CASE("histograms") {
  SUBCASE("heavy-tail edges") {
    const auto e = stats::heavy_tail_edges(-2.0, 2.0, 8, 5, 1e3);
    REQUIRE(e.size() == 8 + 2 * 5 + 1);
    for (std::size_t i = 0; i + 1 < e.size(); ++i) CHECK(e[i] < e[i + 1]);
    CHECK(e.front() == doctest::Approx(-2e3));
    CHECK(e.back() == doctest::Approx(2e3));
    CHECK(e[5] == doctest::Approx(-2.0));
    CHECK(e[13] == doctest::Approx(2.0));
  }
  SUBCASE("density integrates to one, outliers counted") {
    const std::vector<double> x{-5.0, 0.1, 0.2, 0.9, 1.5, 9.0};
    const auto h = stats::histogram(x, {0.0, 0.5, 1.0, 2.0});
    CHECK(h.below == 1.0);
    CHECK(h.above == 1.0);
    CHECK(h.total() == 4.0);
    double mass = 0.0;
    for (std::size_t i = 0; i < h.bins(); ++i) mass += h.density[i] * h.width(i);
    CHECK(mass == doctest::Approx(1.0));
    CHECK(h.density[0] == doctest::Approx(2.0 / 4.0 / 0.5));
  }
  SUBCASE("accumulate matches a single pass") {
    const auto x = testutil::draws(10000, 57, [](RngStream& r) { return r.normal(); });
    const auto edges = stats::heavy_tail_edges(-3.0, 3.0, 30);
    auto split = stats::histogram(std::span(x).first(4000), edges);
    stats::accumulate(split, std::span(x).subspan(4000));
    const auto whole = stats::histogram(x, edges);
    CHECK(split.counts == whole.counts);
    CHECK(stats::l1_distance(split, whole) == 0.0);
  }
  SUBCASE("L1 distance to a density") {
    const auto x = testutil::draws(1000000, 58, [](RngStream& r) { return r.normal(); });
    const auto h = stats::histogram(x, stats::heavy_tail_edges(-5.0, 5.0, 100));
    const double normal_l1 = stats::l1_distance(h, [](double v) {
      return std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
    });
    CHECK(normal_l1 < 0.01);
    const double shifted_l1 = stats::l1_distance(h, [](double v) {
      return std::exp(-0.5 * (v - 1.0) * (v - 1.0)) / std::sqrt(2.0 * std::numbers::pi);
    });
    // 2 (2 Phi(1/2) - 1) = 0.7659
    CHECK(shifted_l1 == doctest::Approx(0.7659).epsilon(0.02));
  }
  SUBCASE("mismatched edges") {
    const auto a = stats::histogram(std::vector<double>{0.5}, {0.0, 1.0});
    const auto b = stats::histogram(std::vector<double>{0.5}, {0.0, 2.0});
    CHECK_THROWS_AS(stats::l1_distance(a, b), DomainError);
  }
}
