#include "camlevy/stable.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "camlevy/errors.hpp"

namespace camlevy {

using std::numbers::pi;

void StableParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw DomainError("stable: alpha must lie in (0, 2], got " +
                      std::to_string(alpha));
  }
  if (!(beta >= -1.0 && beta <= 1.0)) {
    throw DomainError("stable: beta must lie in [-1, 1], got " +
                      std::to_string(beta));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("stable: sigma must be positive, got " +
                      std::to_string(sigma));
  }
}

namespace stable {

Branch branch_of(double alpha) {
  if (std::abs(alpha - 2.0) < kBranchSnap) return Branch::Gaussian;
  if (std::abs(alpha - 1.0) < kBranchSnap) return Branch::LogCauchy;
  return Branch::General;
}

std::complex<double> xi(double k, double alpha, double beta) {
  if (k == 0.0) return {1.0, 0.0};
  const double sign = k > 0.0 ? 1.0 : -1.0;
  double phi = 0.0;
  switch (branch_of(alpha)) {
    case Branch::Gaussian:
      phi = 0.0;
      break;
    case Branch::LogCauchy:
      phi = -(2.0 / pi) * std::log(std::abs(k));
      break;
    case Branch::General:
      phi = std::tan(pi * alpha / 2.0);
      break;
  }
  return {1.0, -beta * sign * phi};
}

std::complex<double> log_characteristic_function(const StableParams& p,
                                                 double k) {
  if (k == 0.0) return {0.0, 0.0};
  const double alpha = branch_of(p.alpha) == Branch::Gaussian ? 2.0
                       : branch_of(p.alpha) == Branch::LogCauchy
                           ? 1.0
                           : p.alpha;
  const double magnitude = std::pow(p.sigma * std::abs(k), alpha);
  return -magnitude * xi(k, alpha, p.beta);
}

std::complex<double> characteristic_function(const StableParams& p, double k) {
  return std::exp(log_characteristic_function(p, k));
}

namespace {

// Unit-scale draw for alpha away from 1 and 2.
double cms_general(double alpha, double beta, RngStream& rng) {
  const double v = pi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double t = beta * std::tan(pi * alpha / 2.0);
  const double shift = std::atan(t) / alpha;
  const double scale = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
  const double arg = alpha * (v + shift);
  const double tail = std::max(std::cos(v - arg), 0.0) / w;
  return scale * std::sin(arg) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(tail, (1.0 - alpha) / alpha);
}

// Unit-scale draw on the alpha = 1 branch.
double cms_log_cauchy(double beta, RngStream& rng) {
  const double v = pi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double half_pi = pi / 2.0;
  const double lever = half_pi + beta * v;
  return (2.0 / pi) *
         (lever * std::tan(v) -
          beta * std::log(half_pi * w * std::cos(v) / lever));
}

}  // namespace

double sample(const StableParams& p, RngStream& rng) {
  switch (branch_of(p.alpha)) {
    case Branch::Gaussian:
      return p.sigma * std::numbers::sqrt2 * rng.normal();
    case Branch::LogCauchy:
      // The extra shift keeps the law on the log|k| form of Xi for every
      // sigma (the alpha = 1 family is not closed under pure rescaling).
      return p.sigma * cms_log_cauchy(p.beta, rng) +
             (2.0 / pi) * p.beta * p.sigma * std::log(p.sigma);
    case Branch::General:
      break;
  }
  return p.sigma * cms_general(p.alpha, p.beta, rng);
}

double sample_increment(const StableParams& p, double dt, RngStream& rng) {
  if (!(dt > 0.0)) {
    throw DomainError("stable: increment time step must be positive, got " +
                      std::to_string(dt));
  }
  StableParams step = p;
  step.sigma = p.sigma * std::pow(dt, 1.0 / p.alpha);
  return sample(step, rng);
}

std::vector<double> pdf_numeric(const StableParams& p,
                                std::span<const double> x_grid,
                                const PdfOptions& options) {
  p.validate();
  constexpr int kBasePanels = 64;
  // |psi(K)| = exp(-(sigma K)^alpha) = 1e-12
  const double cutoff =
      std::pow(-std::log(1e-12), 1.0 / p.alpha) / p.sigma;
  // k = cutoff u^q on u in [0, 1]. For alpha < 1 the |k|^alpha cusp at the
  // origin stalls the plain trapezoid rule; q >= 2/alpha flattens it.
  const double q = p.alpha < 1.0 ? std::ceil(2.0 / p.alpha) : 1.0;
  const double h0 = 1.0 / kBasePanels;

  struct Node {
    double k;
    std::complex<double> weighted;  // psi(k) dk/du
  };
  auto node = [&](double u) {
    const double k = cutoff * std::pow(u, q);
    const double jacobian = q * cutoff * std::pow(u, q - 1.0);
    return Node{k, characteristic_function(p, k) * jacobian};
  };

  // Nodes introduced by each refinement level; filled lazily and shared
  // across all x.
  std::vector<std::vector<Node>> levels;
  auto level_values = [&](int m) -> const std::vector<Node>& {
    while (static_cast<int>(levels.size()) <= m) {
      const int l = static_cast<int>(levels.size());
      std::vector<Node> values;
      if (l == 0) {
        values.resize(kBasePanels + 1);
        for (int j = 0; j <= kBasePanels; ++j) values[j] = node(j * h0);
      } else {
        const std::size_t count = std::size_t{kBasePanels} << (l - 1);
        const double h = h0 / static_cast<double>(std::size_t{1} << l);
        values.resize(count);
        for (std::size_t j = 0; j < count; ++j) {
          values[j] = node(static_cast<double>(2 * j + 1) * h);
        }
      }
      levels.push_back(std::move(values));
    }
    return levels[static_cast<std::size_t>(m)];
  };

  auto integrand = [](const Node& n, double x) {
    return std::cos(n.k * x) * n.weighted.real() +
           std::sin(n.k * x) * n.weighted.imag();
  };

  std::vector<double> density(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    const auto& base = level_values(0);
    double sum = 0.5 * (integrand(base.front(), x) + integrand(base.back(), x));
    for (int j = 1; j < kBasePanels; ++j) sum += integrand(base[j], x);
    double estimate = h0 * sum;
    bool converged = false;
    for (int m = 1; m <= options.max_level; ++m) {
      const auto& mids = level_values(m);
      const double h = h0 / static_cast<double>(std::size_t{1} << m);
      double mid_sum = 0.0;
      for (const Node& n : mids) mid_sum += integrand(n, x);
      const double refined = 0.5 * estimate + h * mid_sum;
      const bool resolved = h * q * cutoff * std::abs(x) < 1.0;
      const bool settled =
          std::abs(refined - estimate) < options.abs_tolerance * pi;
      estimate = refined;
      if (m >= 2 && resolved && settled) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NumericalError("stable: Fourier inversion did not converge at x = " +
                           std::to_string(x));
    }
    density[i] = std::max(estimate / pi, 0.0);
  }
  return density;
}

}  // namespace stable
}  // namespace camlevy
