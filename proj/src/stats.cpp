#include "camlevy/stats.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numeric>
#include <string>

#include "camlevy/errors.hpp"

namespace camlevy::stats {

std::vector<std::complex<double>> ecf(std::span<const double> samples,
                                      std::span<const double> k_grid) {
  std::vector<std::complex<double>> out(k_grid.size());
  if (samples.empty()) throw DomainError("ecf: no samples");
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    const double k = k_grid[i];
    double re = 0.0;
    double im = 0.0;
    for (const double x : samples) {
      re += std::cos(k * x);
      im += std::sin(k * x);
    }
    out[i] = {re / n, im / n};
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = lo;
    return grid;
  }
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                       static_cast<double>(n - 1);
  }
  return grid;
}

double sup_distance(std::span<const std::complex<double>> a,
                    std::span<const std::complex<double>> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

double percentile(std::vector<double> values, double fraction) {
  if (values.empty()) throw DomainError("percentile: empty input");
  std::sort(values.begin(), values.end());
  const double pos = fraction * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw DomainError("quartiles: empty input");
  std::sort(values.begin(), values.end());
  auto at = [&](double fraction) {
    const double pos = fraction * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> weights) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("fit_line: need at least two paired points");
  }
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    sxx += w * (x[i] - mx) * (x[i] - mx);
    sxy += w * (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_line: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

// ---------------------------------------------------------------------------

std::vector<AcdPoint> acd_estimate(std::span<const double> series,
                                   std::span<const std::size_t> lags) {
  const std::size_t n = series.size();
  std::vector<std::complex<double>> phase(n);
  for (std::size_t t = 0; t < n; ++t) {
    phase[t] = {std::cos(series[t]), std::sin(series[t])};
  }
  std::vector<AcdPoint> out;
  out.reserve(lags.size());
  for (const std::size_t lag : lags) {
    if (lag >= n) {
      throw DomainError("acd: lag " + std::to_string(lag) +
                        " not shorter than the series");
    }
    const std::size_t pairs = n - lag;
    std::complex<double> joint = 0.0;
    std::complex<double> later = 0.0;
    std::complex<double> earlier = 0.0;
    for (std::size_t t = 0; t < pairs; ++t) {
      joint += phase[t + lag] * std::conj(phase[t]);
      later += phase[t + lag];
      earlier += std::conj(phase[t]);
    }
    const double m = static_cast<double>(pairs);
    joint /= m;
    later /= m;
    earlier /= m;
    const double floor = 3.0 / std::sqrt(m);
    AcdPoint point;
    point.lag = lag;
    point.value = std::log(joint / (later * earlier));
    point.unreliable = std::abs(later) < floor || std::abs(earlier) < floor;
    out.push_back(point);
  }
  return out;
}

std::vector<AcdSummary> acd_ensemble(
    std::span<const std::span<const double>> realizations,
    std::span<const std::size_t> lags) {
  if (realizations.empty()) throw DomainError("acd: no realizations");
  std::vector<std::vector<double>> re(lags.size());
  std::vector<std::vector<double>> im(lags.size());
  std::vector<std::size_t> flagged(lags.size(), 0);
  for (const auto series : realizations) {
    const auto points = acd_estimate(series, lags);
    for (std::size_t i = 0; i < points.size(); ++i) {
      re[i].push_back(points[i].value.real());
      im[i].push_back(points[i].value.imag());
      if (points[i].unreliable) ++flagged[i];
    }
  }
  std::vector<AcdSummary> out(lags.size());
  for (std::size_t i = 0; i < lags.size(); ++i) {
    out[i].lag = lags[i];
    out[i].re = quartiles(re[i]);
    out[i].im = quartiles(im[i]);
    out[i].unreliable = flagged[i];
  }
  return out;
}

std::vector<std::span<const double>> split_blocks(std::span<const double> series,
                                                  std::size_t blocks) {
  if (blocks == 0 || series.size() < blocks) {
    throw DomainError("split_blocks: series too short for requested blocks");
  }
  const std::size_t length = series.size() / blocks;
  std::vector<std::span<const double>> out;
  out.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    out.push_back(series.subspan(b * length, length));
  }
  return out;
}

// ---------------------------------------------------------------------------

CodiffCosum codiff_cosum(std::span<const double> first,
                         std::span<const double> second, double scale) {
  if (first.size() != second.size() || first.empty()) {
    throw DomainError("codiff: need equally many nonzero pairs");
  }
  if (!(scale > 0.0)) throw DomainError("codiff: scale must be positive");
  std::complex<double> diff = 0.0, sum = 0.0, u_plus = 0.0, v_minus = 0.0,
                       v_plus = 0.0;
  for (std::size_t j = 0; j < first.size(); ++j) {
    const double u = first[j] / scale;
    const double v = second[j] / scale;
    diff += std::polar(1.0, u - v);
    sum += std::polar(1.0, u + v);
    u_plus += std::polar(1.0, u);
    v_minus += std::polar(1.0, -v);
    v_plus += std::polar(1.0, v);
  }
  const double n = static_cast<double>(first.size());
  diff /= n;
  sum /= n;
  u_plus /= n;
  v_minus /= n;
  v_plus /= n;
  CodiffCosum out;
  out.cd = std::log(diff) - std::log(u_plus) - std::log(v_minus);
  out.cs = std::log(sum) - std::log(u_plus) - std::log(v_plus);
  const double floor = 3.0 / std::sqrt(n);
  out.unreliable = std::abs(u_plus) < floor || std::abs(v_minus) < floor;
  return out;
}

// ---------------------------------------------------------------------------

TailFit tail_fit(std::span<const double> samples, const TailFitOptions& options) {
  std::vector<double> magnitudes(samples.size());
  std::transform(samples.begin(), samples.end(), magnitudes.begin(),
                 [](double x) { return std::abs(x); });
  if (magnitudes.empty()) throw DomainError("tail_fit: no samples");
  const double threshold = percentile(magnitudes, options.quantile);

  std::vector<double> positive;
  std::vector<double> negative;
  for (const double x : samples) {
    if (x > threshold) positive.push_back(x);
    if (x < -threshold) negative.push_back(-x);
  }
  TailFit fit;
  fit.tail_samples = positive.size() + negative.size();
  if (fit.tail_samples < options.min_tail_samples || !(threshold > 0.0)) {
    throw DomainError("tail_fit: insufficient data, " +
                      std::to_string(fit.tail_samples) + " tail samples (< " +
                      std::to_string(options.min_tail_samples) + ")");
  }
  const double top = std::max(
      positive.empty() ? 0.0 : *std::max_element(positive.begin(), positive.end()),
      negative.empty() ? 0.0 : *std::max_element(negative.begin(), negative.end()));
  const double step = std::log(10.0) / options.bins_per_decade;
  const auto bins = static_cast<std::size_t>(
      std::ceil(std::log(top / threshold) / step)) + 1;
  std::vector<double> n_pos(bins, 0.0), n_neg(bins, 0.0);
  auto bin_of = [&](double r) {
    const auto i = static_cast<std::size_t>(std::log(r / threshold) / step);
    return std::min(i, bins - 1);
  };
  for (const double r : positive) n_pos[bin_of(r)] += 1.0;
  for (const double r : negative) n_neg[bin_of(r)] += 1.0;

  const double total = static_cast<double>(samples.size());
  std::vector<double> log_r, log_density, weight;
  double skew_num = 0.0, skew_den = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    const double count = n_pos[i] + n_neg[i];
    if (count < static_cast<double>(options.min_bin_count)) continue;
    const double lo = threshold * std::exp(step * static_cast<double>(i));
    const double hi = lo * std::exp(step);
    // density of |x| split evenly into the two signed tails
    log_r.push_back(std::log(std::sqrt(lo * hi)));
    log_density.push_back(std::log(count / (2.0 * total * (hi - lo))));
    weight.push_back(count);
    skew_num += n_pos[i] - n_neg[i];
    skew_den += count;
    fit.r_hi = hi;
  }
  if (log_r.size() < 3) {
    throw DomainError("tail_fit: insufficient data, fewer than three "
                      "populated tail bins");
  }
  fit.exponent = fit_line(log_r, log_density, weight).slope;
  fit.skew_ratio = skew_num / skew_den;
  fit.r_lo = threshold;
  fit.bins_used = log_r.size();
  return fit;
}

// ---------------------------------------------------------------------------

std::vector<double> heavy_tail_edges(double core_lo, double core_hi,
                                     std::size_t core_bins,
                                     std::size_t tail_bins, double tail_reach) {
  if (!(core_hi > core_lo) || core_bins == 0) {
    throw DomainError("histogram: invalid core range");
  }
  const double center = 0.5 * (core_lo + core_hi);
  const double half = 0.5 * (core_hi - core_lo);
  std::vector<double> edges;
  for (std::size_t j = tail_bins; j >= 1; --j) {
    edges.push_back(center - half * std::pow(tail_reach, double(j) / double(tail_bins)));
  }
  for (std::size_t i = 0; i <= core_bins; ++i) {
    edges.push_back(core_lo + (core_hi - core_lo) * double(i) / double(core_bins));
  }
  for (std::size_t j = 1; j <= tail_bins; ++j) {
    edges.push_back(center + half * std::pow(tail_reach, double(j) / double(tail_bins)));
  }
  return edges;
}

double Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

namespace {

void renormalize(Histogram& hist) {
  const double in_range = hist.total();
  hist.density.assign(hist.bins(), 0.0);
  if (in_range <= 0.0) return;
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    hist.density[i] = hist.counts[i] / (in_range * hist.width(i));
  }
}

}  // namespace

void accumulate(Histogram& hist, std::span<const double> samples) {
  for (const double x : samples) {
    if (x < hist.edges.front()) {
      hist.below += 1.0;
    } else if (x >= hist.edges.back()) {
      hist.above += 1.0;
    } else {
      const auto it = std::upper_bound(hist.edges.begin(), hist.edges.end(), x);
      hist.counts[static_cast<std::size_t>(it - hist.edges.begin()) - 1] += 1.0;
    }
  }
  renormalize(hist);
}

Histogram histogram(std::span<const double> samples, std::vector<double> edges) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
    throw DomainError("histogram: edges must be sorted, at least two");
  }
  Histogram hist;
  hist.edges = std::move(edges);
  hist.counts.assign(hist.edges.size() - 1, 0.0);
  accumulate(hist, samples);
  return hist;
}

double l1_distance(const Histogram& a, const Histogram& b) {
  if (a.edges != b.edges) throw DomainError("l1_distance: edges differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.bins(); ++i) {
    sum += std::abs(a.density[i] - b.density[i]) * a.width(i);
  }
  return sum;
}

double l1_distance(const Histogram& hist, std::span<const double> bin_mass) {
  if (bin_mass.size() != hist.bins()) {
    throw DomainError("l1_distance: bin count mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    sum += std::abs(hist.density[i] * hist.width(i) - bin_mass[i]);
  }
  return sum;
}

double l1_distance(const Histogram& hist,
                   const std::function<double(double)>& pdf) {
  using Rule = boost::math::quadrature::gauss<double, 7>;
  std::vector<double> mass(hist.bins());
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    const double lo = hist.edges[i];
    const double hi = hist.edges[i + 1];
    const bool same_sign = lo * hi > 0.0;
    if (same_sign && std::max(std::abs(lo), std::abs(hi)) >
                         2.0 * std::min(std::abs(lo), std::abs(hi))) {
      // wide tail bin: integrate over log|x|
      const double s = lo > 0.0 ? 1.0 : -1.0;
      const double a = std::log(std::min(std::abs(lo), std::abs(hi)));
      const double b = std::log(std::max(std::abs(lo), std::abs(hi)));
      mass[i] = Rule::integrate(
          [&](double u) { return pdf(s * std::exp(u)) * std::exp(u); }, a, b);
    } else {
      mass[i] = Rule::integrate(pdf, lo, hi);
    }
  }
  return l1_distance(hist, mass);
}

}  // namespace camlevy::stats
