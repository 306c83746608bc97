#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace camlevy {

/// A uniformly sampled time series plus everything needed to replay it.
struct Trajectory {
  std::string model;  ///< "cam", "oulp", "full:<system>", "reduced:<system>"
  double t0 = 0.0;
  double dt = 0.0;  ///< spacing between stored values
  std::vector<double> values;

  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
  /// Model parameters and integrator settings, in insertion order.
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::string> warnings;
  /// Set when the run stopped early (blow-up guard, domain exit).
  bool truncated = false;

  double time(std::size_t n) const { return t0 + dt * static_cast<double>(n); }
};

}  // namespace camlevy
