#pragma once

#include <boost/random/normal_distribution.hpp>
#include <cstdint>
#include <random>

namespace camlevy {

/// One independent random stream, identified by (master_seed, index).
///
/// Streams are derived by feeding the four 32-bit halves of the master seed
/// and the stream index through std::seed_seq into a 64-bit Mersenne
/// Twister. Every trajectory, realization or repeat in the toolkit owns its
/// own index, so results do not depend on how work is scheduled on threads.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t index);

  /// Uniform on the open interval (0, 1): the top 53 bits of one engine
  /// output, offset by half a unit in the last place.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  /// Standard normal (ziggurat).
  double normal() { return normal_(engine_); }
  /// Exponential with unit mean, strictly positive.
  double exponential();

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t index() const { return index_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace camlevy
