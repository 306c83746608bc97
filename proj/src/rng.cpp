#include "camlevy/rng.hpp"

#include <cmath>

namespace camlevy {

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t index)
    : master_seed_(master_seed), index_(index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  engine_.seed(seq);
}

double RngStream::exponential() { return -std::log(uniform()); }

}  // namespace camlevy
