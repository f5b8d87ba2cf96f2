#include "specdte/random.hpp"

#include <limits>

namespace specdte {

std::mt19937_64 substream(std::uint64_t root_seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(root_seed),
                    static_cast<std::uint32_t>(root_seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32), 0x5eedu};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

}  // namespace specdte
