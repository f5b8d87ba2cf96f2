#pragma once

#include <cstdint>
#include <random>

namespace specdte {

/// Deterministic per-task stream: the same (root, index) always yields the
/// same generator state, independent of scheduling.
std::mt19937_64 substream(std::uint64_t root_seed, std::uint64_t index);

/// Uniform draw in [0,1) from 53 random bits (portable across standard libraries).
double uniform01(std::mt19937_64& rng);

/// Unbiased uniform integer in [0, bound).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace specdte
