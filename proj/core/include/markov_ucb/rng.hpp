#pragma once

#include <cstdint>
#include <random>

namespace markov_ucb {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of stream `index` under `base_seed`. Distinct (base, index) pairs give
// decorrelated streams; the mapping is fixed so results replay exactly.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  return mix64(mix64(base_seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Uniform double in [0, 1) with 53 random bits. Unlike
// std::uniform_real_distribution the result does not depend on the
// standard library implementation.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace markov_ucb
