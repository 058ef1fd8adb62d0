#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace cuttree {

using Rng = std::mt19937_64;

// Independent substream for (master seed, path...). The path usually is
// (experiment tag, n index, replicate index); results never depend on which
// worker ran the replicate.
inline Rng substream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * path.size());
  words.push_back(static_cast<std::uint32_t>(master_seed));
  words.push_back(static_cast<std::uint32_t>(master_seed >> 32));
  for (auto p : path) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [lo, hi].
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> dist(lo, hi);
  return dist(rng);
}

inline double exponential(Rng& rng, double mean) { return -mean * std::log1p(-uniform01(rng)); }

}  // namespace cuttree
