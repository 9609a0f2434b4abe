#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace lol {

// All randomness flows through mt19937_64. Per-trial substreams are derived
// as seed ^ trial index; the engine's initialization scrambles nearby seeds.
using Rng = std::mt19937_64;

inline Rng trial_rng(uint64_t seed, uint64_t trial) { return Rng(seed ^ trial); }

// Unbiased integer in [0, n) via rejection.
inline uint64_t rng_below(Rng& rng, uint64_t n) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do { x = rng(); } while (x >= limit);
  return x % n;
}

// Uniform double in [0, 1) with 53 random bits; identical across platforms.
inline double rng_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int rng_int(Rng& rng, int n) { return static_cast<int>(rng_below(rng, static_cast<uint64_t>(n))); }

// m distinct values from [0, n), ascending (partial Fisher-Yates).
inline std::vector<int> rng_distinct(Rng& rng, int n, int m) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < m; ++i) {
    int j = i + rng_int(rng, n - i);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(m));
  std::sort(pool.begin(), pool.end());
  return pool;
}

struct Rational {
  long num = 0;
  long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Rational parse_rational(const std::string& text);

}  // namespace lol
