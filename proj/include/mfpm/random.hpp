#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mfpm {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent child seed from a root seed and a path of tags.
/// Used to split deterministic streams (per repetition, per policy, per step).
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(root);
  for (auto tag : path) h = mix64(h ^ mix64(tag + 0x632be59bd9b4e019ULL));
  return h;
}

/// Uniform on [0, 1) with 53 bits of resolution.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform on (0, 1].
inline double uniform_left_open(Rng& rng) { return 1.0 - uniform01(rng); }

/// Uniform on (0, 1), never exactly 0.
inline double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Stateless uniform on [0, 1) keyed by (seed, key).
constexpr double hash_unit(std::uint64_t seed, std::uint64_t key) {
  return static_cast<double>(mix64(seed ^ mix64(key)) >> 11) * 0x1.0p-53;
}

}  // namespace mfpm
