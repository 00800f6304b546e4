#pragma once

#include <cmath>
#include <cstdint>

namespace sns {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Hash of an ordered key tuple.
constexpr std::uint64_t hash_key(std::uint64_t a, std::uint64_t b) { return mix64(mix64(a) ^ (b + 0x632be59bd9b4e019ULL)); }
constexpr std::uint64_t hash_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) { return hash_key(hash_key(a, b), c); }
constexpr std::uint64_t hash_key(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return hash_key(hash_key(a, b, c), d);
}

/// Seed of the i-th Monte Carlo job derived from a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t job) { return hash_key(base_seed, job, 0x5eedULL); }

/// Uniform double in (0, 1) from 53 random bits of a key.
inline double uniform_open(std::uint64_t key) {
  return (static_cast<double>(mix64(key) >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal variate addressed by key (Box-Muller on two derived uniforms).
/// The same key always yields the same value, whatever order keys are drawn in.
inline double counter_normal(std::uint64_t key) {
  const double u1 = uniform_open(hash_key(key, 1));
  const double u2 = uniform_open(hash_key(key, 2));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace sns
