#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Randomness helpers. All draws go through std::mt19937_64 but the
// mapping from engine output to values is written out here instead of
// using std::*_distribution, whose algorithms are implementation-defined.
// This keeps every simulation byte-reproducible from its seed.

namespace multibandit {

using Rng = std::mt19937_64;

// splitmix64 finalizer; good avalanche for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic substream seed for work item (a, b) under a root seed.
// Used to give every (repetition, policy) pair its own engine.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a,
                                 std::uint64_t b) {
  std::uint64_t h = mix64(root);
  h = mix64(h ^ (a + 0x9E3779B97F4A7C15ULL));
  h = mix64(h ^ (b + 0xD1B54A32D192ED03ULL));
  return h;
}

// Uniform double in [0, 1), 53 bits of precision. One engine output.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform index in [0, n). Multiply-high mapping: exactly one engine
// output per call; bias is below 2^-50 for any n this library uses.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  using u128 = unsigned __int128;
  return static_cast<std::size_t>((static_cast<u128>(rng()) * n) >> 64);
}

inline bool bernoulli_draw(Rng& rng, double p) {
  return uniform_unit(rng) < p;
}

// Box-Muller, cosine branch only. Exactly two engine outputs per call.
inline double gaussian_draw(Rng& rng, double mean, double stddev) {
  // (0, 1] so the log is finite.
  const double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform_unit(rng);
  const double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * 3.14159265358979323846 * u2);
  return mean + z * stddev;
}

}  // namespace multibandit
