#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Reproducible random helpers. std::uniform_real_distribution and friends are
// implementation-defined, so everything that must be bit-stable across
// platforms draws raw mt19937_64 words and maps them explicitly.

namespace avseld {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a base seed and a stream index.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t s = base ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  return splitmix64(s);
}

// Uniform double in [0, 1), 53 mantissa bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Integer in [lo, hi] inclusive. Modulo bias is irrelevant for test-scale ranges.
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Beta(1/2, 1/2) sample via the arcsine identity: sin^2(pi u / 2), u ~ U[0,1).
inline double sample_beta_half(std::mt19937_64& rng) {
  const double u = uniform_unit(rng);
  const double s = std::sin(1.57079632679489661923 * u);
  return s * s;
}

}  // namespace avseld
