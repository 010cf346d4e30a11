#pragma once

#include <cstdint>
#include <random>

namespace quiclearn {

// mt19937_64 output is pinned by the standard, but the std distributions are
// not, so seeds would not reproduce across standard libraries. These two
// draws are the only randomness primitives used anywhere in the project.

// Unbiased integer in [0, n), n >= 1, via rejection sampling.
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = g();
  } while (x >= limit);
  return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// SplitMix64 of (seed, salt). Components that own a generator seed it through
// this with their own salt, so handing one user seed to several of them still
// yields decorrelated streams. Two mt19937_64 seeded with the same raw value
// emit the *same* sequence, and consuming such twins in near-lockstep (say,
// one picking probe words while the other decides packet noise) synchronizes
// supposedly independent events badly enough to distort observed frequencies.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + salt * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace quiclearn
