#pragma once
// Seeded randomness helpers.
//
// Every stochastic estimate in the library is a pure function of
// (seed, sample count, worker count).  Workers draw from independent
// substreams whose seeds are derived with a splitmix64 step, so the
// same master seed reproduces the same tallies on any platform.

#include <cstdint>
#include <random>

namespace eprb {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for the index-th derived stream of a master seed.  Distinct indices
// give decorrelated generators; index 0 is already distinct from the master.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// Uniform double in [0, 1) built from the top 53 bits, identical on every
// conforming platform (std::uniform_real_distribution is not portable).
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int uniform_sign(Rng& rng) { return (rng() & 1u) ? +1 : -1; }

}  // namespace eprb
