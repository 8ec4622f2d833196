#pragma once

#include <cstdint>

namespace semipress {

// Counter-based generator (splitmix64 finalizer). Every draw is a pure
// function of (seed, counters), so parallel workers can open disjoint,
// reproducible streams without shared state.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(seed ^ 0xA0761D6478BD642FULL);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return splitmix64(h ^ c);
}

// Uniform in [0,1) from a 64-bit draw.
inline double to_unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return to_unit_double(splitmix64(seed + 0x9E3779B97F4A7C15ULL * (counter + 1)));
}

// Unbiased-enough bounded draw via the multiply-high trick (m <= 16 here,
// so the modulo bias of a plain % would already be ~2^-60; this avoids it).
inline std::uint32_t bounded(std::uint64_t bits, std::uint32_t m) {
  return static_cast<std::uint32_t>((static_cast<unsigned __int128>(bits) * m) >> 64);
}

struct SplitMix {
  std::uint64_t state;
  explicit SplitMix(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() { return splitmix64(state++); }
  double next_double() { return to_unit_double(next()); }
};

}  // namespace semipress
