#pragma once

#include <cstdint>
#include <string>

namespace semipress {

// Diagnostic flags carried by result structs. A flagged result is still a
// result; callers (CLI) decide whether a flag is fatal.
enum class Flag : std::uint32_t {
  unresolved = 1u << 0,         // cloud resolution too coarse for the requested cell
  nonmonotone = 1u << 1,        // estimates disagree across the two finest scales
  zero_mass = 1u << 2,          // no sample landed in a Bowen ball
  warn_nonexpanding = 1u << 3,  // min log-factor <= 0 on the cloud
  cover_fail = 1u << 4,         // greedy cover could not cover the cloud
  proxy = 1u << 5,              // box-counting proxy, not a true Hausdorff value
  monte_carlo = 1u << 6,        // word average sampled, not exhaustive
  truncated = 1u << 7,          // horizon truncated by zero-mass cells
};

struct Flags {
  std::uint32_t bits = 0;

  void set(Flag f) { bits |= static_cast<std::uint32_t>(f); }
  bool has(Flag f) const { return (bits & static_cast<std::uint32_t>(f)) != 0; }
  bool any() const { return bits != 0; }
  void merge(const Flags& other) { bits |= other.bits; }

  std::string str() const {
    std::string out;
    auto add = [&](Flag f, const char* name) {
      if (has(f)) {
        if (!out.empty()) out += '|';
        out += name;
      }
    };
    add(Flag::unresolved, "UNRESOLVED");
    add(Flag::nonmonotone, "NONMONOTONE");
    add(Flag::zero_mass, "ZERO_MASS");
    add(Flag::warn_nonexpanding, "WARN_NONEXPANDING");
    add(Flag::cover_fail, "COVER_FAIL");
    add(Flag::proxy, "PROXY");
    add(Flag::monte_carlo, "MONTE_CARLO");
    add(Flag::truncated, "TRUNCATED");
    if (out.empty()) out = "OK";
    return out;
  }
};

}  // namespace semipress
