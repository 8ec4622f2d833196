#pragma once

#include <cstdint>

namespace semipress::detail {

// Largest t in [0, max_extent] such that pred holds at every step 1..t from c
// in direction dir. pred must be monotone along the direction (true prefix,
// then false); galloping doubles the step, then bisects the bracket.
template <typename Pred>
std::int64_t gallop_extent(std::int64_t c, int dir, std::int64_t max_extent,
                           const Pred& pred) {
  if (max_extent <= 0) return 0;
  std::int64_t lo = 0;
  std::int64_t step = 1;
  std::int64_t hi_false = -1;
  while (true) {
    const std::int64_t t = lo + step;
    if (t > max_extent) break;
    if (pred(c + dir * t)) {
      lo = t;
      step <<= 1;
    } else {
      hi_false = t;
      break;
    }
  }
  if (hi_false < 0) {
    std::int64_t hi = max_extent + 1;
    while (lo + 1 < hi) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (pred(c + dir * mid)) lo = mid;
      else hi = mid;
    }
    return lo;
  }
  while (lo + 1 < hi_false) {
    const std::int64_t mid = lo + (hi_false - lo) / 2;
    if (pred(c + dir * mid)) lo = mid;
    else hi_false = mid;
  }
  return lo;
}

}  // namespace semipress::detail
