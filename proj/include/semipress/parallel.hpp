#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace semipress {

// Runs fn(i) for i in [0, n). Tasks must write only to their own slot of a
// pre-sized output; the caller reduces sequentially afterwards, so results
// are identical for any thread count.
inline void parallel_for(std::int64_t n, int threads,
                         const std::function<void(std::int64_t)>& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  int t = threads;
  if (static_cast<std::int64_t>(t) > n) t = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int k = 0; k < t; ++k) {
    std::int64_t lo = n * k / t;
    std::int64_t hi = n * (k + 1) / t;
    pool.emplace_back([lo, hi, &fn] {
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline int default_thread_count() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace semipress
