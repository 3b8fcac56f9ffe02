#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace kpunct {

inline unsigned worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Runs fn(begin, end) over disjoint chunks of [0, n).  Callers are expected
// to write to disjoint outputs only, so the result never depends on the
// number of workers.
inline void parallel_for(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& fn,
                         unsigned workers = worker_count()) {
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    fn(0, n);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * chunk;
    if (lo >= n) break;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& t : pool) t.join();
}

}  // namespace kpunct
