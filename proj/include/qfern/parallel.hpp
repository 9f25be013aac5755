#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace qfern {

// Number of worker threads: QFERN_THREADS caps it, hardware_concurrency is
// the default. Always at least 1.
inline std::size_t thread_budget() {
  std::size_t n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("QFERN_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    n = v >= 1 ? static_cast<std::size_t>(v) : 1;
  }
  return n;
}

// Runs fn(begin, end) over contiguous chunks of [0, count). Results must be
// written to disjoint slots so the outcome is order-independent.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  std::size_t workers = std::min(thread_budget(), count);
  if (workers <= 1) {
    fn(0, count);
    return;
  }
  std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) {
    std::size_t begin = w * chunk;
    if (begin >= count) break;
    std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back(fn, begin, end);
  }
  fn(0, std::min(count, chunk));
  for (auto& t : pool) t.join();
}

}  // namespace qfern
