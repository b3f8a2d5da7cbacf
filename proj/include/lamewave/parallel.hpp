#pragma once

// Static-partition parallel loop over independent indices. Each index is
// evaluated exactly once by one thread, so results never depend on the
// schedule.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lamewave {

/// Thread budget: LAMEWAVE_THREADS if set to a positive integer, otherwise
/// the hardware concurrency.
inline int default_threads() {
  if (const char* env = std::getenv("LAMEWAVE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, n). The first exception (lowest index) is
/// rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t n, F&& fn, int threads = 0) {
  if (threads <= 0) threads = default_threads();
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::size_t bad_index = n;
  std::exception_ptr bad;
  auto worker = [&](std::size_t t) {
    for (std::size_t i = t; i < n; i += nt) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < bad_index) {
          bad_index = i;
          bad = std::current_exception();
        }
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker, t);
  for (auto& th : pool) th.join();
  if (bad) std::rethrow_exception(bad);
}

}  // namespace lamewave
