#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace bitbound {

/// Worker count for grid sweeps: BITBOUND_WORKERS when set, otherwise the
/// hardware concurrency, clamped to [1, 64].
inline unsigned worker_count() {
  if (const char* env = std::getenv("BITBOUND_WORKERS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 64) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : (hw > 64 ? 64 : hw);
}

/// Runs f(i) for i in [0, n) across the worker pool. Exceptions in workers
/// propagate as std::terminate; keep f total.
template <typename F>
inline void parallel_for(std::uint64_t n, F&& f) {
  unsigned workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers && w < n; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::uint64_t i = next.fetch_add(1);
        if (i >= n) return;
        f(i);
      }
    });
  for (auto& th : pool) th.join();
}

}  // namespace bitbound
