#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace trajscore {

/// Runs fn(i) for i in [0, n) across hardware threads. Work items are
/// claimed atomically, so results must not depend on execution order.
template <typename Fn>
void parallel_for(size_t n, Fn&& fn) {
  if (n == 0) return;
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 4;
  if (workers > n) workers = static_cast<unsigned>(n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace trajscore
