#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace bistatic {

// Runs fn(i) for i in [0, n) across up to n_threads workers (0 = hardware
// concurrency). Each index must write only its own output slot; results are
// then deterministic regardless of scheduling.
inline void parallel_for(size_t n, int n_threads,
                         const std::function<void(size_t)>& fn) {
  if (n == 0) return;
  size_t workers = n_threads > 0 ? static_cast<size_t>(n_threads)
                                 : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min(workers, n);
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace bistatic
