#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fdde {

/// Number of worker threads used by the batch routines (>= 1).
inline unsigned worker_count() noexcept {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Runs fn(i) for i in [0, n) over contiguous chunks. Each index is visited
/// exactly once, so results written per index are independent of scheduling.
/// The exception thrown for the lowest chunk is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t min_chunk = 1) {
  if (n == 0) return;
  const std::size_t max_workers = std::max<std::size_t>(1, n / std::max<std::size_t>(min_chunk, 1));
  const std::size_t workers = std::min<std::size_t>(worker_count(), max_workers);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    threads.emplace_back([&, w, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace fdde
