#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ancova::detail {

/// Runs fn(begin, end) over a static partition of [0, n). threads == 0 picks
/// the hardware concurrency. The partition depends only on (n, threads), so
/// workers writing to disjoint per-index slots produce results independent of
/// scheduling. The first exception thrown by any worker is rethrown.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  unsigned want = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (want == 0) want = 1;
  const std::size_t workers = std::min<std::size_t>(want, n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, &errors, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace ancova::detail
