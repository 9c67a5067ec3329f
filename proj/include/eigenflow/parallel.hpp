#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace eigenflow {

/// Worker cap: EIGENFLOW_THREADS when set (>= 1), hardware concurrency
/// otherwise, never 0.
inline unsigned max_threads() {
  if (const char* env = std::getenv("EIGENFLOW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

/// fn(k) for k in [0, n), contiguous chunks over worker threads. fn must
/// only touch slot k of preallocated storage; reductions stay with the
/// caller, so results are independent of the worker count. Exceptions are
/// captured per worker and the lowest-chunk one is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
  const std::size_t workers = std::min<std::size_t>(max_threads(), n);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::exception_ptr> errs(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t beg = w * chunk;
      const std::size_t end = std::min(n, beg + chunk);
      try {
        for (std::size_t k = beg; k < end; ++k) fn(k);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace eigenflow
