#pragma once

// Deterministic row-partitioned parallelism.  Grid loops hand each worker a
// contiguous block of rows (fixed v-index ranges), so results are identical
// for any worker count; WSURF_THREADS caps the pool (default: hardware
// concurrency).  Exceptions thrown inside workers are captured and rethrown
// in block order on the calling thread.

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace wsurf {

inline int thread_count() {
  static const int cached = [] {
    if (const char* s = std::getenv("WSURF_THREADS")) {
      try {
        const int v = std::stoi(s);
        if (v >= 1) return v;
      } catch (const std::exception&) {
      }
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
  }();
  return cached;
}

template <class Fn>
inline void parallel_rows(int n_rows, Fn&& fn) {
  const int workers = std::min(thread_count(), n_rows);
  if (workers <= 1 || n_rows < 8) {
    for (int j = 0; j < n_rows; ++j) fn(j);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const int j0 = static_cast<int>(static_cast<long long>(n_rows) * w / workers);
    const int j1 = static_cast<int>(static_cast<long long>(n_rows) * (w + 1) / workers);
    pool.emplace_back([&, w, j0, j1] {
      try {
        for (int j = j0; j < j1; ++j) fn(j);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace wsurf
