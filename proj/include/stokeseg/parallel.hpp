// Deterministic cell-parallel loops.
//
// Work is split into contiguous index ranges and every iteration writes only
// to its own preallocated slot, so results are bit-identical for any worker
// count. STOKESEG_THREADS caps the number of workers (default: hardware
// concurrency).
#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace stokeseg {

inline int thread_cap() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("STOKESEG_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < hw) hw = cap;
  }
  return hw;
}

template <class Fn>
void parallel_for(int n, Fn&& fn) {
  const int workers = std::min(thread_cap(), n > 0 ? n : 1);
  if (workers <= 1 || n < 256) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace stokeseg
