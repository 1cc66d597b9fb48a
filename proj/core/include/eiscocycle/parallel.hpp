#pragma once

// Deterministic parallel helpers.  Work is cut into chunks whose boundaries
// depend only on the problem size, and partial results are combined by a
// fixed pairwise tree, so the floating-point result does not depend on the
// number of worker threads.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "eiscocycle/numeric.hpp"

namespace eisc {

inline unsigned default_workers() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Calls body(chunk_index) for every chunk in [0, chunks) on up to `workers`
// threads, each running at the caller's working precision.  The first
// exception thrown by any chunk is rethrown.
template <class Body>
void parallel_for_chunks(std::size_t chunks, unsigned workers, Body&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const int precision = working_precision();
  auto run = [&] {
    PrecisionScope scope(precision);
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = chunks;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Pairwise tree sum of values[lo, hi) with a fixed association order.
template <class T>
T tree_sum(const std::vector<T>& values, std::size_t lo, std::size_t hi, const T& zero) {
  if (hi <= lo) return zero;
  if (hi - lo == 1) return values[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return tree_sum(values, lo, mid, zero) + tree_sum(values, mid, hi, zero);
}

}  // namespace eisc
