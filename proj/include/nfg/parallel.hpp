#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nfg {

/// Caps the number of worker threads library routines may use; 0 restores
/// the default (hardware concurrency).
void set_thread_limit(unsigned limit);
unsigned thread_limit();

/// Calls body(begin, end) over a partition of [0, n) into contiguous chunks.
/// Chunks are disjoint, so bodies that write only to their own indices give
/// results independent of the thread count. Runs inline when n is below
/// `min_parallel` or only one thread is allowed.
template <class Body>
void parallel_for(std::size_t n, std::size_t min_parallel, Body&& body) {
  const std::size_t threads =
      std::min<std::size_t>(thread_limit(), n / std::max<std::size_t>(min_parallel, 1));
  if (threads <= 1) {
    if (n > 0) body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace nfg
