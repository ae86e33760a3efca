#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lralp {

/// Process-wide cap on worker threads (0 = hardware concurrency).
void set_max_threads(int n);
int max_threads();

/**
 * Runs body(begin, end) over fixed-size chunks of [0, n), possibly on several
 * threads. Chunk boundaries depend only on n and chunk_size, never on the
 * thread count, so any state written per-index is identical to a sequential
 * run. The first exception thrown by a chunk is rethrown on the caller.
 */
template <typename Body>
void parallel_chunks(int n, int chunk_size, Body&& body) {
  if (n <= 0) return;
  const int threads = std::min(max_threads(), (n + chunk_size - 1) / chunk_size);
  if (threads <= 1) {
    for (int begin = 0; begin < n; begin += chunk_size)
      body(begin, std::min(begin + chunk_size, n));
    return;
  }
  std::vector<std::thread> pool;
  std::mutex mutex;
  std::exception_ptr failure;
  int next = 0;
  auto worker = [&] {
    for (;;) {
      int begin;
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (next >= n || failure) return;
        begin = next;
        next += chunk_size;
      }
      try {
        body(begin, std::min(begin + chunk_size, n));
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& thread : pool) thread.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace lralp
