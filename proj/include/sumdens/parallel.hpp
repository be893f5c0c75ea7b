#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sumdens {

/// Runs body(begin, end) over [0, count) in chunks of `block`. Chunks are
/// claimed dynamically, so callers must write results by index only.
template <class Body>
void parallel_for(std::int64_t count, std::int64_t block, int workers, Body&& body) {
  if (count <= 0) return;
  block = std::max<std::int64_t>(block, 1);
  const std::int64_t chunks = (count + block - 1) / block;
  const int nthreads = static_cast<int>(std::min<std::int64_t>(std::max(workers, 1), chunks));
  auto run_chunk = [&](std::int64_t c) {
    const std::int64_t b = c * block;
    body(b, std::min(count, b + block));
  };
  if (nthreads == 1) {
    for (std::int64_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::int64_t c = next++; c < chunks; c = next++) run_chunk(c);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = chunks;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace sumdens
