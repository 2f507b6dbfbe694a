#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace ncflow {

/// Upper bound on worker threads used by parallel_for. Defaults to the
/// hardware concurrency.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Calls body(i) for i in [0, n) on up to thread_count() threads with a static
/// contiguous partition. Results must be written to per-index slots so the
/// outcome does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body)
{
  const std::size_t workers = std::min<std::size_t>(thread_count(), n / 8 + 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([begin, end, &body] {
      for (std::size_t i = begin; i < end; ++i)
        body(i);
    });
  }
}

} // namespace ncflow
