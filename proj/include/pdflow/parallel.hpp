#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pdflow {

/// Worker count used when a caller passes 0.
inline unsigned default_workers() noexcept {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Runs body(begin, end) over a static partition of [0, count) into at most
/// `workers` contiguous chunks. The partition depends only on (count, workers);
/// callers that write results by index therefore get identical output for any
/// worker count. The first exception thrown by a chunk is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  if (workers == 0) workers = default_workers();
  const std::size_t chunks = std::min<std::size_t>(workers, count);
  if (chunks <= 1) {
    if (count > 0) body(std::size_t{0}, count);
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve(chunks - 1);
  const auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = count * c / chunks;
    const std::size_t end = count * (c + 1) / chunks;
    try {
      body(begin, end);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  for (std::size_t c = 1; c < chunks; ++c) threads.emplace_back(run_chunk, c);
  run_chunk(0);
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Exclusive prefix sum; returns the total.
template <typename T>
T exclusive_scan_inplace(std::vector<T>& values) {
  T running{};
  for (T& v : values) {
    const T current = v;
    v = running;
    running += current;
  }
  return running;
}

/// Sorts `data` with a chunked parallel merge sort. The comparator must be a
/// strict weak order; elements that compare equal may end up in any relative
/// order, so callers that need determinism should use a total order.
template <typename T, typename Less>
void parallel_sort(std::vector<T>& data, unsigned workers, Less less, std::size_t sequential_below = 100000) {
  if (workers == 0) workers = default_workers();
  if (workers <= 1 || data.size() < sequential_below) {
    std::sort(data.begin(), data.end(), less);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(workers, data.size());
  std::vector<std::size_t> bounds(chunks + 1);
  for (std::size_t c = 0; c <= chunks; ++c) bounds[c] = data.size() * c / chunks;

  parallel_for(chunks, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c)
      std::sort(data.begin() + bounds[c], data.begin() + bounds[c + 1], less);
  });

  // Pairwise merge rounds; each round merges disjoint neighbouring runs.
  for (std::size_t width = 1; width < chunks; width *= 2) {
    std::vector<std::size_t> starts;
    for (std::size_t c = 0; c + width < chunks; c += 2 * width) starts.push_back(c);
    parallel_for(starts.size(), workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t c = starts[i];
        const std::size_t hi = std::min(c + 2 * width, chunks);
        std::inplace_merge(data.begin() + bounds[c], data.begin() + bounds[c + width],
                           data.begin() + bounds[hi], less);
      }
    });
  }
}

}  // namespace pdflow
