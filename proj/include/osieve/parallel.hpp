#pragma once

// Range decomposition over disjoint chunks with a deterministic, ordered merge.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace osieve {

/// Knobs shared by every range scan.
struct ScanOptions {
  /// Values per segment (bitmap length). Also the single-segment cap.
  std::size_t segment_size = std::size_t{1} << 22;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 1;
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Splits [lo, hi] into consecutive chunks of at most `chunk` values and
/// evaluates fn(chunk_lo, chunk_hi) for each, possibly concurrently.
/// Results come back in ascending chunk order regardless of scheduling.
/// The first exception thrown by any worker is rethrown on the caller.
template <class Fn>
auto map_chunks(std::uint64_t lo, std::uint64_t hi, std::uint64_t chunk, unsigned threads, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::uint64_t, std::uint64_t>> {
  using Result = std::invoke_result_t<Fn&, std::uint64_t, std::uint64_t>;
  std::vector<Result> results;
  if (lo > hi) return results;
  chunk = std::max<std::uint64_t>(chunk, 1);
  const std::uint64_t count = (hi - lo) / chunk + 1;
  results.resize(count);

  auto bounds = [&](std::uint64_t i) {
    const std::uint64_t a = lo + i * chunk;
    const std::uint64_t b = (hi - a < chunk - 1) ? hi : a + chunk - 1;
    return std::pair{a, b};
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), count));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) {
      auto [a, b] = bounds(i);
      results[i] = fn(a, b);
    }
    return results;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        auto [a, b] = bounds(i);
        results[i] = fn(a, b);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace osieve
