#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace derand {

inline int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for every i in [0, count). Each index must touch only its own
/// output slots; with that, results do not depend on thread count or order.
template <class Fn>
void parallel_for(std::uint64_t count, int threads, Fn&& fn) {
  int nthreads = resolve_threads(threads);
  if (nthreads <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::uint64_t chunk = count / static_cast<std::uint64_t>(nthreads * 8);
  if (chunk == 0) chunk = 1;
  auto worker = [&] {
    for (;;) {
      std::uint64_t start = next.fetch_add(chunk);
      if (start >= count || failed.load()) return;
      std::uint64_t end = start + chunk < count ? start + chunk : count;
      try {
        for (std::uint64_t i = start; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace derand
