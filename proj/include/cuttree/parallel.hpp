#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cuttree {

// Evaluates fn(r) for r in [0, count) and returns the results in index order.
// Results do not depend on `workers`; workers <= 1 runs inline.
template <class T, class F>
std::vector<T> run_replicates(std::int64_t count, int workers, F&& fn) {
  std::vector<T> out(static_cast<std::size_t>(count));
  if (workers <= 1 || count < 2) {
    for (std::int64_t r = 0; r < count; ++r) out[r] = fn(r);
    return out;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::int64_t r = next++; r < count; r = next++) {
      try {
        out[r] = fn(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto threads = static_cast<int>(std::min<std::int64_t>(workers, count));
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace cuttree
