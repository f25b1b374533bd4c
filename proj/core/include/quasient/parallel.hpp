#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace quasient {

/// Runs fn(0..nitems) across up to `threads` workers. Each item writes only
/// its own output slot, so results are identical in serial and parallel runs.
/// threads <= 1 runs inline; threads == 0 uses the hardware concurrency.
inline void parallel_for(int nitems, int threads, const std::function<void(int)>& fn) {
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || nitems <= 1) {
    for (int i = 0; i < nitems; ++i) fn(i);
    return;
  }
  threads = std::min(threads, nitems);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= nitems) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace quasient
