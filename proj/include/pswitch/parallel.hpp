#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace pswitch {

// Worker pool size: hardware concurrency, optionally capped by the
// PHOTON_SWITCH_THREADS environment variable (re-read on every call so tests
// can change it at runtime).
inline int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("PHOTON_SWITCH_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1 && cap < n) n = cap;
      if (cap >= 1 && cap > n) n = cap;  // allow oversubscription if asked
    } catch (...) {
      // ignore unparsable values
    }
  }
  return n;
}

// Runs fn(i) for i in [0, n) across the worker pool with dynamic scheduling.
// fn must only write to locations addressed by its own index; the first
// exception thrown by any worker is rethrown on the caller thread.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int workers = worker_count();
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> pool;
  const int spawned = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers), n)) - 1;
  pool.reserve(static_cast<std::size_t>(spawned));
  for (int w = 0; w < spawned; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace pswitch
