#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "avseld/errors.hpp"

namespace avseld {

// Worker count from AVSELD_WORKERS, defaulting to 1. Results never depend on
// this value; it only spreads independent clips across threads.
inline int worker_count_from_env() {
  const char* env = std::getenv("AVSELD_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || v < 1 || v > 1024) {
    throw validation_error(std::string("AVSELD_WORKERS must be an integer in [1, 1024], got '") +
                           env + "'");
  }
  return static_cast<int>(v);
}

// Runs fn(i) for i in [0, count) on up to `workers` threads. Each index runs
// exactly once; the first exception wins and is rethrown on the caller after
// all threads join.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  if (workers < 1) throw validation_error("worker count must be at least 1");
  if (count == 0) return;
  if (workers == 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(body);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace avseld
