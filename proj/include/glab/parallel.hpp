#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace glab {

inline constexpr const char* kWorkersEnv = "GROUPOID_LAB_WORKERS";

/// Worker count from GROUPOID_LAB_WORKERS; 1 when unset or malformed.
inline std::size_t worker_count() {
  const char* raw = std::getenv(kWorkersEnv);
  if (raw == nullptr) return 1;
  try {
    long value = std::stol(raw);
    return value >= 1 ? static_cast<std::size_t>(value) : 1;
  } catch (...) {
    return 1;
  }
}

/// Runs body(i) for every i in [0, count), spread over worker_count() threads.
/// Callers write into per-index slots and merge afterwards, so results never
/// depend on scheduling.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::size_t i = next++; i < count; i = next++) body(i);
        } catch (...) {
          std::lock_guard guard(failure_lock);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace glab
