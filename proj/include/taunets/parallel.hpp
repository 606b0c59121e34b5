#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace taunets {

// Worker count for grid sweeps: hardware concurrency capped by the
// TAUNETS_THREADS environment variable (>=1).
inline std::size_t worker_count() {
  std::size_t n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("TAUNETS_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<std::size_t>(cap) < n) n = static_cast<std::size_t>(cap);
  }
  if (n > 16) n = 16;
  return n;
}

// Runs body(i) for i in [0, n). Work is split into contiguous chunks so each
// index is touched exactly once; callers must write results into
// index-addressed slots, which keeps sweep output independent of scheduling.
// If several chunks throw, the exception from the lowest chunk wins.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers = worker_count();
  if (n == 0) return;
  if (workers == 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t chunks = workers < n ? workers : n;
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> threads;
  threads.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = n * c / chunks;
    const std::size_t hi = n * (c + 1) / chunks;
    threads.emplace_back([&, c, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace taunets
