#pragma once

// Deterministic parallel map. Every index writes its own output slot, so the
// result never depends on how indices were scheduled.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "ngstate/errors.hpp"

namespace ngstate {

/// 0 means: NGSTATE_THREADS if set, otherwise the hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NGSTATE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    throw invalid_config(std::string("NGSTATE_THREADS is not a positive integer: ") + env);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Indices are
/// dealt round-robin. If several calls throw, the exception of the lowest
/// index is rethrown after all workers have joined.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_index(workers, count);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < count; i += workers) {
          try {
            fn(i);
          } catch (...) {
            errors[t] = std::current_exception();
            error_index[t] = i;
            return;
          }
        }
      });
    }
  }
  std::size_t first = count;
  std::exception_ptr pending;
  for (unsigned t = 0; t < workers; ++t) {
    if (errors[t] && error_index[t] < first) {
      first = error_index[t];
      pending = errors[t];
    }
  }
  if (pending) std::rethrow_exception(pending);
}

template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, unsigned threads, Fn&& fn) {
  std::vector<T> out(count);
  parallel_for(count, threads, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace ngstate
