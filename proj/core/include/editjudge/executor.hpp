// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace editjudge {

/// Runs `fn(i)` for i in [0, count) on at most `concurrency` threads. Work is
/// handed out in index order from a shared counter, so no more than
/// `concurrency` calls are ever in flight. Exceptions do not stop the batch;
/// the i-th slot of the result holds the exception thrown by `fn(i)`, if any.
inline std::vector<std::exception_ptr> run_bounded(std::size_t count, int concurrency,
                                                   const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  const auto workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, concurrency)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
    return errors;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return errors;
}

}  // namespace editjudge
