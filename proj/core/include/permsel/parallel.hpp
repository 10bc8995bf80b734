#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace permsel {

/// Runs body(i) for i in [0, count) over up to `threads` worker threads.
/// Each index is visited exactly once; bodies must write only to their own
/// output slot so the result is independent of the schedule. The first
/// exception (by thread index) is rethrown after all workers join.
inline void parallel_for(int count, int threads,
                         const std::function<void(int)>& body) {
  if (count <= 0) return;
  threads = std::clamp(threads, 1, count);
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }

  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  workers.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    const int begin = static_cast<int>(static_cast<long long>(count) * t / threads);
    const int end =
        static_cast<int>(static_cast<long long>(count) * (t + 1) / threads);
    workers.emplace_back([&, t, begin, end] {
      try {
        for (int i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace permsel
