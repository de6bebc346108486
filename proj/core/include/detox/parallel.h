// Copyright 2026 The Detox Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DETOX_PARALLEL_H_
#define DETOX_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace detox {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work is handed out in
// index order; callers write results into slot i so output order never
// depends on scheduling. After a throw no new work starts, and the exception
// from the lowest failing index is rethrown once all workers stop.
template <typename Fn>
void parallel_for(size_t n, size_t jobs, Fn&& fn) {
  jobs = std::max<size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  size_t failed_at = n;
  std::exception_ptr failure;
  auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
        stop = true;
      }
    }
  };
  {
    std::vector<std::jthread> threads;
    threads.reserve(jobs);
    for (size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detox

#endif  // DETOX_PARALLEL_H_
