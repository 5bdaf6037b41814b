// Copyright 2026 The Curate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace curate {

// Computes compute(i) for i in [0, n) on `workers` threads and hands each
// result to commit(i, result) on the calling thread in ascending i, as soon
// as the prefix is ready. Output order is therefore independent of
// scheduling. The first exception from compute is rethrown after all
// workers have stopped; commit is never called past the failing index.
template <class Compute, class Commit>
void ordered_parallel_for(std::size_t n, int workers, Compute compute, Commit commit) {
  using Result = decltype(compute(std::size_t{0}));
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) commit(i, compute(i));
    return;
  }

  std::vector<std::optional<Result>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::vector<char> done(n, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::condition_variable cv;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || stop.load()) return;
      std::optional<Result> r;
      std::exception_ptr err;
      try {
        r.emplace(compute(i));
      } catch (...) {
        err = std::current_exception();
      }
      {
        std::lock_guard lock(mu);
        slots[i] = std::move(r);
        errors[i] = err;
        done[i] = 1;
      }
      cv.notify_all();
    }
  };

  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::vector<std::thread> threads;
  threads.reserve(count);
  for (std::size_t t = 0; t < count; ++t) threads.emplace_back(worker);

  std::exception_ptr failure;
  for (std::size_t i = 0; i < n && !failure; ++i) {
    std::optional<Result> r;
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return done[i] != 0; });
      if (errors[i]) {
        failure = errors[i];
        break;
      }
      r = std::move(slots[i]);
      slots[i].reset();
    }
    try {
      commit(i, std::move(*r));
    } catch (...) {
      failure = std::current_exception();
    }
  }
  stop.store(true);
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace curate
