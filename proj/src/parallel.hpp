// Copyright 2026 The rmap Authors
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

#ifndef RMAP_SRC_PARALLEL_HPP_
#define RMAP_SRC_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rmap::internal {

// Runs work(acc, begin, end) over [0, count) in fixed-size chunks claimed from
// a shared counter, one accumulator per worker, then folds the accumulators
// with +=. The result is independent of the thread count as long as += is
// associative and commutative and work() depends only on the indices.
template <class Acc, class MakeAcc, class Work>
Acc ParallelReduce(std::uint64_t count, unsigned threads, MakeAcc make_acc,
                   Work work, std::uint64_t chunk = 256) {
  threads = std::max(1u, threads);
  if (threads == 1 || count <= chunk) {
    Acc acc = make_acc();
    if (count > 0) work(acc, std::uint64_t{0}, count);
    return acc;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<Acc> partial;
  partial.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) partial.push_back(make_acc());
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (;;) {
          const std::uint64_t begin = next.fetch_add(chunk);
          if (begin >= count) break;
          work(partial[w], begin, std::min(count, begin + chunk));
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (failure) std::rethrow_exception(failure);
  Acc acc = make_acc();
  for (const auto& p : partial) acc += p;
  return acc;
}

inline unsigned DefaultThreads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace rmap::internal

#endif  // RMAP_SRC_PARALLEL_HPP_
