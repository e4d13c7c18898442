// Copyright 2026 The ladder360 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LADDER360_INTERNAL_PARALLEL_HPP
#define LADDER360_INTERNAL_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace ladder360::internal {

// Runs fn(begin, end) over contiguous chunks of [0, n) on up to
// hardware_concurrency threads. Rethrows the first exception.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  const int workers = std::clamp(
      static_cast<int>(std::thread::hardware_concurrency()), 1, 16);
  if (n < 64 || workers == 1) {
    fn(0, n);
    return;
  }
  const int chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace ladder360::internal

#endif  // LADDER360_INTERNAL_PARALLEL_HPP
