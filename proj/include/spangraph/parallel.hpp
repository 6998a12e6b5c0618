// Copyright 2026 The SpanGraph Authors.
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace spangraph {

/// Worker count: hardware concurrency, capped by SPANGRAPH_THREADS when set.
inline std::size_t max_threads() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPANGRAPH_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    } catch (...) {
      // unparsable value: ignore the cap
    }
  }
  return n;
}

/// Runs fn(begin, end) over contiguous row blocks. Each row is handled by
/// exactly one worker, so per-row results do not depend on the thread count.
template <typename Fn>
void parallel_rows(std::size_t rows, std::size_t work_per_row, Fn&& fn) {
  constexpr std::size_t kMinWork = std::size_t{1} << 16;
  const std::size_t threads = max_threads();
  if (threads <= 1 || rows < 2 || rows * std::max<std::size_t>(work_per_row, 1) < kMinWork) {
    fn(std::size_t{0}, rows);
    return;
  }
  const std::size_t workers = std::min(threads, rows);
  const std::size_t chunk = (rows + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(rows, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace spangraph
