// Copyright 2026 The dsttomo Authors
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
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dsttomo {

/// Block length of the deterministic reduction. Part of the reproducibility
/// contract: changing it changes the low bits of every Monte Carlo mean.
inline constexpr std::size_t kReduceBlock = 1024;

/// Pairwise sum of `values[first, last)`.
template <typename Acc>
Acc pairwise_sum(const std::vector<Acc>& values, std::size_t first, std::size_t last) {
  if (last - first == 1) return values[first];
  const std::size_t mid = first + (last - first) / 2;
  return pairwise_sum(values, first, mid) + pairwise_sum(values, mid, last);
}

/// Sum of f(i) for i in [0, n). Each block of kReduceBlock indices is summed
/// in index order, then block sums are combined pairwise, so the result
/// depends on n only and never on `workers`.
///
/// Acc must be copyable, support operator+ and be value-initialized to zero
/// by `zero`.
template <typename Acc, typename F>
Acc block_reduce(std::size_t n, unsigned workers, const Acc& zero, F&& f) {
  if (n == 0) return zero;
  const std::size_t blocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<Acc> partial(blocks, zero);
  auto run_block = [&](std::size_t b) {
    Acc acc = zero;
    const std::size_t end = std::min(n, (b + 1) * kReduceBlock);
    for (std::size_t i = b * kReduceBlock; i < end; ++i) acc = acc + f(i);
    partial[b] = acc;
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t b = w; b < blocks; b += workers) run_block(b);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  return pairwise_sum(partial, 0, blocks);
}

}  // namespace dsttomo
