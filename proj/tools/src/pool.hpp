#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <numeric>
#include <random>
#include <thread>
#include <vector>

namespace anholo::cli {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Tasks are taken
// in a seed-shuffled order; callers store results by index, so the output
// does not depend on scheduling. The exception of the lowest failing index
// is rethrown.
template <class F>
void parallel_for(std::size_t count, int threads, std::uint64_t seed, F&& fn) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), std::mt19937_64(seed));

  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        fn(order[k]);
      } catch (...) {
        errors[order[k]] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace anholo::cli
