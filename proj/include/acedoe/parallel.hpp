#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace acedoe {

inline std::size_t default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

/// Runs fn(block) for block in [0, num_blocks) on up to `workers` threads. Work is
/// split by block index only, so results written per block do not depend on the
/// worker count. The first exception thrown by any block is rethrown.
template <class Fn>
void parallel_for_blocks(std::size_t num_blocks, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, num_blocks));
  if (workers == 1) {
    for (std::size_t b = 0; b < num_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b = next++; b < num_blocks; b = next++) {
        try {
          fn(b);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = num_blocks;
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace acedoe
