#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace nsbell {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Splits [0,total) into contiguous blocks, one per worker, and runs
/// fn(block_index, lo, hi) on each. Results must be written to per-block
/// slots by the caller; merging block results in block order keeps the
/// outcome independent of the thread count.
template <class Fn>
void parallel_blocks(std::uint64_t total, int threads, Fn&& fn) {
  const int t = std::min<std::uint64_t>(static_cast<std::uint64_t>(resolve_threads(threads)),
                                        total == 0 ? 1 : total);
  if (t <= 1) {
    fn(0, std::uint64_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  const std::uint64_t chunk = total / static_cast<std::uint64_t>(t);
  const std::uint64_t rem = total % static_cast<std::uint64_t>(t);
  std::uint64_t lo = 0;
  for (int i = 0; i < t; ++i) {
    const std::uint64_t hi = lo + chunk + (static_cast<std::uint64_t>(i) < rem ? 1 : 0);
    pool.emplace_back([&fn, i, lo, hi] { fn(i, lo, hi); });
    lo = hi;
  }
  for (auto& th : pool) th.join();
}

}  // namespace nsbell
