#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace shrinklearn {

/// Runs fn(i) for i in [0, n). Each index writes only its own slot of any
/// shared output, so results are identical for every thread count; callers
/// reduce in index order afterwards.
template <class Fn>
void parallel_for_indexed(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const int nworkers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(threads), n));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nworkers);
  for (int w = 0; w < nworkers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace shrinklearn
