#pragma once

#include <thread>
#include <vector>

namespace mcprune {

// Runs fn(i) for i in [0, count) over contiguous chunks. Results must be
// written to disjoint slots; reductions stay with the caller, done
// sequentially, so thread count never changes any computed value.
template <class F>
void parallel_for(int count, int threads, F fn) {
  if (threads <= 1 || count < 2 * threads) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  int nworkers = std::min(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(nworkers);
  int chunk = (count + nworkers - 1) / nworkers;
  for (int w = 0; w < nworkers; ++w) {
    int lo = w * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace mcprune
