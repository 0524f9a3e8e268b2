#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace tg {

// Static block partition over [begin, end); fn(i) must be safe to run
// concurrently for distinct i. Deterministic work assignment.
inline void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& fn,
                         unsigned max_threads = 0) {
  std::size_t n = end > begin ? end - begin : 0;
  if (n == 0) return;
  unsigned hw = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = begin + w * chunk;
    std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Deterministic min-reduction: each index produces a (value, payload) pair via
// fn; ties and ordering are resolved by index, independent of thread timing.
template <typename Payload>
struct MinReduce {
  double value;
  Payload payload;
};

template <typename Payload, typename Fn>
MinReduce<Payload> parallel_min(std::size_t n, Fn&& fn, unsigned max_threads = 0) {
  std::vector<double> vals(n);
  std::vector<Payload> pays(n);
  parallel_for(0, n, [&](std::size_t i) {
    auto pr = fn(i);
    vals[i] = pr.first;
    pays[i] = pr.second;
  }, max_threads);
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (vals[i] < vals[best]) best = i;
  return {vals[best], pays[best]};
}

}  // namespace tg
