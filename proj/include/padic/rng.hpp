#pragma once

#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace padic {

using Engine = std::mt19937_64;

// Independent stream per (seed, stream id); the id is usually a path index,
// so results do not depend on how paths are split across workers.
Engine make_stream(std::uint64_t seed, std::uint64_t stream);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Runs fn(i) for i in [0, n) on up to `workers` threads with static chunks.
// fn must only write to per-index state.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Mean and standard error of a sample, summed in index order.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};
MeanSe mean_se(const std::vector<double>& x);

}  // namespace padic
