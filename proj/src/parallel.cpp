#include "drmean/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace drmean {

int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {
constexpr std::int64_t kBlock = 8192;
}

std::vector<double> blocked_trial_sums(
    std::int64_t trials, std::size_t width, int threads,
    const std::function<void(std::int64_t, std::span<double>)>& body) {
  if (trials <= 0) return std::vector<double>(width, 0.0);

  const std::int64_t nblocks = (trials + kBlock - 1) / kBlock;
  std::vector<double> block_sums(static_cast<std::size_t>(nblocks) * width, 0.0);

  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= nblocks) break;
      std::span<double> out(&block_sums[static_cast<std::size_t>(b) * width], width);
      const std::int64_t lo = b * kBlock;
      const std::int64_t hi = std::min(trials, lo + kBlock);
      for (std::int64_t t = lo; t < hi; ++t) body(t, out);
    }
  };

  const int nt = static_cast<int>(
      std::min<std::int64_t>(effective_threads(threads), nblocks));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<double> total(width, 0.0);
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const double* src = &block_sums[static_cast<std::size_t>(b) * width];
    for (std::size_t j = 0; j < width; ++j) total[j] += src[j];
  }
  return total;
}

}  // namespace drmean
