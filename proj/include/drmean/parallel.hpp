#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace drmean {

// Number of worker threads to use: `requested` if positive, otherwise the
// hardware concurrency (at least 1).
int effective_threads(int requested);

// Runs body(trial, acc) for every trial in [0, trials) and returns the
// element-wise sums of whatever body adds into its width-sized accumulator.
//
// Determinism contract: trials are split into fixed-size blocks; each block
// is accumulated sequentially in trial order into its own buffer, and block
// buffers are folded in block order at the end. The result is therefore
// bit-identical for every thread count and schedule.
std::vector<double> blocked_trial_sums(
    std::int64_t trials, std::size_t width, int threads,
    const std::function<void(std::int64_t, std::span<double>)>& body);

}  // namespace drmean
