#pragma once

#include <cmath>
#include <cstdint>

namespace drmean {

// Keyed random stream. The initial state is a hash of (seed, stream, tag),
// so trial k of a Monte Carlo run sees the same sequence no matter which
// thread executes it or how work is scheduled. Streams with different keys
// are decorrelated by the 64-bit finalizer.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t tag = 0)
      : state_(key(seed, stream, tag)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return finalize(state_);
  }

  // uniform on [0, 1), 53-bit resolution
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  bool bernoulli(double p) { return next_double() < p; }

  double exponential(double rate) { return -std::log1p(-next_double()) / rate; }

  // Box-Muller; both values of a pair are consumed before new bits are drawn.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t key(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag) {
    std::uint64_t k = finalize(seed + 0x9e3779b97f4a7c15ull);
    k = finalize(k ^ (stream + 0xbf58476d1ce4e5b9ull));
    k = finalize(k ^ (tag + 0x94d049bb133111ebull));
    return k;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace drmean
