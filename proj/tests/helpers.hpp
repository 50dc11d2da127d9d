#pragma once

#include <vector>

#include "drmean/moments.hpp"
#include "drmean/rng.hpp"

namespace testutil {

inline std::vector<double> random_weights(drmean::Rng& rng, std::size_t k) {
  std::vector<double> w(k);
  double sum = 0.0;
  for (auto& x : w) {
    x = rng.exponential(1.0) + 0.05;
    sum += x;
  }
  for (auto& x : w) x /= sum;
  return w;
}

inline drmean::DiscreteDistribution random_instance(drmean::Rng& rng, int min_atoms,
                                                    int max_atoms, int max_dim) {
  const int k = min_atoms + static_cast<int>(rng.next_u64() %
                                             static_cast<std::uint64_t>(max_atoms - min_atoms + 1));
  const int d = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_dim));
  std::vector<Eigen::VectorXd> atoms;
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd a(d);
    for (int c = 0; c < d; ++c) a(c) = rng.normal(0.0, 1.5);
    atoms.push_back(a);
  }
  return drmean::DiscreteDistribution(atoms, random_weights(rng, atoms.size()));
}

inline drmean::DiscreteDistribution random_scalar_instance(drmean::Rng& rng, int min_atoms,
                                                           int max_atoms) {
  return random_instance(rng, min_atoms, max_atoms, 1);
}

}  // namespace testutil
