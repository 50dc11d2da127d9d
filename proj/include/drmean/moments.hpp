#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace drmean {

// Moment summary consumed by the closed-form estimators.
//
//   zeta_minus = 2 (E[||X||^2 X] - E||X||^2 E[X])
//   alpha      = E(||X||^2 - E||X||^2)^2
//
// m2, m3, m4 are the scalar central moments and are populated for d == 1
// only (they stay 0 otherwise).
struct MomentSet {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  Eigen::VectorXd zeta_minus;
  double alpha = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;

  Eigen::Index dim() const { return mean.size(); }
};

// Finite-support probability measure. Duplicate atoms are merged (weights
// summed) at construction; weights must be nonnegative and sum to 1 within
// 1e-12.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<Eigen::VectorXd> atoms, std::vector<double> weights);

  // scalar convenience
  DiscreteDistribution(std::initializer_list<double> atoms, std::initializer_list<double> weights);

  const std::vector<Eigen::VectorXd>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }
  Eigen::Index dim() const { return atoms_.empty() ? 0 : atoms_[0].size(); }

 private:
  std::vector<Eigen::VectorXd> atoms_;
  std::vector<double> weights_;
};

// Plug-in (divide by n) moments of the empirical measure of `data`.
MomentSet moments_from_sample(const std::vector<Eigen::VectorXd>& data);
MomentSet moments_from_sample(std::span<const double> data);

// Exact weighted moments of a finite-support measure.
MomentSet moments_from_discrete(const DiscreteDistribution& dist);

// g = 3 m2^2 - m4; strictly positive exactly for platykurtic scalar laws.
double kurtosis_gap(const MomentSet& m);

// Exact central moments of a scalar Gaussian mixture, via per-component
// offsets d_i = mean_i - mean:
//   m2 = sum pi_i (s_i^2 + d_i^2)
//   m3 = sum pi_i (3 s_i^2 d_i + d_i^3)
//   m4 = sum pi_i (3 s_i^4 + 6 s_i^2 d_i^2 + d_i^4)
MomentSet analytic_mixture_moments(std::span<const double> means,
                                   std::span<const double> sigmas,
                                   std::span<const double> props);

}  // namespace drmean
