#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "drmean/moments.hpp"

namespace drmean {

// One eigendirection of the covariance: the rotated mean plus the two bias
// contributions (skewness along the direction, third-order cross statistics
// against the other directions). rotated_mean + skew_term + cross_term is
// the estimate's coordinate in the eigenbasis.
struct DirectionBias {
  double sigma = 0.0;
  double rotated_mean = 0.0;
  double skew_term = 0.0;
  double cross_term = 0.0;
};

struct EstimatorResult {
  Eigen::VectorXd estimate;
  double lambda = 0.0;                  // multiplier of the variance-of-loss constraint
  std::optional<double> lambda_md;      // mean-deviation multiplier, when the risk level is known
  double gamma_star = 0.0;
  bool admissible = true;               // lambda <= 1/gamma_star (always true when gamma_star == 0)
  std::vector<DirectionBias> bias_terms;
};

// E||X - xhat||^2 and var ||X - xhat||^2 evaluated from the moment summary.
double loss_mean(const MomentSet& m, const Eigen::VectorXd& xhat);
double loss_variance(const MomentSet& m, const Eigen::VectorXd& xhat);

// Large-multiplier limit of the estimator: (4 Sigma)^+ zeta_minus on the
// range of Sigma; directions in the kernel keep the mean (zero bias).
Eigen::VectorXd estimator_limit(const MomentSet& m);

// Admissibility threshold 2 (||limit - mean||^2 + tr Sigma). Zero for a
// point mass; throws if the covariance is degenerate while zeta_minus is not.
double gamma_star(const MomentSet& m);

// Closed-form minimizer of E||X - xhat||^2 + lambda var||X - xhat||^2:
//   (I + 4 lambda Sigma)^{-1} (mean + lambda zeta_minus)
EstimatorResult population_estimator(const MomentSet& m, double lambda);
EstimatorResult population_estimator(const DiscreteDistribution& dist, double lambda);

// Scalar skew-shift form mean + lambda m3 / (1 + 2 lambda m2). Saturates at
// mean + m3/(2 m2) as lambda grows; equals population_estimator at half its
// multiplier: scalar_estimator(2 lambda) == population_estimator(lambda).
double scalar_estimator(double mean, double m2, double m3, double lambda);

// Per-eigendirection decomposition; rotating back with the covariance
// eigenbasis reproduces population_estimator(lambda) exactly.
std::vector<DirectionBias> eigen_decomposed_estimator(const DiscreteDistribution& dist,
                                                      double lambda);

// Reassemble U * (rotated_mean + skew + cross) from a decomposition.
Eigen::VectorXd reassemble_estimate(const MomentSet& m,
                                    const std::vector<DirectionBias>& terms);

// Reweighting density 1 + 2 lambda (||x - xhat||^2 - E||X - xhat||^2).
// Nonnegative on the support whenever lambda <= 1/gamma_star; may go
// negative beyond that (callers check the admissible flag).
double reweight_density(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat,
                        double lambda, const MomentSet& m);

// Worst-case density lambda_md (Z - E Z)/sd(Z) + 1 with Z = ||x - xhat||^2;
// integrates to 1 and sits exactly on the divergence-ball boundary
// (chi-squared divergence lambda_md^2).
double worstcase_density(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat,
                         double lambda_md, const MomentSet& m);

// lambda_md = 2 lambda_mv sqrt(epsilon)
double multiplier_relation(double lambda_mv, double epsilon);

// Solves the risk level for its multiplier: var||X - xhat||^2 at the
// closed-form estimate is nonincreasing in lambda, so bisection applies.
// Slack constraints return lambda = 0; risk levels below the achievable
// infimum raise std::runtime_error (message reports the infimum).
EstimatorResult dual_solve(const MomentSet& m, double epsilon);

// Scalar diagnostic lambda^2 m3 / (1 + lambda m2); valid for
// lambda <= 1/(2 gamma_star).
double grad_chi2_expectation(const MomentSet& m, double lambda);

}  // namespace drmean
