#pragma once

#include <Eigen/Dense>

#include "drmean/estimator.hpp"
#include "drmean/moments.hpp"

namespace drmean {

struct InnerSupResult {
  double value = 0.0;
  DiscreteDistribution nu;
  bool closed_form = false;  // the unconstrained-sign maximizer was feasible
  bool flat_loss = false;    // loss constant on the support; value is E Z
};

// Exact maximizer of a linear objective over the intersection of the
// probability simplex with the divergence ball sum w_i (nu_i/w_i - 1)^2 <=
// radius^2. The optimal support zeroes out a lowest-coefficient prefix, so
// all candidates can be enumerated.
InnerSupResult max_linear_over_ball(const DiscreteDistribution& dist,
                                    const Eigen::VectorXd& coeffs, double radius);

// Worst-case expected loss sup E_nu ||X - xhat||^2 over the ball.
InnerSupResult inner_sup(const DiscreteDistribution& dist, const Eigen::VectorXd& xhat,
                         double radius);

// Numerically solves min E||X - xhat||^2 subject to var||X - xhat||^2 <=
// epsilon by projected gradient descent on the ellipsoid reformulation
// (projection via a 1-D Newton solve); independent of the closed forms.
Eigen::VectorXd constrained_solve(const DiscreteDistribution& dist, double epsilon);

struct ReformulationCheck {
  double lhs = 0.0;  // direct E(Z - E Z)^2
  double rhs = 0.0;  // Schur-factored (alpha - zeta' G^+ zeta) + ||xhat - G^+ zeta||_G^2
  bool applicable = true;  // false when Sigma is singular with zeta off its range
};

ReformulationCheck quadratic_reformulation_check(const DiscreteDistribution& dist,
                                                 const Eigen::VectorXd& xhat);

struct SaddleReport {
  double minimax = 0.0;
  double maximin = 0.0;
  double gap = 0.0;
  Eigen::VectorXd xhat_star;
  DiscreteDistribution nu_star;
  bool self_consistent = false;  // ||xhat_star - E_{nuـstar} X|| <= 1e-6
  bool admissible = false;       // recovered multiplier within 1/gamma_star
  double radius = 0.0;
  double recovered_epsilon = 0.0;
  double recovered_lambda_mv = 0.0;
};

// Measures the saddle gap of the ball game: outer minimization by
// per-coordinate golden-section (coordinate descent for d > 1), inner
// maximization exact, maximin refined by Frank-Wolfe with the exact linear
// oracle.
SaddleReport saddle_check(const DiscreteDistribution& dist, double radius);

}  // namespace drmean
