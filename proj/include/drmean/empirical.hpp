#pragma once

#include <cstdint>
#include <span>

#include "drmean/models.hpp"

namespace drmean {

// Sample mean shifted by a multiple of the sample third central moment:
//   estimate = xbar + lambda_bar * t_n,  t_n = (1/n) sum (x_i - xbar)^3
struct EmpiricalEstimate {
  double xbar = 0.0;
  double t_n = 0.0;
  double lambda_bar = 0.0;
  double estimate = 0.0;
  std::int64_t n = 0;
};

EmpiricalEstimate empirical_estimate(std::span<const double> data, double lambda_bar);

// Closed form of E[(X - xbar_n) T_n] for a fresh draw X: with T_n carrying
// the 1/n factor this is (n-1)(n-2) g / n^3 (zero for n in {1, 2}).
double cross_term_closed_form(double g, std::int64_t n);

struct DominationReport {
  double g = 0.0;                // 3 m2^2 - m4 of the generating model
  double cross_term = 0.0;       // closed form E[(X - xbar_n) T_n]
  double t2_estimate = 0.0;      // Monte Carlo E T_n^2
  double t2_std_error = 0.0;
  double epsilon = 0.0;
  double threshold_exact = 0.0;  // 2 cross_term / (t2 + eps)
  double threshold_simple = 0.0; // 8 g / (n (t2 + eps))
  double slope0 = 0.0;           // -g (n^2 - 3n + 2) / n^3
  bool domination_feasible = false;  // g > 0
  std::int64_t n = 0;
  std::int64_t trials = 0;
};

// Monte Carlo estimate of E T_n^2 plus every threshold the domination
// condition needs. trials < 100 is rejected.
DominationReport domination_report(const Model& model, std::int64_t n, double epsilon,
                                   std::int64_t trials, std::uint64_t seed,
                                   int threads = 0);

struct LambdaOptResult {
  double lambda = 0.0;
  bool feasible = false;  // false when g <= 0 (no strictly dominating lambda_bar)
};

// Grid argmin of the Monte Carlo MSE against the model's analytic mean,
// restricted to [0, threshold_exact]. Common random numbers across the grid.
LambdaOptResult lambda_opt(const Model& model, std::int64_t n, double epsilon,
                           std::span<const double> grid, std::int64_t trials,
                           std::uint64_t seed, int threads = 0);

}  // namespace drmean
