#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drmean/models.hpp"

namespace drmean {

struct ExperimentSpec {
  Model model = Model::gaussian(0.0, 1.0);
  std::int64_t n = 1;
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
  std::vector<double> lambda_grid;
  double epsilon = 1e-6;
  int threads = 0;

  void validate() const;
};

struct MseCurvePoint {
  double lambda_bar = 0.0;
  double mse_vs_truth_mean = 0.0;  // E |xhat - E X|^2, against the analytic mean
  double mse_vs_draw = 0.0;        // E |xhat - X|^2, against a fresh draw
  double ci_halfwidth = 0.0;       // 95% halfwidth of mse_vs_truth_mean
  std::int64_t trials_used = 0;
};

struct MseCurve {
  std::vector<MseCurvePoint> points;
};

// Paired Monte Carlo estimates of both MSE curves over the grid (common
// random numbers: each trial's sample and fresh draw are shared by every
// grid point).
MseCurve run_mse_curve(const ExperimentSpec& spec);

struct PairedDiff {
  double mean_diff = 0.0;  // E[(xbar + l t - mu)^2 - (xbar - mu)^2]
  double std_error = 0.0;
  std::int64_t trials = 0;
};

PairedDiff paired_mse_difference(const Model& model, std::int64_t n, double lambda_bar,
                                 std::int64_t trials, std::uint64_t seed,
                                 int threads = 0);

struct Fig1Report {
  std::vector<double> mixture_means, mixture_sigmas, mixture_props;
  double analytic_mean = 0.0, analytic_m2 = 0.0, analytic_m3 = 0.0, analytic_m4 = 0.0,
         analytic_g = 0.0;
  // published reference values for this mixture configuration
  double reference_m2 = 3.826, reference_m4 = 32.46, reference_g = 11.4622;
  double reference_xbar = 1.963, reference_t = -3.61;
  std::int64_t n = 23;
  std::uint64_t seed = 0;
  std::int64_t surrogate_samples = 10000;
  double realized_xbar = 0.0, realized_t = 0.0;
  std::vector<double> lambda_grid;
  std::vector<double> mse_analytic;   // (xbar + l t - mean)^2 + m2, exact
  std::vector<double> mse_surrogate;  // against the surrogate sample
  double minimizer_analytic = 0.0;    // argmin over lambda_bar >= 0 of the realized parabola
  double minimum_analytic = 0.0;
  double reference_minimizer = 0.0;   // same for the reference (xbar, t) pair
  double reference_minimum = 0.0;
  double reference_slope0 = 0.0;      // derivative of the reference parabola at 0
};

// Draws the canned two-component mixture demo: n = 23 sample, the affine
// estimator family xbar + lambda_bar * t, and its MSE curve against the
// exact mixture moments plus a 10000-draw surrogate.
Fig1Report reproduce_fig1(std::uint64_t seed, int threads = 0);

struct IdentityCheck {
  std::string name;
  std::int64_t n = 0;
  double closed_form = 0.0;
  double mc_estimate = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool pass = false;  // |mc - closed| <= 3 std errors
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  std::string cross_normalization;  // "n^-3" once the Monte Carlo rules out n^-2
  bool all_pass = false;
};

// Monte Carlo battery for the closed-form sample-moment expectations:
// E xbar^3, E xbar^4, E[x_1^3 xbar], E[(sum_{j != 1} x_j)^3], the fresh-draw
// cross term E[(X - xbar) T_n] (which also resolves its normalization), and
// E[xbar sum (x_i - xbar)^3].
IdentityReport identity_battery(const Model& model, std::span<const std::int64_t> n_list,
                                std::int64_t trials, std::uint64_t seed,
                                int threads = 0);

// Coverage count of the 95% CI for the Gaussian mse at lambda_bar = 0
// (true value m2/n) over `runs` independent small runs.
int ci_coverage_count(const Model& gaussian_model, std::int64_t n, int runs,
                      std::int64_t trials_per_run, std::uint64_t seed, int threads = 0);

}  // namespace drmean
