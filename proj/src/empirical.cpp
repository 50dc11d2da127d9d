#include "drmean/empirical.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "drmean/parallel.hpp"

namespace drmean {

namespace {

// trial stream tags within the empirical module
constexpr std::uint64_t kTagT2 = 1;
constexpr std::uint64_t kTagCurve = 2;

double sample_t(const Model& model, std::int64_t n, Rng& rng, double* xbar_out) {
  double s = 0.0;
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (auto& x : xs) {
    x = model.sample(rng);
    s += x;
  }
  const double xbar = s / static_cast<double>(n);
  double t = 0.0;
  for (double x : xs) {
    const double c = x - xbar;
    t += c * c * c;
  }
  if (xbar_out) *xbar_out = xbar;
  return t / static_cast<double>(n);
}

}  // namespace

EmpiricalEstimate empirical_estimate(std::span<const double> data, double lambda_bar) {
  if (data.empty()) throw std::invalid_argument("empty sample");
  if (lambda_bar < 0.0) throw std::invalid_argument("lambda_bar must be nonnegative");
  EmpiricalEstimate e;
  e.n = static_cast<std::int64_t>(data.size());
  double s = 0.0;
  for (double x : data) s += x;
  e.xbar = s / static_cast<double>(e.n);
  double t = 0.0;
  for (double x : data) {
    const double c = x - e.xbar;
    t += c * c * c;
  }
  e.t_n = t / static_cast<double>(e.n);
  e.lambda_bar = lambda_bar;
  e.estimate = e.xbar + lambda_bar * e.t_n;
  return e;
}

double cross_term_closed_form(double g, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  const double nd = static_cast<double>(n);
  return static_cast<double>(n - 1) * static_cast<double>(n - 2) * g / (nd * nd * nd);
}

DominationReport domination_report(const Model& model, std::int64_t n, double epsilon,
                                   std::int64_t trials, std::uint64_t seed,
                                   int threads) {
  if (n < 3) throw std::invalid_argument("n must be at least 3");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (trials < 100) throw std::invalid_argument("insufficient trials for E Tn^2");

  DominationReport r;
  r.n = n;
  r.trials = trials;
  r.epsilon = epsilon;
  r.g = model.kurtosis_gap();
  r.cross_term = cross_term_closed_form(r.g, n);

  const auto sums = blocked_trial_sums(
      trials, 2, threads, [&](std::int64_t t, std::span<double> acc) {
        Rng rng(seed, static_cast<std::uint64_t>(t), kTagT2);
        const double tn = sample_t(model, n, rng, nullptr);
        acc[0] += tn * tn;
        acc[1] += tn * tn * tn * tn;
      });
  const double td = static_cast<double>(trials);
  r.t2_estimate = sums[0] / td;
  const double var = std::max(0.0, sums[1] / td - r.t2_estimate * r.t2_estimate);
  r.t2_std_error = std::sqrt(var / td);

  r.threshold_exact = 2.0 * r.cross_term / (r.t2_estimate + epsilon);
  const double nd = static_cast<double>(n);
  r.threshold_simple = 8.0 * r.g / (nd * (r.t2_estimate + epsilon));
  r.slope0 = -r.g * (nd * nd - 3.0 * nd + 2.0) / (nd * nd * nd);
  r.domination_feasible = r.g > 0.0;
  return r;
}

LambdaOptResult lambda_opt(const Model& model, std::int64_t n, double epsilon,
                           std::span<const double> grid, std::int64_t trials,
                           std::uint64_t seed, int threads) {
  const DominationReport rep = domination_report(model, n, epsilon, trials, seed, threads);
  LambdaOptResult out;
  if (!rep.domination_feasible) return out;  // 0 with feasible = false

  std::vector<double> feasible;
  for (double l : grid)
    if (l >= 0.0 && l <= rep.threshold_exact) feasible.push_back(l);
  if (feasible.empty()) return out;

  const double mu = model.mean();
  const std::size_t g = feasible.size();
  const auto sums = blocked_trial_sums(
      trials, g, threads, [&](std::int64_t t, std::span<double> acc) {
        Rng rng(seed, static_cast<std::uint64_t>(t), kTagCurve);
        double xbar = 0.0;
        const double tn = sample_t(model, n, rng, &xbar);
        for (std::size_t i = 0; i < g; ++i) {
          const double err = xbar + feasible[i] * tn - mu;
          acc[i] += err * err;
        }
      });

  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g; ++i) {
    if (sums[i] < best_val) {
      best_val = sums[i];
      best = i;
    }
  }
  out.lambda = feasible[best];
  out.feasible = true;
  return out;
}

}  // namespace drmean
