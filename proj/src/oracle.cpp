#include "drmean/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace drmean {

namespace {

constexpr double kEigCutoffRel = 1e-10;

DiscreteDistribution with_weights(const DiscreteDistribution& dist,
                                  const std::vector<double>& w) {
  std::vector<double> fixed = w;
  double sum = 0.0;
  for (double& x : fixed) {
    if (x < 0.0) x = 0.0;  // clip roundoff
    sum += x;
  }
  for (double& x : fixed) x /= sum;
  return DiscreteDistribution(dist.atoms(), fixed);
}

double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                       double xatol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xatol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

InnerSupResult max_linear_over_ball(const DiscreteDistribution& dist,
                                    const Eigen::VectorXd& coeffs, double radius) {
  if (radius < 0.0) throw std::invalid_argument("radius must be nonnegative");
  const std::size_t k = dist.size();
  if (static_cast<std::size_t>(coeffs.size()) != k)
    throw std::invalid_argument("coefficient length mismatch");
  const std::vector<double>& w = dist.weights();

  double ec = 0.0;
  for (std::size_t i = 0; i < k; ++i) ec += w[i] * coeffs(i);
  double var = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    var += w[i] * (coeffs(i) - ec) * (coeffs(i) - ec);

  InnerSupResult res{ec, dist, true, false};
  if (radius == 0.0) return res;
  if (var <= 0.0) {
    res.flat_loss = true;
    return res;
  }

  // unconstrained-sign maximizer: nu_i = w_i (1 + radius (c_i - ec)/sd)
  const double sd = std::sqrt(var);
  std::vector<double> nu(k);
  bool nonneg = true;
  for (std::size_t i = 0; i < k; ++i) {
    nu[i] = w[i] * (1.0 + radius * (coeffs(i) - ec) / sd);
    if (nu[i] < 0.0) nonneg = false;
  }
  if (nonneg) {
    res.value = ec + radius * sd;
    res.nu = with_weights(dist, nu);
    return res;
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return coeffs(a) < coeffs(b); });

  // full concentration on the top-coefficient atoms, if the ball affords it
  const double cmax = coeffs(order.back());
  double mtop = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    if (coeffs(i) == cmax) mtop += w[i];
  InnerSupResult best{-std::numeric_limits<double>::infinity(), dist, false, false};
  if ((1.0 - mtop) / mtop <= radius * radius) {
    std::vector<double> conc(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      if (coeffs(i) == cmax) conc[i] = w[i] / mtop;
    best.value = cmax;
    best.nu = with_weights(dist, conc);
  }

  // zero out a low-coefficient prefix; the divergence constraint binds on the rest
  for (std::size_t t = 1; t < k; ++t) {
    double mass = 0.0, cmean = 0.0;
    for (std::size_t j = t; j < k; ++j) {
      mass += w[order[j]];
      cmean += w[order[j]] * coeffs(order[j]);
    }
    cmean /= mass;
    const double removed = (1.0 - mass) / mass;
    const double budget = radius * radius - removed;
    if (budget <= 0.0) continue;
    double v = 0.0;
    for (std::size_t j = t; j < k; ++j)
      v += w[order[j]] * (coeffs(order[j]) - cmean) * (coeffs(order[j]) - cmean);

    std::vector<double> cand(k, 0.0);
    double value;
    if (v <= 1e-300) {
      for (std::size_t j = t; j < k; ++j) cand[order[j]] = w[order[j]] / mass;
      value = cmean;
    } else {
      const double s = std::sqrt(budget / v);
      bool ok = true;
      for (std::size_t j = t; j < k; ++j) {
        const std::size_t i = order[j];
        cand[i] = w[i] * (1.0 / mass + s * (coeffs(i) - cmean));
        if (cand[i] < -1e-15) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      value = cmean + std::sqrt(v * budget);
    }
    if (value > best.value) {
      best.value = value;
      best.nu = with_weights(dist, cand);
    }
  }

  if (!std::isfinite(best.value))
    throw std::runtime_error("no feasible candidate in active-set enumeration");
  return best;
}

InnerSupResult inner_sup(const DiscreteDistribution& dist, const Eigen::VectorXd& xhat,
                         double radius) {
  Eigen::VectorXd z(static_cast<Eigen::Index>(dist.size()));
  for (std::size_t i = 0; i < dist.size(); ++i)
    z(static_cast<Eigen::Index>(i)) = (dist.atoms()[i] - xhat).squaredNorm();
  return max_linear_over_ball(dist, z, radius);
}

Eigen::VectorXd constrained_solve(const DiscreteDistribution& dist, double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
  const MomentSet m = moments_from_discrete(dist);
  const Eigen::Index d = m.dim();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.covariance);
  Eigen::VectorXd sig = es.eigenvalues();
  const Eigen::MatrixXd U = es.eigenvectors();
  const double cutoff = kEigCutoffRel * std::max(1e-300, sig.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d; ++i)
    if (sig(i) < cutoff) sig(i) = 0.0;

  const Eigen::VectorXd center = estimator_limit(m);
  const double infimum = loss_variance(m, center);
  const double ebar = epsilon - infimum;
  if (ebar < -1e-9 * std::max(1.0, epsilon)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "infeasible risk level: achievable infimum is " << infimum;
    throw std::runtime_error(msg.str());
  }

  const Eigen::VectorXd gamma = 4.0 * sig;  // ellipsoid metric in the eigenbasis
  const Eigen::VectorXd mean_u = U.transpose() * m.mean;
  const Eigen::VectorXd center_u = U.transpose() * center;

  if (ebar <= 1e-300) {
    // single-point ellipsoid; kernel directions stay free and take the mean
    Eigen::VectorXd x_u = center_u;
    for (Eigen::Index i = 0; i < d; ++i)
      if (gamma(i) == 0.0) x_u(i) = mean_u(i);
    return U * x_u;
  }

  auto project = [&](Eigen::VectorXd x_u) {
    Eigen::VectorXd z = x_u - center_u;
    double q = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) q += gamma(i) * z(i) * z(i);
    if (q <= ebar) return x_u;
    double tau = 0.0;
    for (int it = 0; it < 200; ++it) {
      double h = -ebar, hp = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        if (gamma(i) == 0.0) continue;
        const double den = 1.0 + tau * gamma(i);
        h += gamma(i) * z(i) * z(i) / (den * den);
        hp += -2.0 * gamma(i) * gamma(i) * z(i) * z(i) / (den * den * den);
      }
      if (std::abs(h) <= 1e-15 * std::max(1.0, ebar)) break;
      tau -= h / hp;
      if (tau < 0.0) tau = 0.0;
    }
    for (Eigen::Index i = 0; i < d; ++i)
      if (gamma(i) != 0.0) z(i) /= 1.0 + tau * gamma(i);
    return Eigen::VectorXd(center_u + z);
  };

  // objective ||x - mean||^2 (plus a constant); gradient 2 (x - mean)
  constexpr double kStep = 0.25;
  Eigen::VectorXd x_u = project(mean_u);
  for (int it = 0; it < 10000; ++it) {
    const Eigen::VectorXd next = project(x_u - kStep * 2.0 * (x_u - mean_u));
    const double pg = (x_u - next).norm() / kStep;
    x_u = next;
    if (pg <= 1e-10) break;
  }
  return U * x_u;
}

ReformulationCheck quadratic_reformulation_check(const DiscreteDistribution& dist,
                                                 const Eigen::VectorXd& xhat) {
  const MomentSet m = moments_from_discrete(dist);
  ReformulationCheck out;

  double ez = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i)
    ez += dist.weights()[i] * (dist.atoms()[i] - xhat).squaredNorm();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double z = (dist.atoms()[i] - xhat).squaredNorm();
    out.lhs += dist.weights()[i] * (z - ez) * (z - ez);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.covariance);
  Eigen::VectorXd sig = es.eigenvalues();
  const Eigen::MatrixXd U = es.eigenvectors();
  const double cutoff = kEigCutoffRel * std::max(1e-300, sig.cwiseAbs().maxCoeff());
  const Eigen::VectorXd zu = U.transpose() * m.zeta_minus;
  const Eigen::VectorXd xu = U.transpose() * xhat;

  double quad = 0.0, schur = m.alpha;
  const double ztol = 1e-8 * (1.0 + m.zeta_minus.norm());
  for (Eigen::Index i = 0; i < sig.size(); ++i) {
    if (sig(i) < cutoff) {
      if (std::abs(zu(i)) > ztol) out.applicable = false;
      continue;
    }
    const double g = 4.0 * sig(i);
    const double ci = zu(i) / g;
    schur -= zu(i) * zu(i) / g;
    quad += g * (xu(i) - ci) * (xu(i) - ci);
  }
  out.rhs = schur + quad;
  return out;
}

SaddleReport saddle_check(const DiscreteDistribution& dist, double radius) {
  if (radius < 0.0) throw std::invalid_argument("radius must be nonnegative");
  const MomentSet m = moments_from_discrete(dist);
  const Eigen::Index d = dist.dim();
  const std::size_t k = dist.size();

  Eigen::VectorXd lo(d), hi(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    double mn = dist.atoms()[0](c), mx = dist.atoms()[0](c);
    for (const auto& a : dist.atoms()) {
      mn = std::min(mn, a(c));
      mx = std::max(mx, a(c));
    }
    const double pad = (mx - mn) + 1.0;
    lo(c) = mn - pad;
    hi(c) = mx + pad;
  }

  auto worst = [&](const Eigen::VectorXd& x) { return inner_sup(dist, x, radius).value; };

  Eigen::VectorXd x = m.mean;
  if (d == 1) {
    x(0) = golden_minimize([&](double t) { return worst(Eigen::VectorXd::Constant(1, t)); },
                           lo(0), hi(0), 1e-10);
  } else {
    for (int sweep = 0; sweep < 300; ++sweep) {
      double moved = 0.0;
      for (Eigen::Index c = 0; c < d; ++c) {
        Eigen::VectorXd probe = x;
        const double best = golden_minimize(
            [&](double t) {
              probe(c) = t;
              return worst(probe);
            },
            lo(c), hi(c), 1e-10);
        moved = std::max(moved, std::abs(best - x(c)));
        x(c) = best;
      }
      if (moved < 1e-9) break;
    }
  }

  const InnerSupResult inner = inner_sup(dist, x, radius);

  SaddleReport rep{inner.value, 0.0, 0.0, x, inner.nu, false, false, radius, 0.0, 0.0};

  // maximin: concave Var_nu maximization; start from the inner maximizer and
  // refine with Frank-Wolfe (linear oracle = max_linear_over_ball)
  auto var_of = [&](const std::vector<double>& nu) {
    Eigen::VectorXd mean_nu = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < k; ++i) mean_nu += nu[i] * dist.atoms()[i];
    double v = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      v += nu[i] * (dist.atoms()[i] - mean_nu).squaredNorm();
    return v;
  };

  std::vector<double> nu = inner.nu.weights();
  // align weights with the original atom order (merging preserves order here)
  double fval = var_of(nu);
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXd mean_nu = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < k; ++i) mean_nu += nu[i] * dist.atoms()[i];
    Eigen::VectorXd grad(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
      grad(static_cast<Eigen::Index>(i)) =
          dist.atoms()[i].squaredNorm() - 2.0 * mean_nu.dot(dist.atoms()[i]);
    const InnerSupResult lin = max_linear_over_ball(dist, grad, radius);
    const std::vector<double>& s = lin.nu.weights();
    double fw_gap = 0.0;
    Eigen::VectorXd dirmean = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < k; ++i) {
      fw_gap += grad(static_cast<Eigen::Index>(i)) * (s[i] - nu[i]);
      dirmean += (s[i] - nu[i]) * dist.atoms()[i];
    }
    if (fw_gap <= 1e-11 * std::max(1.0, std::abs(fval))) break;
    // exact line search: f(nu + t dir) = f + t fw_gap - t^2 ||dirmean||^2
    const double denom = dirmean.squaredNorm();
    const double t = denom > 0.0 ? std::min(1.0, fw_gap / (2.0 * denom)) : 1.0;
    for (std::size_t i = 0; i < k; ++i) nu[i] += t * (s[i] - nu[i]);
    fval = var_of(nu);
  }
  rep.maximin = std::max(fval, var_of(inner.nu.weights()));
  rep.gap = rep.minimax - rep.maximin;

  Eigen::VectorXd nu_mean = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < k; ++i) nu_mean += inner.nu.weights()[i] * dist.atoms()[i];
  rep.self_consistent = (x - nu_mean).norm() <= 1e-6;

  rep.recovered_epsilon = loss_variance(m, x);
  if (rep.recovered_epsilon > 0.0) {
    rep.recovered_lambda_mv = radius / (2.0 * std::sqrt(rep.recovered_epsilon));
    const double gs = gamma_star(m);
    rep.admissible = gs == 0.0 || rep.recovered_lambda_mv <= 1.0 / gs;
  } else {
    rep.admissible = true;
  }
  return rep;
}

}  // namespace drmean
