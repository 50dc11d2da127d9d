#include "drmean/estimator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace drmean {

namespace {

constexpr double kEigCutoffRel = 1e-10;  // eigenvalues below this times ||Sigma|| are zero

struct SpectralView {
  Eigen::VectorXd eigs;  // ascending, clamped at the cutoff
  Eigen::MatrixXd basis;
};

SpectralView spectrum(const MomentSet& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.covariance);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("covariance eigendecomposition failed");
  SpectralView sv{es.eigenvalues(), es.eigenvectors()};
  const double cutoff = kEigCutoffRel * std::max(1e-300, sv.eigs.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < sv.eigs.size(); ++i)
    if (sv.eigs(i) < cutoff) sv.eigs(i) = 0.0;
  return sv;
}

}  // namespace

double loss_mean(const MomentSet& m, const Eigen::VectorXd& xhat) {
  return m.covariance.trace() + (xhat - m.mean).squaredNorm();
}

double loss_variance(const MomentSet& m, const Eigen::VectorXd& xhat) {
  return m.alpha - 2.0 * m.zeta_minus.dot(xhat) +
         4.0 * xhat.dot(m.covariance * xhat);
}

Eigen::VectorXd estimator_limit(const MomentSet& m) {
  const SpectralView sv = spectrum(m);
  const Eigen::VectorXd zu = sv.basis.transpose() * m.zeta_minus;
  const Eigen::VectorXd mu = sv.basis.transpose() * m.mean;
  const double ztol = 1e-8 * (1.0 + m.zeta_minus.norm());
  Eigen::VectorXd out(zu.size());
  for (Eigen::Index i = 0; i < zu.size(); ++i) {
    if (sv.eigs(i) > 0.0) {
      out(i) = zu(i) / (4.0 * sv.eigs(i));
    } else {
      if (std::abs(zu(i)) > ztol)
        throw std::domain_error("degenerate covariance with nonzero third moment");
      out(i) = mu(i);
    }
  }
  return sv.basis * out;
}

double gamma_star(const MomentSet& m) {
  const Eigen::VectorXd limit = estimator_limit(m);
  return 2.0 * ((limit - m.mean).squaredNorm() + m.covariance.trace());
}

EstimatorResult population_estimator(const MomentSet& m, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  const Eigen::Index d = m.dim();
  EstimatorResult r;
  r.lambda = lambda;
  const Eigen::MatrixXd lhs =
      Eigen::MatrixXd::Identity(d, d) + 4.0 * lambda * m.covariance;
  r.estimate = lhs.ldlt().solve(m.mean + lambda * m.zeta_minus);
  r.gamma_star = gamma_star(m);
  r.admissible = r.gamma_star == 0.0 || lambda <= 1.0 / r.gamma_star;
  if (d == 1) {
    DirectionBias b;
    b.sigma = m.m2;
    b.rotated_mean = m.mean(0);
    b.skew_term = m.m2 > 0.0 ? 2.0 * lambda * m.m3 / (1.0 + 4.0 * lambda * m.m2) : 0.0;
    b.cross_term = 0.0;
    r.bias_terms.push_back(b);
  }
  return r;
}

EstimatorResult population_estimator(const DiscreteDistribution& dist, double lambda) {
  const MomentSet m = moments_from_discrete(dist);
  EstimatorResult r = population_estimator(m, lambda);
  if (dist.dim() > 1) r.bias_terms = eigen_decomposed_estimator(dist, lambda);
  return r;
}

double scalar_estimator(double mean, double m2, double m3, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  if (m2 < 0.0) throw std::invalid_argument("m2 must be nonnegative");
  if (m2 == 0.0) {
    if (m3 != 0.0) throw std::domain_error("inconsistent moments");
    return mean;
  }
  return mean + lambda * m3 / (1.0 + 2.0 * lambda * m2);
}

std::vector<DirectionBias> eigen_decomposed_estimator(const DiscreteDistribution& dist,
                                                      double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  const MomentSet m = moments_from_discrete(dist);
  const SpectralView sv = spectrum(m);
  const Eigen::Index d = m.dim();
  const std::size_t k = dist.size();

  // rotated atoms and their weighted moments
  std::vector<Eigen::VectorXd> y(k);
  for (std::size_t j = 0; j < k; ++j) y[j] = sv.basis.transpose() * dist.atoms()[j];
  const Eigen::VectorXd mu = sv.basis.transpose() * m.mean;

  Eigen::VectorXd e_sq = Eigen::VectorXd::Zero(d);   // E y_k^2
  Eigen::MatrixXd e_sq_lin(d, d);                    // E[y_k^2 y_i]
  e_sq_lin.setZero();
  Eigen::VectorXd m3u = Eigen::VectorXd::Zero(d);
  for (std::size_t j = 0; j < k; ++j) {
    const double w = dist.weights()[j];
    for (Eigen::Index kk = 0; kk < d; ++kk) {
      const double sq = y[j](kk) * y[j](kk);
      e_sq(kk) += w * sq;
      for (Eigen::Index i = 0; i < d; ++i) e_sq_lin(kk, i) += w * sq * y[j](i);
    }
    for (Eigen::Index i = 0; i < d; ++i) {
      const double c = y[j](i) - mu(i);
      m3u(i) += w * c * c * c;
    }
  }

  std::vector<DirectionBias> out(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    DirectionBias& b = out[static_cast<std::size_t>(i)];
    b.sigma = sv.eigs(i);
    b.rotated_mean = mu(i);
    if (b.sigma == 0.0) continue;  // zero-variance directions carry zero bias
    const double scale = 2.0 * lambda / (1.0 + 4.0 * lambda * b.sigma);
    b.skew_term = scale * m3u(i);
    double cross = 0.0;
    for (Eigen::Index kk = 0; kk < d; ++kk) {
      if (kk == i) continue;
      cross += e_sq_lin(kk, i) - e_sq(kk) * mu(i);
    }
    b.cross_term = scale * cross;
  }
  return out;
}

Eigen::VectorXd reassemble_estimate(const MomentSet& m,
                                    const std::vector<DirectionBias>& terms) {
  const SpectralView sv = spectrum(m);
  Eigen::VectorXd u(static_cast<Eigen::Index>(terms.size()));
  for (std::size_t i = 0; i < terms.size(); ++i)
    u(static_cast<Eigen::Index>(i)) =
        terms[i].rotated_mean + terms[i].skew_term + terms[i].cross_term;
  return sv.basis * u;
}

double reweight_density(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat,
                        double lambda, const MomentSet& m) {
  const double z = (x - xhat).squaredNorm();
  return 1.0 + 2.0 * lambda * (z - loss_mean(m, xhat));
}

double worstcase_density(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat,
                         double lambda_md, const MomentSet& m) {
  const double var = loss_variance(m, xhat);
  if (var <= 0.0) throw std::domain_error("constant loss; worst case undefined");
  const double z = (x - xhat).squaredNorm();
  return lambda_md * (z - loss_mean(m, xhat)) / std::sqrt(var) + 1.0;
}

double multiplier_relation(double lambda_mv, double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
  return 2.0 * lambda_mv * std::sqrt(epsilon);
}

EstimatorResult dual_solve(const MomentSet& m, double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
  const double tol = 1e-9 * std::max(1.0, epsilon);

  const double at_mean = loss_variance(m, m.mean);
  if (at_mean <= epsilon + tol) {
    EstimatorResult r = population_estimator(m, 0.0);
    r.lambda_md = 0.0;
    return r;
  }

  const double infimum = loss_variance(m, estimator_limit(m));
  if (epsilon < infimum - tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "infeasible risk level: achievable infimum is " << infimum;
    throw std::runtime_error(msg.str());
  }

  auto constraint = [&](double lam) {
    return loss_variance(m, population_estimator(m, lam).estimate);
  };

  double hi = 1.0;
  int doublings = 0;
  while (constraint(hi) > epsilon && doublings < 60) {
    hi *= 2.0;
    ++doublings;
  }

  double lo = doublings == 0 ? 0.0 : hi / 2.0;
  double mid = hi;
  for (int it = 0; it < 500; ++it) {
    mid = 0.5 * (lo + hi);
    const double v = constraint(mid);
    if (std::abs(v - epsilon) <= tol) break;
    (v > epsilon ? lo : hi) = mid;
  }

  EstimatorResult r = population_estimator(m, mid);
  r.lambda_md = multiplier_relation(mid, epsilon);
  return r;
}

double grad_chi2_expectation(const MomentSet& m, double lambda) {
  if (m.dim() != 1) throw std::invalid_argument("scalar only");
  if (m.m2 <= 0.0) throw std::invalid_argument("m2 must be positive");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  const double gs = gamma_star(m);
  if (gs > 0.0 && lambda > 1.0 / (2.0 * gs))
    throw std::domain_error("outside admissible diagnostic range");
  return lambda * lambda * m.m3 / (1.0 + lambda * m.m2);
}

}  // namespace drmean
