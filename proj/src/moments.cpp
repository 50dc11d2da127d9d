#include "drmean/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace drmean {

namespace {

MomentSet weighted_moments(const std::vector<Eigen::VectorXd>& atoms,
                           const std::vector<double>& weights) {
  const Eigen::Index d = atoms[0].size();
  MomentSet m;
  m.mean = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < atoms.size(); ++i) m.mean += weights[i] * atoms[i];

  m.covariance = Eigen::MatrixXd::Zero(d, d);
  double e_norm2 = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Eigen::VectorXd c = atoms[i] - m.mean;
    m.covariance += weights[i] * (c * c.transpose());
    e_norm2 += weights[i] * atoms[i].squaredNorm();
  }

  m.zeta_minus = Eigen::VectorXd::Zero(d);
  m.alpha = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double n2 = atoms[i].squaredNorm();
    m.zeta_minus += 2.0 * weights[i] * n2 * atoms[i];
    m.alpha += weights[i] * (n2 - e_norm2) * (n2 - e_norm2);
  }
  m.zeta_minus -= 2.0 * e_norm2 * m.mean;

  if (d == 1) {
    const double mu = m.mean(0);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const double c = atoms[i](0) - mu;
      m.m2 += weights[i] * c * c;
      m.m3 += weights[i] * c * c * c;
      m.m4 += weights[i] * c * c * c * c;
    }
  }
  return m;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<Eigen::VectorXd> atoms,
                                           std::vector<double> weights) {
  if (atoms.empty()) throw std::invalid_argument("empty support");
  if (atoms.size() != weights.size())
    throw std::invalid_argument("atoms and weights must have equal length");
  const Eigen::Index d = atoms[0].size();
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].size() != d) throw std::invalid_argument("dimension mismatch");
    if (weights[i] < 0.0) throw std::invalid_argument("negative weight");
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("weights must sum to 1");

  // merge exact duplicates, summing their weights
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    bool merged = false;
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
      if (atoms_[j] == atoms[i]) {
        weights_[j] += weights[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      atoms_.push_back(std::move(atoms[i]));
      weights_.push_back(weights[i]);
    }
  }
}

DiscreteDistribution::DiscreteDistribution(std::initializer_list<double> atoms,
                                           std::initializer_list<double> weights)
    : DiscreteDistribution(
          [&] {
            std::vector<Eigen::VectorXd> a;
            a.reserve(atoms.size());
            for (double x : atoms) a.push_back(Eigen::VectorXd::Constant(1, x));
            return a;
          }(),
          std::vector<double>(weights)) {}

MomentSet moments_from_sample(const std::vector<Eigen::VectorXd>& data) {
  if (data.empty()) throw std::invalid_argument("empty sample");
  const Eigen::Index d = data[0].size();
  for (const auto& x : data)
    if (x.size() != d) throw std::invalid_argument("dimension mismatch");
  const std::vector<double> w(data.size(), 1.0 / static_cast<double>(data.size()));
  return weighted_moments(data, w);
}

MomentSet moments_from_sample(std::span<const double> data) {
  if (data.empty()) throw std::invalid_argument("empty sample");
  std::vector<Eigen::VectorXd> v;
  v.reserve(data.size());
  for (double x : data) v.push_back(Eigen::VectorXd::Constant(1, x));
  return moments_from_sample(v);
}

MomentSet moments_from_discrete(const DiscreteDistribution& dist) {
  return weighted_moments(dist.atoms(), dist.weights());
}

double kurtosis_gap(const MomentSet& m) {
  if (m.dim() != 1) throw std::invalid_argument("scalar only");
  return 3.0 * m.m2 * m.m2 - m.m4;
}

MomentSet analytic_mixture_moments(std::span<const double> means,
                                   std::span<const double> sigmas,
                                   std::span<const double> props) {
  if (means.empty() || means.size() != sigmas.size() || means.size() != props.size())
    throw std::invalid_argument("component lists must be nonempty and of equal length");
  double psum = 0.0;
  for (std::size_t i = 0; i < props.size(); ++i) {
    if (props[i] < 0.0) throw std::invalid_argument("invalid proportions");
    if (sigmas[i] <= 0.0) throw std::invalid_argument("sigmas must be positive");
    psum += props[i];
  }
  if (std::abs(psum - 1.0) > 1e-12) throw std::invalid_argument("invalid proportions");

  MomentSet m;
  double mu = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) mu += props[i] * means[i];
  for (std::size_t i = 0; i < means.size(); ++i) {
    const double dlt = means[i] - mu;
    const double s2 = sigmas[i] * sigmas[i];
    m.m2 += props[i] * (s2 + dlt * dlt);
    m.m3 += props[i] * (3.0 * s2 * dlt + dlt * dlt * dlt);
    m.m4 += props[i] * (3.0 * s2 * s2 + 6.0 * s2 * dlt * dlt + dlt * dlt * dlt * dlt);
  }
  m.mean = Eigen::VectorXd::Constant(1, mu);
  m.covariance = Eigen::MatrixXd::Constant(1, 1, m.m2);
  // scalar identities: zeta = 2 m3 + 4 m2 mu, alpha = m4 - m2^2 + 4 mu m3 + 4 mu^2 m2
  m.zeta_minus = Eigen::VectorXd::Constant(1, 2.0 * m.m3 + 4.0 * m.m2 * mu);
  m.alpha = m.m4 - m.m2 * m.m2 + 4.0 * mu * m.m3 + 4.0 * mu * mu * m.m2;
  return m;
}

}  // namespace drmean
