#include "drmean/models.hpp"

#include <cmath>
#include <stdexcept>

namespace drmean {

namespace {

double gaussian_raw(double mu, double sigma, int k) {
  const double s2 = sigma * sigma;
  switch (k) {
    case 1: return mu;
    case 2: return mu * mu + s2;
    case 3: return mu * mu * mu + 3.0 * mu * s2;
    case 4: return mu * mu * mu * mu + 6.0 * mu * mu * s2 + 3.0 * s2 * s2;
    default: throw std::invalid_argument("raw moment order out of range");
  }
}

}  // namespace

Model Model::gaussian(double mean, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
  return Model("gaussian", Gaussian{mean, sigma});
}

Model Model::mixture(std::vector<double> means, std::vector<double> sigmas,
                     std::vector<double> props) {
  // reuse the validation in analytic_mixture_moments
  analytic_mixture_moments(means, sigmas, props);
  return Model("mixture", Mixture{std::move(means), std::move(sigmas), std::move(props)});
}

Model Model::uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("uniform requires a < b");
  return Model("uniform", Uniform{a, b});
}

Model Model::bernoulli(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
  return Model("bernoulli", Bernoulli{p});
}

Model Model::exponential(double rate) {
  if (rate <= 0.0) throw std::invalid_argument("rate must be positive");
  return Model("exponential", Exponential{rate});
}

double Model::sample(Rng& rng) const {
  return std::visit(
      [&rng](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return rng.normal(m.mean, m.sigma);
        } else if constexpr (std::is_same_v<T, Mixture>) {
          double u = rng.next_double();
          std::size_t c = m.props.size() - 1;
          for (std::size_t i = 0; i < m.props.size(); ++i) {
            if (u < m.props[i]) {
              c = i;
              break;
            }
            u -= m.props[i];
          }
          return rng.normal(m.means[c], m.sigmas[c]);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return rng.uniform(m.a, m.b);
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          return rng.bernoulli(m.p) ? 1.0 : 0.0;
        } else {
          return rng.exponential(m.rate);
        }
      },
      impl_);
}

double Model::raw_moment(int k) const {
  if (k < 1 || k > 4) throw std::invalid_argument("raw moment order out of range");
  return std::visit(
      [k](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return gaussian_raw(m.mean, m.sigma, k);
        } else if constexpr (std::is_same_v<T, Mixture>) {
          double r = 0.0;
          for (std::size_t i = 0; i < m.props.size(); ++i)
            r += m.props[i] * gaussian_raw(m.means[i], m.sigmas[i], k);
          return r;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          double num = 0.0;  // (b^{k+1} - a^{k+1}) / ((k+1)(b-a))
          for (int j = 0; j <= k; ++j)
            num += std::pow(m.b, j) * std::pow(m.a, k - j);
          return num / (k + 1);
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          return m.p;
        } else {
          double f = 1.0;
          for (int j = 2; j <= k; ++j) f *= j;
          return f / std::pow(m.rate, k);
        }
      },
      impl_);
}

double Model::mean() const { return raw_moment(1); }

double Model::m2() const {
  const double r1 = raw_moment(1);
  return raw_moment(2) - r1 * r1;
}

double Model::m3() const {
  const double r1 = raw_moment(1);
  return raw_moment(3) - 3.0 * raw_moment(2) * r1 + 2.0 * r1 * r1 * r1;
}

double Model::m4() const {
  const double r1 = raw_moment(1);
  return raw_moment(4) - 4.0 * raw_moment(3) * r1 + 6.0 * raw_moment(2) * r1 * r1 -
         3.0 * r1 * r1 * r1 * r1;
}

MomentSet Model::moments() const {
  MomentSet m;
  const double mu = mean();
  m.mean = Eigen::VectorXd::Constant(1, mu);
  m.m2 = m2();
  m.m3 = m3();
  m.m4 = m4();
  m.covariance = Eigen::MatrixXd::Constant(1, 1, m.m2);
  m.zeta_minus = Eigen::VectorXd::Constant(1, 2.0 * (raw_moment(3) - raw_moment(2) * mu));
  const double r2 = raw_moment(2);
  m.alpha = raw_moment(4) - r2 * r2;
  return m;
}

}  // namespace drmean
