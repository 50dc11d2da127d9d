#pragma once

#include <string>
#include <variant>
#include <vector>

#include "drmean/moments.hpp"
#include "drmean/rng.hpp"

namespace drmean {

// Scalar generative model with analytic moments (raw up to order 4) and a
// sampler. The tags mirror the JSON config schema.
class Model {
 public:
  static Model gaussian(double mean, double sigma);
  static Model mixture(std::vector<double> means, std::vector<double> sigmas,
                       std::vector<double> props);
  static Model uniform(double a, double b);
  static Model bernoulli(double p);
  static Model exponential(double rate);

  double sample(Rng& rng) const;
  double mean() const;
  double raw_moment(int k) const;  // E X^k, 1 <= k <= 4
  double m2() const;
  double m3() const;
  double m4() const;
  double kurtosis_gap() const { return 3.0 * m2() * m2() - m4(); }

  // Scalar MomentSet with zeta_minus and alpha filled from the raw moments.
  MomentSet moments() const;

  const std::string& tag() const { return tag_; }

  struct Gaussian {
    double mean, sigma;
  };
  struct Mixture {
    std::vector<double> means, sigmas, props;
  };
  struct Uniform {
    double a, b;
  };
  struct Bernoulli {
    double p;
  };
  struct Exponential {
    double rate;
  };

  using Impl = std::variant<Gaussian, Mixture, Uniform, Bernoulli, Exponential>;
  const Impl& impl() const { return impl_; }

 private:
  Model(std::string tag, Impl impl) : tag_(std::move(tag)), impl_(std::move(impl)) {}

  std::string tag_;
  Impl impl_;
};

}  // namespace drmean
