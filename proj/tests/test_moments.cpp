#include <doctest.h>

#include <cmath>

#include "drmean/models.hpp"
#include "drmean/moments.hpp"
#include "drmean/parallel.hpp"
#include "drmean/rng.hpp"
#include "helpers.hpp"

using namespace drmean;

namespace {
std::vector<Eigen::VectorXd> scalar_data(std::initializer_list<double> xs) {
  std::vector<Eigen::VectorXd> out;
  for (double x : xs) out.push_back(Eigen::VectorXd::Constant(1, x));
  return out;
}
}  // namespace

TEST_CASE("plug-in moments of small samples") {
  const MomentSet a = moments_from_sample(scalar_data({0, 1}));
  CHECK(a.mean(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(a.m2 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(a.m3 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(a.m4 == doctest::Approx(0.0625).epsilon(1e-14));

  const MomentSet b = moments_from_sample(scalar_data({1, 1, 1}));
  CHECK(b.mean(0) == 1.0);
  CHECK(b.m2 == 0.0);
  CHECK(b.m3 == 0.0);
  CHECK(b.m4 == 0.0);
  CHECK(b.covariance(0, 0) == 0.0);

  // values from direct enumeration of sum (x_i - xbar)^k / n
  const MomentSet c = moments_from_sample(scalar_data({0, 0, 0, 1}));
  CHECK(c.mean(0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(c.m2 == doctest::Approx(0.1875).epsilon(1e-14));
  CHECK(c.m3 == doctest::Approx(0.09375).epsilon(1e-14));
  CHECK(c.m4 == doctest::Approx(21.0 / 256.0).epsilon(1e-14));  // 0.08203125
}

TEST_CASE("moment errors") {
  CHECK_THROWS_WITH_AS(moments_from_sample(std::vector<Eigen::VectorXd>{}),
                       "empty sample", std::invalid_argument);
  std::vector<Eigen::VectorXd> bad;
  bad.push_back(Eigen::VectorXd::Zero(1));
  bad.push_back(Eigen::VectorXd::Zero(2));
  CHECK_THROWS_AS(moments_from_sample(bad), std::invalid_argument);
}

TEST_CASE("discrete distribution construction") {
  CHECK_THROWS_AS(DiscreteDistribution({0.0, 1.0}, {0.6, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution({0.0, 1.0}, {1.2, -0.2}), std::invalid_argument);

  // duplicates merge with summed weights
  const DiscreteDistribution d({0.0, 1.0, 0.0}, {0.25, 0.25, 0.5});
  CHECK(d.size() == 2);
  CHECK(d.weights()[0] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("discrete moments match sample moments and closed forms") {
  const DiscreteDistribution uniform01({0.0, 1.0}, {0.5, 0.5});
  const MomentSet md = moments_from_discrete(uniform01);
  const MomentSet ms = moments_from_sample(scalar_data({0, 1}));
  CHECK(md.mean(0) == doctest::Approx(ms.mean(0)).epsilon(1e-14));
  CHECK(md.m2 == doctest::Approx(ms.m2).epsilon(1e-14));
  CHECK(md.m4 == doctest::Approx(ms.m4).epsilon(1e-14));
  CHECK(md.alpha == doctest::Approx(ms.alpha).epsilon(1e-14));
  CHECK(md.zeta_minus(0) == doctest::Approx(ms.zeta_minus(0)).epsilon(1e-14));

  // Bernoulli(0.25): m_k = q p^k + p q^k with p = P(X = 1)
  const DiscreteDistribution bern({0.0, 1.0}, {0.75, 0.25});
  const MomentSet mb = moments_from_discrete(bern);
  CHECK(mb.m2 == doctest::Approx(0.1875).epsilon(1e-14));
  CHECK(mb.m4 == doctest::Approx(0.08203125).epsilon(1e-14));  // = pq(1 - 3pq)

  CHECK(kurtosis_gap(moments_from_discrete(DiscreteDistribution({0.0, 1.0}, {0.5, 0.5}))) ==
        doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("kurtosis gap closed forms") {
  MomentSet gauss;
  gauss.mean = Eigen::VectorXd::Zero(1);
  gauss.covariance = Eigen::MatrixXd::Constant(1, 1, 1.0);
  gauss.zeta_minus = Eigen::VectorXd::Zero(1);
  gauss.m2 = 1.0;
  gauss.m4 = 3.0;
  CHECK(kurtosis_gap(gauss) == 0.0);

  MomentSet unif = gauss;
  unif.m2 = 1.0 / 12.0;
  unif.m4 = 1.0 / 80.0;
  CHECK(kurtosis_gap(unif) == doctest::Approx(1.0 / 120.0).epsilon(1e-12));

  MomentSet twod;
  twod.mean = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_WITH_AS(kurtosis_gap(twod), "scalar only", std::invalid_argument);
}

TEST_CASE("analytic mixture moments") {
  const MomentSet single = analytic_mixture_moments(std::vector<double>{2.0},
                                                    std::vector<double>{0.7},
                                                    std::vector<double>{1.0});
  CHECK(single.mean(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(single.m2 == doctest::Approx(0.49).epsilon(1e-14));
  CHECK(single.m3 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(single.m4 == doctest::Approx(3.0 * 0.49 * 0.49).epsilon(1e-14));

  const std::vector<double> means{3.0, 0.1}, sigmas{0.5, 1.7}, props{0.3, 0.7};
  const MomentSet mix = analytic_mixture_moments(means, sigmas, props);
  CHECK(mix.mean(0) == doctest::Approx(0.97).epsilon(1e-12));
  CHECK(mix.m2 == doctest::Approx(3.8641).epsilon(1e-12));
  CHECK(mix.m3 == doctest::Approx(-2.774604).epsilon(1e-9));
  CHECK(mix.m4 == doctest::Approx(34.13289057).epsilon(1e-9));
  CHECK(kurtosis_gap(mix) == doctest::Approx(10.66091586).epsilon(1e-9));

  CHECK_THROWS_AS(analytic_mixture_moments(means, sigmas, std::vector<double>{0.3, 0.3}),
                  std::invalid_argument);
}

TEST_CASE("representation equivalence on random samples") {
  Rng rng(2024, 0, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 3);
    std::vector<Eigen::VectorXd> data;
    const int n = 4 + static_cast<int>(rng.next_u64() % 12);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd x(d);
      // coarse grid so duplicates actually occur
      for (int c = 0; c < d; ++c) x(c) = std::round(rng.normal(0.0, 1.0) * 2.0) / 2.0;
      data.push_back(x);
    }
    const MomentSet ms = moments_from_sample(data);

    std::vector<double> w(data.size(), 1.0 / static_cast<double>(data.size()));
    const MomentSet md = moments_from_discrete(DiscreteDistribution(data, w));

    CHECK((ms.mean - md.mean).norm() <= 1e-12);
    CHECK((ms.covariance - md.covariance).norm() <= 1e-12);
    CHECK((ms.zeta_minus - md.zeta_minus).norm() <= 1e-12);
    CHECK(ms.alpha == doctest::Approx(md.alpha).epsilon(1e-12));
    CHECK(ms.m2 == doctest::Approx(md.m2).epsilon(1e-12));
    CHECK(ms.m3 - md.m3 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ms.m4 == doctest::Approx(md.m4).epsilon(1e-12));
  }
}

TEST_CASE("shift covariance and scale law") {
  Rng rng(7, 0, 0);
  std::vector<double> xs;
  for (int i = 0; i < 40; ++i) xs.push_back(rng.exponential(0.8));
  const MomentSet base = moments_from_sample(std::span<const double>(xs));

  std::vector<double> shifted = xs;
  for (auto& x : shifted) x += 3.25;
  const MomentSet sh = moments_from_sample(std::span<const double>(shifted));
  CHECK(sh.mean(0) == doctest::Approx(base.mean(0) + 3.25).epsilon(1e-10));
  CHECK(sh.m2 == doctest::Approx(base.m2).epsilon(1e-10));
  CHECK(sh.m3 == doctest::Approx(base.m3).epsilon(1e-10));
  CHECK(sh.m4 == doctest::Approx(base.m4).epsilon(1e-10));
  CHECK(sh.covariance(0, 0) == doctest::Approx(base.covariance(0, 0)).epsilon(1e-10));
  CHECK(kurtosis_gap(sh) == doctest::Approx(kurtosis_gap(base)).epsilon(1e-10));

  const double s = 1.75;
  std::vector<double> scaled = xs;
  for (auto& x : scaled) x *= s;
  const MomentSet sc = moments_from_sample(std::span<const double>(scaled));
  CHECK(sc.m2 == doctest::Approx(base.m2 * s * s).epsilon(1e-10));
  CHECK(sc.m3 == doctest::Approx(base.m3 * s * s * s).epsilon(1e-10));
  CHECK(sc.m4 == doctest::Approx(base.m4 * s * s * s * s).epsilon(1e-10));
  CHECK(kurtosis_gap(sc) ==
        doctest::Approx(kurtosis_gap(base) * s * s * s * s).epsilon(1e-10));
}

TEST_CASE("zeta computed two ways agrees") {
  Rng rng(99, 0, 0);
  for (int rep = 0; rep < 25; ++rep) {
    const auto dist = testutil::random_scalar_instance(rng, 2, 8);
    const MomentSet m = moments_from_discrete(dist);
    // expanded polynomial in central moments: zeta = 2 m3 + 4 m2 mean
    const double expanded = 2.0 * m.m3 + 4.0 * m.m2 * m.mean(0);
    CHECK(m.zeta_minus(0) ==
          doctest::Approx(expanded).epsilon(1e-10));
  }
}

TEST_CASE("m4 >= m2^2 and covariance symmetric psd") {
  Rng rng(123, 0, 0);
  for (int rep = 0; rep < 25; ++rep) {
    const auto dist = testutil::random_instance(rng, 2, 9, 3);
    const MomentSet m = moments_from_discrete(dist);
    if (m.dim() == 1) CHECK(m.m4 + 1e-14 >= m.m2 * m.m2);
    CHECK((m.covariance - m.covariance.transpose()).norm() <=
          1e-12 * (1.0 + m.covariance.norm()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.covariance);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * (1.0 + m.covariance.norm()));
  }
}

TEST_CASE("mixture moments agree with a large simulated sample") {
  const std::vector<double> means{3.0, 0.1}, sigmas{0.5, 1.7}, props{0.3, 0.7};
  const Model model = Model::mixture(means, sigmas, props);
  const MomentSet analytic = analytic_mixture_moments(means, sigmas, props);

  const std::int64_t n = 1'000'000;
  // accumulate raw power sums deterministically
  const auto sums = blocked_trial_sums(n, 5, 0, [&](std::int64_t t, std::span<double> acc) {
    Rng rng(555, static_cast<std::uint64_t>(t), 0);
    const double x = model.sample(rng);
    double p = 1.0;
    for (int k = 0; k < 5; ++k) {
      acc[static_cast<std::size_t>(k)] += p;
      p *= x;
    }
  });
  const double nn = static_cast<double>(n);
  const double mean = sums[1] / nn;
  const double r2 = sums[2] / nn, r3 = sums[3] / nn, r4 = sums[4] / nn;
  const double m2 = r2 - mean * mean;
  const double m3 = r3 - 3.0 * r2 * mean + 2.0 * mean * mean * mean;
  const double m4 = r4 - 4.0 * r3 * mean + 6.0 * r2 * mean * mean -
                    3.0 * mean * mean * mean * mean;

  // three Monte Carlo standard errors, conservatively sized from the
  // population's higher moments
  const double se_mean = std::sqrt(analytic.m2 / nn);
  CHECK(std::abs(mean - analytic.mean(0)) <= 3.0 * se_mean);
  const double se_m2 = std::sqrt((analytic.m4 - analytic.m2 * analytic.m2) / nn);
  CHECK(std::abs(m2 - analytic.m2) <= 3.0 * se_m2);
  CHECK(std::abs(m3 - analytic.m3) <= 0.05);
  CHECK(std::abs(m4 - analytic.m4) <= 0.6);
}
