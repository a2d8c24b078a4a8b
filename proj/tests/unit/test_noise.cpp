#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "blic/noise.hpp"
#include "blic/rng.hpp"

namespace blic {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(LogEmission, SpecExamples) {
  const EmissionParams unit({{0.0, 1.0}, {1.0, 1.0}});
  EXPECT_NEAR(log_emission(0.0, 0, unit), -0.5 * std::log(2 * kPi), 1e-15);
  const EmissionParams phi({{0.0, 0.5}, {2.0, 0.3}});
  EXPECT_NEAR(log_emission(2.0, 1, phi), -0.5 * std::log(2 * kPi * 0.09), 1e-14);
  EXPECT_NEAR(log_emission(1.0, 0, phi), -0.5 * std::log(2 * kPi * 0.25) - 2.0, 1e-14);
}

TEST(LogEmission, IntegratesToOne) {
  for (double sd : {0.2, 0.39, 1.3}) {
    // composite Simpson over +-12 sd
    const int n = 20000;
    const double a = -12 * sd, b = 12 * sd, h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
      s += w * std::exp(log_normal_density(a + i * h, 0.0, sd));
    }
    EXPECT_NEAR(s * h / 3, 1.0, 1e-8);
  }
}

TEST(EmissionParams, Validation) {
  EXPECT_THROW(EmissionParams({{0.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(EmissionParams({{0.0, 1.0}, {1.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(EmissionParams({{1.0, 1.0}, {0.0, 1.0}}), std::invalid_argument);
  const auto phi = EmissionParams::integer_means(3, 0.5);
  EXPECT_EQ(phi.num_colors(), 3);
  EXPECT_EQ(phi[2], (GaussianComponent{2.0, 0.5}));
}

TEST(MarginalMap, SpecExamples) {
  const auto phi = EmissionParams::integer_means(2, 0.39);
  const std::vector<double> y{0.4, 0.5, 0.6};
  EXPECT_EQ(marginal_map(y, phi), (std::vector<int>{0, 0, 1}));
}

TEST(MarginalMap, RoundsToNearestMeanClipped) {
  const auto phi = EmissionParams::integer_means(4, 0.7);
  const std::vector<double> y{-3.0, 0.2, 0.7, 1.49, 2.51, 3.2, 9.0};
  EXPECT_EQ(marginal_map(y, phi), (std::vector<int>{0, 0, 1, 1, 3, 3, 3}));
}

TEST(MarginalMap, MisclassificationAnalytic) {
  const auto phi = EmissionParams::integer_means(2, 0.39);
  const double expected = standard_normal_cdf(-0.5 / 0.39);
  EXPECT_NEAR(marginal_map_error(phi), expected, 1e-15);
  EXPECT_NEAR(expected, 0.0999, 5e-4);
}

TEST(MarginalMap, MisclassificationMonteCarlo) {
  const auto phi = EmissionParams::integer_means(2, 0.39);
  Rng rng(21);
  const std::size_t n = 100000;
  std::vector<int> x(n);
  for (int& v : x) v = rng.uniform_int(2);
  const auto y = sample_emission(x, phi, rng);
  const auto m = marginal_map(y, phi);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < n; ++i) wrong += m[i] != x[i];
  EXPECT_NEAR(static_cast<double>(wrong) / n, marginal_map_error(phi), 0.005);
}

TEST(SampleEmission, DegenerateSdIsExact) {
  const EmissionParams phi({{0.0, 1e-12}, {1.0, 1e-12}, {2.5, 1e-12}});
  Rng rng(1);
  const std::vector<int> x{0, 2, 1, 1, 0};
  const auto y = sample_emission(x, phi, rng);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], phi[x[i]].mean, 1e-10);
}

TEST(SampleEmission, Deterministic) {
  const auto phi = EmissionParams::integer_means(3, 0.5);
  const std::vector<int> x{0, 1, 2, 0, 1, 2};
  Rng a(77), b(77);
  EXPECT_EQ(sample_emission(x, phi, a), sample_emission(x, phi, b));
}

TEST(SampleEmission, MeanWithinClt) {
  const auto phi = EmissionParams::integer_means(2, 0.39);
  Rng rng(4);
  const std::vector<int> x(100000, 0);
  const auto y = sample_emission(x, phi, rng);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= y.size();
  EXPECT_LT(std::abs(mean), 4 * 0.39 / std::sqrt(1e5));
}

TEST(NormalCdf, KnownValues) {
  EXPECT_DOUBLE_EQ(standard_normal_cdf(0.0), 0.5);
  EXPECT_NEAR(standard_normal_cdf(1.959963984540054), 0.975, 1e-12);
}

}  // namespace
}  // namespace blic
