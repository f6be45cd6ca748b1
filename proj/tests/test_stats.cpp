// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nstego/error.hpp"
#include "nstego/random.hpp"
#include "nstego/stats.hpp"

namespace nstego {
namespace {

TEST(NormalCdf, ReferenceValues) {
  EXPECT_DOUBLE_EQ(standard_normal_cdf(0.0), 0.5);
  EXPECT_NEAR(standard_normal_cdf(-1.3), 0.09680048458561036, 1e-15);
  EXPECT_NEAR(standard_normal_cdf(0.7), 0.758036347776927, 1e-15);
  EXPECT_NEAR(standard_normal_cdf(-8.0) / 6.22096057427174e-16, 1.0, 1e-10);
}

TEST(Kolmogorov, MatchesReferenceDistribution) {
  // P(K > x), from an independent implementation of the limiting law.
  const std::vector<std::pair<double, double>> ref{
      {0.3, 0.9999906941986655},  {0.5, 0.9639452436648751},   {0.8, 0.5441424115741981},
      {1.0, 0.26999967167735456}, {1.18, 0.1234538094297657},  {1.36, 0.049485876755377876},
      {2.0, 0.0006709252557796953}};
  for (auto [x, p] : ref) EXPECT_NEAR(kolmogorov_survival(x), p, 1e-12) << x;
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
  EXPECT_LT(kolmogorov_survival(10.0), 1e-80);
}

std::vector<double> logistic_quantiles(double scale) {
  std::vector<double> x(2000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = (static_cast<double>(i) + 0.5) / 2000.0;
    x[i] = scale * std::log(u / (1 - u));
  }
  return x;
}

TEST(KsTest, ReferenceStatistics) {
  const auto a = gaussianity_test(logistic_quantiles(0.55));
  EXPECT_NEAR(a.statistic, 0.023433972510580686, 1e-12);
  EXPECT_NEAR(a.p_value, 0.21940635223451466, 1e-9);
  const auto b = gaussianity_test(logistic_quantiles(0.6));
  EXPECT_NEAR(b.statistic, 0.011990527585906591, 1e-12);
  EXPECT_NEAR(b.p_value, 0.9346280122100471, 1e-9);
}

TEST(KsTest, RejectsUniformSamples) {
  Rng r(1);
  std::vector<double> u(10000);
  for (auto& v : u) v = r.uniform();
  EXPECT_LT(gaussianity_test(u).p_value, 1e-6);
}

TEST(KsTest, NeedsEnoughSamples) {
  EXPECT_THROW(gaussianity_test(std::vector<double>(999, 0.0)), Error);
}

TEST(Summarize, MeanStdAndStandardError) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto s = summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.std, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_NEAR(s.standard_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  const auto one = summarize(std::vector<double>{7});
  EXPECT_EQ(one.mean, 7);
  EXPECT_EQ(one.std, 0);
}

}  // namespace
}  // namespace nstego
