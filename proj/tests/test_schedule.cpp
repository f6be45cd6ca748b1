// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nstego/error.hpp"
#include "nstego/schedule.hpp"

namespace nstego {
namespace {

TEST(Schedule, EndpointsOfDefaultRange) {
  const NoiseSchedule s = build_schedule(50, 0.001, 1.0);
  ASSERT_EQ(s.times().size(), 51u);
  EXPECT_DOUBLE_EQ(s.t_min(), 0.001);
  EXPECT_DOUBLE_EQ(s.t_max(), 1.0);
  EXPECT_LT(s.alpha(50), 1e-12);
  EXPECT_NEAR(s.sigma(50), 1.0, 1e-15);
  EXPECT_GT(s.sigma(0), 0.0);
}

TEST(Schedule, SymmetricPoint) {
  const NoiseSchedule s = build_schedule(2, 0.25, 0.75);
  EXPECT_DOUBLE_EQ(s.time(1), 0.5);
  EXPECT_NEAR(s.alpha(1), std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_NEAR(s.sigma(1), std::numbers::sqrt2 / 2, 1e-15);
}

TEST(Schedule, RejectsBadParameters) {
  EXPECT_THROW(build_schedule(1), ConfigError);
  EXPECT_THROW(build_schedule(10, 0.0, 0.5), ConfigError);
  EXPECT_THROW(build_schedule(10, 0.5, 0.5), ConfigError);
  EXPECT_THROW(build_schedule(10, 0.1, 1.5), ConfigError);
  try {
    build_schedule(10, 0.3, 0.2);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("t_max"), std::string::npos);
  }
}

TEST(Schedule, VariancePreservingAndMonotone) {
  const NoiseSchedule s = build_schedule(200);
  for (int i = 0; i <= s.num_steps(); ++i) {
    EXPECT_NEAR(s.alpha(i) * s.alpha(i) + s.sigma(i) * s.sigma(i), 1.0, 1e-12);
    if (i > 0) {
      EXPECT_GT(s.time(i), s.time(i - 1));
      EXPECT_LT(s.lambda(i), s.lambda(i - 1));
      EXPECT_LT(s.alpha(i), s.alpha(i - 1));
      EXPECT_GT(s.sigma(i), s.sigma(i - 1));
    }
  }
}

TEST(LogSnrStep, MatchesFirstPrinciples) {
  const NoiseSchedule s = build_schedule(50, 0.001, 1.0);
  // Independent recomputation: lambda(t) = log(cot(pi t / 2)).
  auto lambda = [](double t) { return std::log(1.0 / std::tan(std::numbers::pi * t / 2)); };
  const double t24 = 0.001 + (1.0 - 0.001) * 24 / 50;
  const double t25 = 0.001 + (1.0 - 0.001) * 25 / 50;
  const LogSnrStep step = log_snr_step(s, 25);
  EXPECT_NEAR(step.h, lambda(t25) - lambda(t24), 1e-14);
  EXPECT_LT(step.h, 0.0);
}

TEST(LogSnrStep, RatioNearOneInTheInterior) {
  const NoiseSchedule s = build_schedule(100);
  for (int i = 30; i <= 70; ++i) EXPECT_NEAR(log_snr_step(s, i).r, 1.0, 0.05) << i;
}

TEST(LogSnrStep, IndexErrors) {
  const NoiseSchedule s = build_schedule(10);
  EXPECT_THROW(log_snr_step(s, 1), Error);
  EXPECT_NO_THROW(log_snr_step(s, 1, /*want_ratio=*/false));
  EXPECT_THROW(log_snr_step(s, 0, false), Error);
  EXPECT_THROW(log_snr_step(s, 11, false), Error);
}

TEST(LogSnrStep, ExponentialIdentity) {
  const NoiseSchedule s = build_schedule(37, 0.002, 0.99);
  for (int i = 1; i <= s.num_steps(); ++i) {
    const double h = log_snr_step(s, i, false).h;
    const double expected = (s.alpha(i - 1) * s.sigma(i)) / (s.alpha(i) * s.sigma(i - 1));
    EXPECT_NEAR(std::exp(-h), expected, 1e-12 * expected) << i;
  }
}

}  // namespace
}  // namespace nstego
