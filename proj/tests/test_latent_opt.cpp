// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "nstego/error.hpp"
#include "nstego/latent_opt.hpp"
#include "nstego/toy_models.hpp"
#include "test_util.hpp"

namespace nstego {
namespace {

constexpr LatentShape kShape{8, 8};

TEST(LatentOpt, MonotoneBound) {
  EXPECT_DOUBLE_EQ(monotone_step_bound(0.0), 0.5);
  EXPECT_NEAR(monotone_step_bound(0.1), 1.0 / (2 * 1.21), 1e-15);
}

TEST(LatentOpt, LossNonIncreasingBelowBound) {
  for (double eps : {0.05, 0.1, 0.2}) {
    const LatentCodec codec = LatentCodec::seeded(kShape, 3, 4, eps);
    const Signal x = codec.decode(testing::random_tensor(kShape, 4)) +
                     0.01 * testing::random_tensor({256, 1}, 5).reshaped();
    OptimizerConfig cfg;
    cfg.step = monotone_step_bound(eps);
    const auto r = optimize_latent(x, codec, cfg);
    ASSERT_EQ(r.loss.size(), static_cast<std::size_t>(r.iterations) + 1);
    for (std::size_t k = 1; k < r.loss.size(); ++k) EXPECT_LE(r.loss[k], r.loss[k - 1] + 1e-15);
    EXPECT_DOUBLE_EQ(r.loss[0], codec.loss(codec.encode(x), x));
  }
}

TEST(LatentOpt, RecoversLatentOfDecodedSignal) {
  const LatentCodec codec = LatentCodec::seeded(kShape, 3, 4, 0.1);
  const Tensor z = testing::random_tensor(kShape, 6);
  const Signal x = codec.decode(z);
  const auto r = optimize_latent(x, codec, {});
  EXPECT_LT(r.loss.back(), 1e-3 * r.loss.front());
  EXPECT_LT((r.latent - z).norm(), 0.05 * (codec.encode(x) - z).norm());
}

TEST(LatentOpt, LinearCodecStopsImmediately) {
  const LatentCodec codec = LatentCodec::seeded(kShape, 3, 4, 0.0);
  const Signal x = codec.decode(testing::random_tensor(kShape, 7));
  const auto r = optimize_latent(x, codec, {});
  EXPECT_EQ(r.iterations, 0);
  EXPECT_LT(r.loss[0], 1e-10);
}

TEST(LatentOpt, EarlyStopCanBeDisabled) {
  const LatentCodec codec = LatentCodec::seeded(kShape, 3, 4, 0.0);
  const Signal x = codec.decode(testing::random_tensor(kShape, 7));
  OptimizerConfig cfg;
  cfg.loss_threshold = 0;
  cfg.iterations = 7;
  EXPECT_EQ(optimize_latent(x, codec, cfg).iterations, 7);
}

TEST(LatentOpt, Errors) {
  const LatentCodec codec = LatentCodec::seeded(kShape, 3, 4, 0.1);
  Signal x = Signal::Zero(codec.signal_length());
  OptimizerConfig bad;
  bad.iterations = 0;
  EXPECT_THROW(optimize_latent(x, codec, bad), ConfigError);
  x[3] = std::nan("");
  EXPECT_THROW(optimize_latent(x, codec, {}), NumericalError);
  OptimizerConfig huge;
  huge.step = 1e6;
  huge.loss_threshold = 0;
  const Signal y = codec.decode(testing::random_tensor(kShape, 7)) * 50.0;
  EXPECT_THROW(optimize_latent(y, codec, huge), NumericalError);
}

}  // namespace
}  // namespace nstego
