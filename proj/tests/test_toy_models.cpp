// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "nstego/error.hpp"
#include "nstego/schedule.hpp"
#include "nstego/toy_models.hpp"
#include "test_util.hpp"

namespace nstego {
namespace {

double normal_pdf(double x, double mean, double var) {
  return std::exp(-0.5 * (x - mean) * (x - mean) / var) / std::sqrt(2 * std::numbers::pi * var);
}

Tensor scalar(double v) {
  Tensor z(1, 1);
  z(0, 0) = v;
  return z;
}

// E[x0 | xt] by direct quadrature over a scalar prior.
template <typename Prior>
double quadrature_posterior_mean(Prior&& prior, double xt, const NoiseLevel& lv, double lo,
                                 double hi) {
  const double var = lv.sigma * lv.sigma;
  auto w = [&](double x0) { return prior(x0) * normal_pdf(xt, lv.alpha * x0, var); };
  const double num = testing::trapezoid([&](double x0) { return x0 * w(x0); }, lo, hi, 40000);
  const double den = testing::trapezoid(w, lo, hi, 40000);
  return num / den;
}

TEST(GaussianOracle, MatchesQuadrature) {
  const double mu = 0.7, v = 1.6;
  const GaussianOracle oracle(scalar(mu), scalar(v));
  for (double t : {0.05, 0.3, 0.5, 0.8, 0.97}) {
    const NoiseLevel lv = noise_level(t);
    for (double xt : {-2.0, 0.1, 1.5}) {
      const double expected = quadrature_posterior_mean(
          [&](double x) { return normal_pdf(x, mu, v); }, xt, lv, mu - 15, mu + 15);
      EXPECT_NEAR(oracle.predict(scalar(xt), lv)(0, 0), expected, 1e-8) << t << " " << xt;
    }
  }
}

TEST(GaussianOracle, LimitsOfTheSchedule) {
  const GaussianOracle oracle = GaussianOracle::seeded({4, 5}, 3);
  const Tensor x = testing::random_tensor({4, 5}, 1);
  // Pure noise: the prediction is the prior mean.
  const Tensor at_noise = oracle.predict(x, {1.0, 0.0, 1.0});
  EXPECT_LE((at_noise - oracle.mean()).cwiseAbs().maxCoeff(), 1e-15);
  // Clean data: identity.
  const Tensor at_data = oracle.predict(x, {0.0, 1.0, 0.0});
  EXPECT_LE((at_data - x).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GaussianOracle, SeededRanges) {
  const GaussianOracle o = GaussianOracle::seeded({16, 16}, 9);
  EXPECT_GE(o.variance().minCoeff(), 0.5);
  EXPECT_LE(o.variance().maxCoeff(), 2.0);
  EXPECT_THROW(GaussianOracle(scalar(0), scalar(-1)), Error);
  EXPECT_THROW(GaussianOracle(Tensor::Zero(2, 2), Tensor::Ones(2, 3)), Error);
}

TEST(MixtureOracle, ScalarMatchesQuadrature) {
  const std::vector<double> w{0.2, 0.5, 0.3};
  const std::vector<double> mus{-2.5, 0.4, 3.0};
  const MixtureOracle oracle(w, {scalar(mus[0]), scalar(mus[1]), scalar(mus[2])});
  auto prior = [&](double x) {
    double p = 0;
    for (int k = 0; k < 3; ++k) p += w[k] * normal_pdf(x, mus[k], 1.0);
    return p;
  };
  for (double t : {0.05, 0.4, 0.7, 0.95}) {
    const NoiseLevel lv = noise_level(t);
    for (double xt : {-2.0, 0.0, 0.9, 2.5}) {
      const double expected = quadrature_posterior_mean(prior, xt, lv, -15, 15);
      EXPECT_NEAR(oracle.predict(scalar(xt), lv)(0, 0), expected, 1e-8) << t << " " << xt;
    }
  }
}

TEST(MixtureOracle, SingleComponentIsGaussian) {
  const LatentShape shape{3, 4};
  const Tensor mu = testing::random_tensor(shape, 5);
  const MixtureOracle mix({1.0}, {mu});
  const GaussianOracle gauss(mu, Tensor::Ones(3, 4));
  const Tensor x = testing::random_tensor(shape, 6);
  for (double t : {0.1, 0.5, 0.9}) {
    const NoiseLevel lv = noise_level(t);
    EXPECT_LE((mix.predict(x, lv) - gauss.predict(x, lv)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MixtureOracle, SymmetricPointHasEqualResponsibilities) {
  const Tensor mu = testing::random_tensor({4, 4}, 2);
  const MixtureOracle mix({0.5, 0.5}, {mu, Tensor(-mu)});
  const Tensor zero = Tensor::Zero(4, 4);
  for (double t : {0.2, 0.6}) {
    const auto g = mix.responsibilities(zero, noise_level(t));
    EXPECT_NEAR(g[0], 0.5, 1e-12);
    EXPECT_NEAR(g[1], 0.5, 1e-12);
    EXPECT_LE(mix.predict(zero, noise_level(t)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MixtureOracle, ResponsibilitiesNormalizedAndStable) {
  const MixtureOracle mix = MixtureOracle::seeded({16, 16}, 11);
  EXPECT_EQ(mix.components(), 4u);
  for (double scale : {1.0, 30.0}) {
    const Tensor x = testing::random_tensor({16, 16}, 12, scale);
    for (double t : {0.01, 0.5, 0.99}) {
      const auto g = mix.responsibilities(x, noise_level(t));
      double sum = 0;
      for (double v : g) {
        EXPECT_GE(v, 0.0);
        sum += v;
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
      EXPECT_TRUE(mix.predict(x, noise_level(t)).allFinite());
    }
  }
}

TEST(LatentCodec, OrthonormalColumnsAndSize) {
  const LatentCodec codec = LatentCodec::seeded({4, 6}, 7);
  EXPECT_EQ(codec.signal_length(), 4 * 24);
  const auto& w = codec.weight();
  EXPECT_LE((w.transpose() * w - Eigen::MatrixXd::Identity(24, 24)).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(LatentCodec, LinearCaseIsLossless) {
  const LatentCodec codec = LatentCodec::seeded({4, 6}, 7, 4, 0.0);
  const Tensor z = testing::random_tensor({4, 6}, 3);
  EXPECT_LE((codec.encode(codec.decode(z)) - z).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LatentCodec, EncodeDecodeErrorBoundedByNonlinearity) {
  for (double eps : {0.05, 0.1, 0.2}) {
    const LatentCodec codec = LatentCodec::seeded({8, 8}, 21, 4, eps);
    const Tensor z = testing::random_tensor({8, 8}, 22);
    // ||W^T eps tanh(Wz)|| <= eps ||tanh(Wz)|| <= eps sqrt(L) and |tanh(u)| <= |u|
    // gives eps ||Wz|| = eps ||z||; the tighter of the two is checked.
    const double err = (codec.encode(codec.decode(z)) - z).norm();
    EXPECT_LE(err, eps * std::min(z.norm(), std::sqrt(64.0 * 4)));
    EXPECT_GT(err, 0.0);
  }
}

TEST(LatentCodec, GradientMatchesFiniteDifferences) {
  const LatentShape shape{3, 4};
  for (double eps : {0.0, 0.05, 0.2}) {
    const LatentCodec codec = LatentCodec::seeded(shape, 31, 4, eps);
    const Tensor z = testing::random_tensor(shape, 32);
    Signal x = codec.decode(testing::random_tensor(shape, 33));
    const Tensor g = codec.decode_grad(z, x - codec.decode(z));
    const double step = 1e-6;
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      Tensor zp = z, zm = z;
      zp.data()[k] += step;
      zm.data()[k] -= step;
      const double fd = (codec.loss(zp, x) - codec.loss(zm, x)) / (2 * step);
      EXPECT_NEAR(g.data()[k], fd, 1e-6 * std::max(1.0, std::abs(fd))) << eps << " " << k;
    }
  }
}

TEST(LatentCodec, RejectsWrongShapes) {
  const LatentCodec codec = LatentCodec::seeded({4, 6}, 7);
  EXPECT_THROW(codec.decode(Tensor::Zero(4, 5)), ShapeError);
  EXPECT_THROW(codec.encode(Signal::Zero(10)), ShapeError);
}

}  // namespace
}  // namespace nstego
