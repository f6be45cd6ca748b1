// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "nstego/error.hpp"
#include "nstego/schedule.hpp"
#include "nstego/solvers.hpp"
#include "nstego/toy_models.hpp"
#include "test_util.hpp"

namespace nstego {
namespace {

constexpr LatentShape kShape{16, 16};

double rel_error(const Tensor& a, const Tensor& b) { return (a - b).norm() / b.norm(); }

// Exact probability-flow solution for a diagonal Gaussian prior:
// x_t = alpha_t mu + (s_t / s_T)(x_T - alpha_T mu), s_t^2 = alpha_t^2 v + sigma_t^2.
Tensor gaussian_flow(const GaussianOracle& o, const Tensor& x_T, const NoiseLevel& from,
                     const NoiseLevel& to) {
  const auto& mu = o.mean().array();
  const auto& v = o.variance().array();
  const auto s_from = (from.alpha * from.alpha * v + from.sigma * from.sigma).sqrt();
  const auto s_to = (to.alpha * to.alpha * v + to.sigma * to.sigma).sqrt();
  Tensor out = (to.alpha * mu + s_to / s_from * (x_T.array() - from.alpha * mu)).matrix();
  return out;
}

double roundtrip(SolverOrder order, InversionMode mode, const DataPredictor& p,
                 const NoiseSchedule& s, const Tensor& z_T, SolverConfig cfg = {}) {
  const Tensor z0 = sample(order, z_T, s, p).final_state();
  return rel_error(invert(order, mode, z0, s, p, cfg).noise, z_T);
}

TEST(Sampling, ZeroPredictorScalesBySigmaRatio) {
  const NoiseSchedule s = build_schedule(20);
  const Tensor z = testing::random_tensor(kShape, 1);
  const Tensor expected = z * (s.sigma(0) / s.sigma(20));
  const ZeroPredictor p;
  for (auto order : {SolverOrder::kFirst, SolverOrder::kSecond}) {
    const Trajectory tr = sample(order, z, s, p);
    EXPECT_EQ(tr.states.size(), 21u);
    EXPECT_DOUBLE_EQ(tr.times.front(), s.t_max());
    EXPECT_DOUBLE_EQ(tr.times.back(), s.t_min());
    EXPECT_LE(rel_error(tr.final_state(), expected), 1e-13);
  }
  EXPECT_LE(rel_error(invert_naive_first_order(expected, s, p), z), 1e-13);
  EXPECT_LE(rel_error(invert_naive_second_order(expected, s, p), z), 1e-13);
}

TEST(Sampling, FirstOrderStepOnStandardNormal) {
  // Under N(0, 1) the exact flow is the identity, while each first-order step
  // multiplies by cos(dtheta).
  const NoiseSchedule s = build_schedule(50);
  const GaussianOracle o(Tensor::Zero(4, 4), Tensor::Ones(4, 4));
  const Tensor z = testing::random_tensor({4, 4}, 3);
  const Tensor out = sample_first_order(z, s, o).final_state();
  const double dtheta = std::numbers::pi / 2 * (s.time(1) - s.time(0));
  EXPECT_NEAR(rel_error(out, z), 1 - std::pow(std::cos(dtheta), 50), 1e-12);
}

TEST(Sampling, GaussianConvergesToClosedForm) {
  const GaussianOracle o = GaussianOracle::seeded(kShape, 5);
  const Tensor z = testing::random_tensor(kShape, 6);
  std::vector<double> steps, e1, e2;
  for (int n : {10, 20, 40, 80}) {
    const NoiseSchedule s = build_schedule(n);
    const Tensor exact = gaussian_flow(o, z, s.level(n), s.level(0));
    steps.push_back(n);
    e1.push_back(rel_error(sample_first_order(z, s, o).final_state(), exact));
    e2.push_back(rel_error(sample_second_order(z, s, o).final_state(), exact));
  }
  EXPECT_NEAR(-testing::loglog_slope(steps, e1), 1.0, 0.15);
  EXPECT_NEAR(-testing::loglog_slope(steps, e2), 2.0, 0.25);
  for (std::size_t k = 0; k < steps.size(); ++k) EXPECT_LT(e2[k], e1[k]);
}

TEST(Sampling, Deterministic) {
  const MixtureOracle o = MixtureOracle::seeded(kShape, 11);
  const NoiseSchedule s = build_schedule(30);
  const Tensor z = testing::random_tensor(kShape, 8);
  EXPECT_EQ(sample_second_order(z, s, o).final_state(), sample_second_order(z, s, o).final_state());
}

TEST(Sampling, FirstOrderStepFormula) {
  const NoiseLevel from = noise_level(0.6), to = noise_level(0.5);
  const Tensor x = testing::random_tensor({2, 3}, 1), pred = testing::random_tensor({2, 3}, 2);
  const double h = std::log(to.alpha / to.sigma) - std::log(from.alpha / from.sigma);
  const Tensor expected = (to.sigma / from.sigma) * x - to.alpha * (std::exp(-h) - 1) * pred;
  EXPECT_LE((first_order_step(x, pred, from, to) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BackwardEuler, ResidualsWithinTolerance) {
  const GaussianOracle o = GaussianOracle::seeded(kShape, 5);
  const NoiseSchedule s = build_schedule(50);
  const Tensor z = testing::random_tensor(kShape, 6);
  for (auto order : {SolverOrder::kFirst, SolverOrder::kSecond}) {
    const Tensor z0 = sample(order, z, s, o).final_state();
    const SolverConfig cfg;
    const InversionResult r = invert(order, InversionMode::kBackwardEuler, z0, s, o, cfg);
    ASSERT_EQ(r.steps.size(), 50u);
    ASSERT_EQ(r.states.size(), 51u);
    EXPECT_EQ(r.unconverged(), 0);
    for (const auto& st : r.steps) {
      EXPECT_LE(st.residual, 1e-6);
      EXPECT_LE(st.iterations, 100);
      EXPECT_GE(st.iterations, 1);
    }
    EXPECT_LE(r.max_residual(), 1e-6);
  }
}

TEST(BackwardEuler, ForwardStepReproducesTarget) {
  // Re-apply the first-order sampler step to each reconstructed state.
  const MixtureOracle o = MixtureOracle::seeded(kShape, 11);
  const NoiseSchedule s = build_schedule(40);
  const Tensor z0 = sample_first_order(testing::random_tensor(kShape, 3), s, o).final_state();
  const InversionResult r = invert_backward_euler_first_order(z0, s, o, {});
  for (int i = 1; i <= 40; ++i) {
    const Tensor& g = r.states[i];
    const Tensor back = first_order_step(g, o.predict(g, s.level(i)), s.level(i), s.level(i - 1));
    EXPECT_LE((back - r.states[i - 1]).cwiseAbs().maxCoeff(), 1e-6) << i;
  }
}

TEST(BackwardEuler, FirstOrderInvertsFirstOrderSampler) {
  const MixtureOracle o = MixtureOracle::seeded(kShape, 11);
  const NoiseSchedule s = build_schedule(50);
  const Tensor z = testing::random_tensor(kShape, 4);
  const double be = roundtrip(SolverOrder::kFirst, InversionMode::kBackwardEuler, o, s, z);
  const double naive = roundtrip(SolverOrder::kFirst, InversionMode::kNaive, o, s, z);
  EXPECT_LE(be, 1e-4);
  EXPECT_GT(naive, 10 * be);
}

TEST(BackwardEuler, IndependentOfDamping) {
  const MixtureOracle o = MixtureOracle::seeded(kShape, 11);
  const NoiseSchedule s = build_schedule(25);
  const Tensor z0 = sample_first_order(testing::random_tensor(kShape, 9), s, o).final_state();
  std::vector<Tensor> noise;
  for (double h : {0.1, 0.5, 1.0}) {
    SolverConfig cfg;
    cfg.iter_step = h;
    cfg.max_iters = 1000;
    cfg.strict = true;
    noise.push_back(invert_backward_euler_first_order(z0, s, o, cfg).noise);
  }
  EXPECT_LE(rel_error(noise[0], noise[1]), 1e-4);
  EXPECT_LE(rel_error(noise[2], noise[1]), 1e-4);
}

TEST(BackwardEuler, StrictModeThrows) {
  const MixtureOracle o = MixtureOracle::seeded(kShape, 11);
  const NoiseSchedule s = build_schedule(20);
  const Tensor z0 = sample_second_order(testing::random_tensor(kShape, 9), s, o).final_state();
  SolverConfig cfg;
  cfg.max_iters = 1;
  cfg.strict = true;
  try {
    invert_backward_euler_second_order(z0, s, o, cfg);
    FAIL();
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConvergence);
    EXPECT_GT(e.residual(), 1e-6);
  }
  cfg.strict = false;
  const InversionResult r = invert_backward_euler_second_order(z0, s, o, cfg);
  EXPECT_GT(r.unconverged(), 0);
  EXPECT_TRUE(r.noise.allFinite());
}

TEST(BackwardEuler, BestIterateKeptWhenNotStrict) {
  const MixtureOracle o = MixtureOracle::seeded(kShape, 11);
  const NoiseSchedule s = build_schedule(20);
  const Tensor z0 = sample_first_order(testing::random_tensor(kShape, 2), s, o).final_state();
  SolverConfig few;
  few.max_iters = 3;
  const InversionResult r = invert_backward_euler_first_order(z0, s, o, few);
  for (const auto& st : r.steps) {
    EXPECT_EQ(st.iterations, st.converged ? st.iterations : 3);
    EXPECT_TRUE(std::isfinite(st.residual));
  }
}

TEST(BackwardEuler, RejectsBadConfig) {
  const ZeroPredictor p;
  const NoiseSchedule s = build_schedule(10);
  const Tensor z = Tensor::Ones(2, 2);
  SolverConfig c;
  c.epsilon = 0;
  EXPECT_THROW(invert_backward_euler_first_order(z, s, p, c), ConfigError);
  c = {};
  c.iter_step = 1.5;
  EXPECT_THROW(invert_backward_euler_first_order(z, s, p, c), ConfigError);
  c = {};
  c.substeps = 0;
  EXPECT_THROW(invert_backward_euler_second_order(z, s, p, c), ConfigError);
  EXPECT_THROW(invert_backward_euler_second_order(z, build_schedule(1), p, {}), ConfigError);
  EXPECT_THROW(sample_first_order(Tensor(), s, p), ShapeError);
}

TEST(Inversion, SecondOrderOrdering) {
  // Mixture trajectories: BE with more substeps beats BE with one, which
  // in turn beats the explicit inverse.
  const MixtureOracle o = MixtureOracle::seeded(kShape, 11);
  const NoiseSchedule s = build_schedule(50);
  double naive = 0, be1 = 0, be5 = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Tensor z = testing::random_tensor(kShape, seed);
    SolverConfig j1;
    j1.substeps = 1;
    naive += roundtrip(SolverOrder::kSecond, InversionMode::kNaive, o, s, z);
    be1 += roundtrip(SolverOrder::kSecond, InversionMode::kBackwardEuler, o, s, z, j1);
    be5 += roundtrip(SolverOrder::kSecond, InversionMode::kBackwardEuler, o, s, z);
  }
  EXPECT_GT(naive, be1);
  EXPECT_GT(be1, be5);
  EXPECT_LE(be5, 0.5 * naive);
}

TEST(Inversion, GaussianSecondOrderImprovement) {
  const GaussianOracle o = GaussianOracle::seeded(kShape, 5);
  const NoiseSchedule s = build_schedule(50);
  const Tensor z = testing::random_tensor(kShape, 6);
  const double naive = roundtrip(SolverOrder::kSecond, InversionMode::kNaive, o, s, z);
  const double be = roundtrip(SolverOrder::kSecond, InversionMode::kBackwardEuler, o, s, z);
  EXPECT_LE(be, 0.5 * naive);
}

}  // namespace
}  // namespace nstego
