// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "nstego/schedule.hpp"
#include "nstego/tensor.hpp"
#include "nstego/toy_models.hpp"

namespace nstego {

enum class SolverOrder { kFirst = 1, kSecond = 2 };
enum class InversionMode { kNaive, kBackwardEuler };

struct SolverConfig {
  double epsilon = 1e-6;   // tolerance on max |z' - z_target|
  double iter_step = 0.5;  // damping h of the fixed-point update
  int max_iters = 100;
  int substeps = 5;        // J
  bool strict = false;     // throw ConvergenceError instead of keeping the best iterate

  void validate() const;
};

struct Trajectory {
  std::vector<Tensor> states;
  std::vector<double> times;  // strictly decreasing for sampling

  const Tensor& final_state() const { return states.back(); }
};

// Sampling runs from t_N (noise) down to t_0 (data).
Trajectory sample_first_order(const Tensor& z_T, const NoiseSchedule& s, const DataPredictor& p);
Trajectory sample_second_order(const Tensor& z_T, const NoiseSchedule& s,
                               const DataPredictor& p);
Trajectory sample(SolverOrder order, const Tensor& z_T, const NoiseSchedule& s,
                  const DataPredictor& p);

struct StepResidual {
  int step = 0;        // index i of the reconstructed state z_{t_i}
  int iterations = 0;  // forward evaluations in the fixed-point loop
  double residual = 0.0;
  bool converged = true;
};

struct InversionResult {
  Tensor noise;
  std::vector<Tensor> states;       // backward Euler only: states[i] ~ z_{t_i}, states[0] = input
  std::vector<StepResidual> steps;  // empty for naive inversion

  double max_residual() const;
  int unconverged() const;
};

// Explicit inversions: the model is evaluated at the known state.
Tensor invert_naive_first_order(const Tensor& z0, const NoiseSchedule& s, const DataPredictor& p);
Tensor invert_naive_second_order(const Tensor& z0, const NoiseSchedule& s,
                                 const DataPredictor& p);

InversionResult invert_backward_euler_first_order(const Tensor& z0, const NoiseSchedule& s,
                                                  const DataPredictor& p,
                                                  const SolverConfig& cfg);
InversionResult invert_backward_euler_second_order(const Tensor& z0, const NoiseSchedule& s,
                                                   const DataPredictor& p,
                                                   const SolverConfig& cfg);

InversionResult invert(SolverOrder order, InversionMode mode, const Tensor& z0,
                       const NoiseSchedule& s, const DataPredictor& p, const SolverConfig& cfg);

// One first-order exponential-integrator step from `from` to `to` given the
// prediction at the source: (sigma_to / sigma_from) x - alpha_to (e^{-h} - 1) pred
// with h = lambda_to - lambda_from.
Tensor first_order_step(const Tensor& x, const Tensor& prediction, const NoiseLevel& from,
                        const NoiseLevel& to);

}  // namespace nstego
