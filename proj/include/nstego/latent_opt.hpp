// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "nstego/tensor.hpp"
#include "nstego/toy_models.hpp"

namespace nstego {

struct OptimizerConfig {
  int iterations = 100;
  double step = 0.1;
  double loss_threshold = 1e-10;  // early stop; <= 0 disables

  void validate() const;
};

struct OptimizationResult {
  Tensor latent;
  std::vector<double> loss;  // loss[k] at the k-th iterate, loss[0] at E(x)
  int iterations = 0;        // updates actually performed
};

// Largest step for which the loss is guaranteed non-increasing.
double monotone_step_bound(double nonlinearity);

// Gradient descent on ||x - D(z)||^2 starting from E(x).
OptimizationResult optimize_latent(const Signal& x, const LatentCodec& codec,
                                   const OptimizerConfig& cfg);

}  // namespace nstego
