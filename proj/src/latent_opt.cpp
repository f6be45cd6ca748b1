// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include "nstego/latent_opt.hpp"

#include <cmath>
#include <string>

#include "nstego/error.hpp"

namespace nstego {

void OptimizerConfig::validate() const {
  if (iterations < 1) throw ConfigError("opt_iterations must be >= 1");
  if (!(step > 0.0)) throw ConfigError("opt_step must be > 0");
}

double monotone_step_bound(double nonlinearity) {
  return 1.0 / (2.0 * (1.0 + nonlinearity) * (1.0 + nonlinearity));
}

OptimizationResult optimize_latent(const Signal& x, const LatentCodec& codec,
                                   const OptimizerConfig& cfg) {
  cfg.validate();
  if (!x.allFinite()) throw NumericalError("latent optimization input signal is not finite");
  OptimizationResult out;
  out.latent = codec.encode(x);
  out.loss.reserve(static_cast<std::size_t>(cfg.iterations) + 1);

  Signal residual = x - codec.decode(out.latent);
  double loss = residual.squaredNorm();
  out.loss.push_back(loss);
  for (int k = 0; k < cfg.iterations; ++k) {
    if (cfg.loss_threshold > 0.0 && loss < cfg.loss_threshold) break;
    out.latent -= cfg.step * codec.decode_grad(out.latent, residual);
    residual = x - codec.decode(out.latent);
    loss = residual.squaredNorm();
    if (!std::isfinite(loss)) {
      throw NumericalError("latent optimization diverged at iteration " + std::to_string(k + 1) +
                           "; try a smaller opt_step (monotone bound " +
                           std::to_string(monotone_step_bound(codec.nonlinearity())) + ")");
    }
    out.loss.push_back(loss);
    ++out.iterations;
  }
  return out;
}

}  // namespace nstego
