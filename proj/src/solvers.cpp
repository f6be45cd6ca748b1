// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include "nstego/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "nstego/error.hpp"

namespace nstego {
namespace {

double log_snr(const NoiseLevel& l) { return std::log(l.alpha / l.sigma); }

void require_finite(const Tensor& x, const char* what, int step) {
  if (!x.allFinite()) {
    throw NumericalError(std::string(what) + " diverged: non-finite state at step " +
                         std::to_string(step));
  }
}

void require_nonempty(const Tensor& x) {
  if (x.size() == 0) throw ShapeError("solver input tensor is empty");
}

// Coefficient alpha_to * (e^{-h} - 1) of the model term.
double model_coefficient(const NoiseLevel& from, const NoiseLevel& to) {
  return to.alpha * std::expm1(-(log_snr(to) - log_snr(from)));
}

// Explicit inverse of the first-order step `noisy -> clean`: the model is
// evaluated at the known clean state with the noisy time argument.
Tensor naive_inverse_step(const Tensor& clean_state, const NoiseLevel& clean,
                          const NoiseLevel& noisy, const DataPredictor& p) {
  const double c = model_coefficient(noisy, clean);
  return (noisy.sigma / clean.sigma) * (clean_state + c * p.predict(clean_state, noisy));
}

// Damped fixed-point solve of forward(guess) = target:
//   guess <- guess - h (forward(guess) - target)
// until max |forward(guess) - target| <= epsilon.
StepResidual solve_implicit(Tensor& guess, const Tensor& target,
                            const std::function<Tensor(const Tensor&)>& forward,
                            const SolverConfig& cfg, int step) {
  StepResidual out;
  out.step = step;
  Tensor best = guess;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Tensor reproduced = forward(guess);
    require_finite(reproduced, "backward-Euler inversion", step);
    const double residual = (reproduced - target).cwiseAbs().maxCoeff();
    out.iterations = it;
    if (residual < best_residual) {
      best_residual = residual;
      best = guess;
    }
    if (residual <= cfg.epsilon) {
      out.residual = residual;
      out.converged = true;
      return out;
    }
    if (it == cfg.max_iters) break;
    guess -= cfg.iter_step * (reproduced - target);
    require_finite(guess, "backward-Euler inversion", step);
  }
  if (cfg.strict) {
    throw ConvergenceError("backward-Euler step " + std::to_string(step) + " did not reach " +
                               "epsilon within " + std::to_string(cfg.max_iters) +
                               " iterations (residual " + std::to_string(best_residual) + ")",
                           step, best_residual);
  }
  guess = std::move(best);
  out.residual = best_residual;
  out.converged = false;
  return out;
}

InversionResult start_inversion(const Tensor& z0, const NoiseSchedule& s) {
  require_nonempty(z0);
  InversionResult r;
  r.states.reserve(static_cast<std::size_t>(s.num_steps()) + 1);
  r.states.push_back(z0);
  return r;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(iter_step > 0.0 && iter_step <= 1.0)) throw ConfigError("iter_step must lie in (0, 1]");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (substeps < 1) throw ConfigError("substeps must be >= 1");
}

double InversionResult::max_residual() const {
  double m = 0.0;
  for (const auto& s : steps) m = std::max(m, s.residual);
  return m;
}

int InversionResult::unconverged() const {
  return static_cast<int>(std::count_if(steps.begin(), steps.end(),
                                        [](const StepResidual& s) { return !s.converged; }));
}

Tensor first_order_step(const Tensor& x, const Tensor& prediction, const NoiseLevel& from,
                        const NoiseLevel& to) {
  return (to.sigma / from.sigma) * x - model_coefficient(from, to) * prediction;
}

Trajectory sample_first_order(const Tensor& z_T, const NoiseSchedule& s, const DataPredictor& p) {
  require_nonempty(z_T);
  const int n = s.num_steps();
  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(n) + 1);
  traj.states.push_back(z_T);
  traj.times.push_back(s.time(n));
  for (int i = n; i >= 1; --i) {
    const Tensor& x = traj.states.back();
    Tensor next = first_order_step(x, p.predict(x, s.level(i)), s.level(i), s.level(i - 1));
    require_finite(next, "first-order sampling", i - 1);
    traj.states.push_back(std::move(next));
    traj.times.push_back(s.time(i - 1));
  }
  return traj;
}

Trajectory sample_second_order(const Tensor& z_T, const NoiseSchedule& s,
                               const DataPredictor& p) {
  require_nonempty(z_T);
  const int n = s.num_steps();
  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(n) + 1);
  traj.states.push_back(z_T);
  traj.times.push_back(s.time(n));
  Tensor previous_prediction;
  for (int i = n; i >= 1; --i) {
    const Tensor& x = traj.states.back();
    Tensor prediction = p.predict(x, s.level(i));
    Tensor next = first_order_step(x, prediction, s.level(i), s.level(i - 1));
    if (i < n) {
      const double h = s.lambda(i - 1) - s.lambda(i);
      const double r = (s.lambda(i) - s.lambda(i + 1)) / h;
      const double c = model_coefficient(s.level(i), s.level(i - 1));
      next -= (c / (2.0 * r)) * (prediction - previous_prediction);
    }
    require_finite(next, "second-order sampling", i - 1);
    previous_prediction = std::move(prediction);
    traj.states.push_back(std::move(next));
    traj.times.push_back(s.time(i - 1));
  }
  return traj;
}

Trajectory sample(SolverOrder order, const Tensor& z_T, const NoiseSchedule& s,
                  const DataPredictor& p) {
  return order == SolverOrder::kFirst ? sample_first_order(z_T, s, p)
                                      : sample_second_order(z_T, s, p);
}

Tensor invert_naive_first_order(const Tensor& z0, const NoiseSchedule& s,
                                const DataPredictor& p) {
  require_nonempty(z0);
  Tensor x = z0;
  for (int i = 1; i <= s.num_steps(); ++i) {
    x = naive_inverse_step(x, s.level(i - 1), s.level(i), p);
    require_finite(x, "naive first-order inversion", i);
  }
  return x;
}

Tensor invert_naive_second_order(const Tensor& z0, const NoiseSchedule& s,
                                 const DataPredictor& p) {
  // The multistep sampler run in reverse time, predictions at known states.
  require_nonempty(z0);
  Tensor x = z0;
  Tensor previous_prediction;
  for (int i = 1; i <= s.num_steps(); ++i) {
    Tensor prediction = p.predict(x, s.level(i - 1));
    Tensor next = first_order_step(x, prediction, s.level(i - 1), s.level(i));
    if (i >= 2) {
      const double h = s.lambda(i) - s.lambda(i - 1);
      const double r = (s.lambda(i - 1) - s.lambda(i - 2)) / h;
      const double c = model_coefficient(s.level(i - 1), s.level(i));
      next -= (c / (2.0 * r)) * (prediction - previous_prediction);
    }
    require_finite(next, "naive second-order inversion", i);
    previous_prediction = std::move(prediction);
    x = std::move(next);
  }
  return x;
}

InversionResult invert_backward_euler_first_order(const Tensor& z0, const NoiseSchedule& s,
                                                  const DataPredictor& p,
                                                  const SolverConfig& cfg) {
  cfg.validate();
  InversionResult r = start_inversion(z0, s);
  for (int i = 1; i <= s.num_steps(); ++i) {
    const Tensor& target = r.states.back();
    const NoiseLevel clean = s.level(i - 1);
    const NoiseLevel noisy = s.level(i);
    const double ratio = clean.sigma / noisy.sigma;
    const double c = model_coefficient(noisy, clean);
    Tensor guess = naive_inverse_step(target, clean, noisy, p);
    auto forward = [&](const Tensor& g) -> Tensor {
      return ratio * g - c * p.predict(g, noisy);
    };
    r.steps.push_back(solve_implicit(guess, target, forward, cfg, i));
    r.states.push_back(std::move(guess));
  }
  r.noise = r.states.back();
  return r;
}

InversionResult invert_backward_euler_second_order(const Tensor& z0, const NoiseSchedule& s,
                                                   const DataPredictor& p,
                                                   const SolverConfig& cfg) {
  cfg.validate();
  const int n = s.num_steps();
  if (n < 2) throw ConfigError("second-order inversion needs at least 3 timesteps");
  const int substeps = cfg.substeps;
  InversionResult r = start_inversion(z0, s);

  // Fine-grained explicit inversion across [t_lo, t_hi] in `substeps` pieces.
  auto fine_inversion = [&](Tensor y, int lo, int hi) {
    NoiseLevel from = s.level(lo);
    for (int j = 1; j <= substeps; ++j) {
      const NoiseLevel to =
          j == substeps ? s.level(hi)
                        : noise_level(s.time(lo) + (s.time(hi) - s.time(lo)) * j / substeps);
      y = naive_inverse_step(y, from, to, p);
      require_finite(y, "fine-substep inversion", hi);
      from = to;
    }
    return y;
  };

  for (int i = 1; i <= n - 1; ++i) {
    const Tensor& target = r.states.back();
    const Tensor y_near = fine_inversion(target, i - 1, i);
    const Tensor y_far = fine_inversion(y_near, i, i + 1);

    const NoiseLevel clean = s.level(i - 1);
    const NoiseLevel noisy = s.level(i);
    const double h = s.lambda(i - 1) - s.lambda(i);
    const double ratio_h = (s.lambda(i) - s.lambda(i + 1)) / h;
    const double ratio = clean.sigma / noisy.sigma;
    const double c = model_coefficient(noisy, clean);
    // Second-order term, held constant through the fixed-point loop.
    const Tensor correction =
        (c / (2.0 * ratio_h)) * (p.predict(y_near, noisy) - p.predict(y_far, s.level(i + 1)));

    Tensor guess = y_near;
    auto forward = [&](const Tensor& g) -> Tensor {
      return ratio * g - c * p.predict(g, noisy) - correction;
    };
    r.steps.push_back(solve_implicit(guess, target, forward, cfg, i));
    r.states.push_back(std::move(guess));
  }

  // The sampler's first step is first order; invert it the same way.
  {
    const Tensor& target = r.states.back();
    const NoiseLevel clean = s.level(n - 1);
    const NoiseLevel noisy = s.level(n);
    const double ratio = clean.sigma / noisy.sigma;
    const double c = model_coefficient(noisy, clean);
    Tensor guess = naive_inverse_step(target, clean, noisy, p);
    auto forward = [&](const Tensor& g) -> Tensor {
      return ratio * g - c * p.predict(g, noisy);
    };
    r.steps.push_back(solve_implicit(guess, target, forward, cfg, n));
    r.states.push_back(std::move(guess));
  }
  r.noise = r.states.back();
  return r;
}

InversionResult invert(SolverOrder order, InversionMode mode, const Tensor& z0,
                       const NoiseSchedule& s, const DataPredictor& p, const SolverConfig& cfg) {
  if (mode == InversionMode::kBackwardEuler) {
    return order == SolverOrder::kFirst ? invert_backward_euler_first_order(z0, s, p, cfg)
                                        : invert_backward_euler_second_order(z0, s, p, cfg);
  }
  InversionResult r;
  r.noise = order == SolverOrder::kFirst ? invert_naive_first_order(z0, s, p)
                                         : invert_naive_second_order(z0, s, p);
  return r;
}

}  // namespace nstego
