// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include "nstego/schedule.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nstego/error.hpp"

namespace nstego {

double schedule_alpha(double t) { return std::cos(0.5 * std::numbers::pi * t); }
double schedule_sigma(double t) { return std::sin(0.5 * std::numbers::pi * t); }
double schedule_lambda(double t) { return std::log(schedule_alpha(t) / schedule_sigma(t)); }
NoiseLevel noise_level(double t) { return {t, schedule_alpha(t), schedule_sigma(t)}; }

NoiseSchedule::NoiseSchedule(int num_steps, double t_min, double t_max) {
  if (num_steps < 2) {
    throw ConfigError("num_steps must be >= 2, got " + std::to_string(num_steps));
  }
  if (!(t_min > 0.0 && t_min < 1.0)) {
    throw ConfigError("t_min must lie in (0, 1), got " + std::to_string(t_min));
  }
  if (!(t_max > t_min && t_max <= 1.0)) {
    throw ConfigError("t_max must lie in (t_min, 1], got " + std::to_string(t_max));
  }
  const auto n = static_cast<std::size_t>(num_steps);
  times_.resize(n + 1);
  alpha_.resize(n + 1);
  sigma_.resize(n + 1);
  lambda_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = i == n ? t_max
                            : t_min + (t_max - t_min) * static_cast<double>(i) /
                                          static_cast<double>(n);
    times_[i] = t;
    alpha_[i] = schedule_alpha(t);
    sigma_[i] = schedule_sigma(t);
    lambda_[i] = std::log(alpha_[i] / sigma_[i]);
  }
}

NoiseSchedule build_schedule(int num_steps, double t_min, double t_max) {
  return NoiseSchedule(num_steps, t_min, t_max);
}

LogSnrStep log_snr_step(const NoiseSchedule& s, int i, bool want_ratio) {
  const int n = s.num_steps();
  if (i < 1 || i > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "log_snr_step index " + std::to_string(i) + " outside [1, " +
                    std::to_string(n) + "]");
  }
  LogSnrStep out;
  out.h = s.lambda(i) - s.lambda(i - 1);
  out.r = std::numeric_limits<double>::quiet_NaN();
  if (want_ratio) {
    if (i < 2) throw Error(ErrorCode::kInvalidArgument, "r_i needs i >= 2 (h_0 is undefined)");
    out.r = (s.lambda(i - 1) - s.lambda(i - 2)) / out.h;
  }
  return out;
}

}  // namespace nstego
