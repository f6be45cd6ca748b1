// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace nstego {

// Noise level at one time point of the variance-preserving cosine schedule.
struct NoiseLevel {
  double t = 0.0;
  double alpha = 1.0;
  double sigma = 0.0;
};

double schedule_alpha(double t);
double schedule_sigma(double t);
double schedule_lambda(double t);  // log(alpha / sigma)
NoiseLevel noise_level(double t);

struct LogSnrStep {
  double h = 0.0;
  double r = 0.0;  // NaN when not defined (i == 1)
};

// Discretization t_0 < t_1 < ... < t_N. t_0 sits at the data end and t_N at
// the noise end; alpha_t = cos(pi t / 2), sigma_t = sin(pi t / 2).
//
// Immutable once built.
class NoiseSchedule {
 public:
  NoiseSchedule(int num_steps, double t_min, double t_max);

  int num_steps() const { return static_cast<int>(times_.size()) - 1; }
  const std::vector<double>& times() const { return times_; }

  double time(int i) const { return times_.at(static_cast<std::size_t>(i)); }
  double alpha(int i) const { return alpha_.at(static_cast<std::size_t>(i)); }
  double sigma(int i) const { return sigma_.at(static_cast<std::size_t>(i)); }
  double lambda(int i) const { return lambda_.at(static_cast<std::size_t>(i)); }
  NoiseLevel level(int i) const { return {time(i), alpha(i), sigma(i)}; }

  double t_min() const { return times_.front(); }
  double t_max() const { return times_.back(); }

 private:
  std::vector<double> times_;
  std::vector<double> alpha_;
  std::vector<double> sigma_;
  std::vector<double> lambda_;
};

inline constexpr double kDefaultTMin = 1e-3;
inline constexpr double kDefaultTMax = 1.0 - 1e-3;

NoiseSchedule build_schedule(int num_steps, double t_min = kDefaultTMin,
                             double t_max = kDefaultTMax);

// h_i = lambda(t_i) - lambda(t_{i-1}) for 1 <= i <= N. r_i = h_{i-1} / h_i is
// filled only when want_ratio is set, which requires i >= 2.
LogSnrStep log_snr_step(const NoiseSchedule& s, int i, bool want_ratio = true);

}  // namespace nstego
