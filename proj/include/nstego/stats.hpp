// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace nstego {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

double standard_normal_cdf(double x);

// Survival function of the limiting Kolmogorov distribution, P(K > x).
double kolmogorov_survival(double x);

// One-sample Kolmogorov-Smirnov test against N(0, 1). Needs >= 1000 samples.
KsResult gaussianity_test(std::span<const double> samples);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;     // sample standard deviation
  double standard_error = 0.0;  // std / sqrt(n)
};

MeanStd summarize(std::span<const double> values);

}  // namespace nstego
