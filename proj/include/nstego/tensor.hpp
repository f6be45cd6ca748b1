// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace nstego {

// A latent tensor of shape [F, T]; row-major so that vec() is the flattening
// used by every file format and by the codec.
using Tensor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A decoded "audio" signal of length L.
using Signal = Eigen::VectorXd;

struct LatentShape {
  int rows = 0;  // F
  int cols = 0;  // T
  long long size() const { return static_cast<long long>(rows) * cols; }
  bool operator==(const LatentShape&) const = default;
};

inline Eigen::Map<const Eigen::VectorXd> vec(const Tensor& z) {
  return {z.data(), z.size()};
}

inline Eigen::Map<Eigen::VectorXd> vec(Tensor& z) { return {z.data(), z.size()}; }

inline Tensor unvec(const Eigen::Ref<const Eigen::VectorXd>& v, LatentShape shape) {
  Tensor z(shape.rows, shape.cols);
  vec(z) = v;
  return z;
}

inline bool all_finite(const Tensor& z) { return z.allFinite(); }

}  // namespace nstego
