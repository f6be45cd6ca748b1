// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "nstego/schedule.hpp"
#include "nstego/tensor.hpp"

namespace nstego {

// Data prediction x_theta(x_t, t) = E[x_0 | x_t].
class DataPredictor {
 public:
  virtual ~DataPredictor() = default;
  virtual Tensor predict(const Tensor& x, const NoiseLevel& level) const = 0;
};

class ZeroPredictor final : public DataPredictor {
 public:
  Tensor predict(const Tensor& x, const NoiseLevel&) const override {
    return Tensor::Zero(x.rows(), x.cols());
  }
};

// Exact posterior mean under a diagonal Gaussian prior N(mean, diag(variance)).
class GaussianOracle final : public DataPredictor {
 public:
  GaussianOracle(Tensor mean, Tensor variance);
  static GaussianOracle seeded(LatentShape shape, std::uint64_t seed, double mean_scale = 0.5,
                               double var_lo = 0.5, double var_hi = 2.0);

  Tensor predict(const Tensor& x, const NoiseLevel& level) const override;

  const Tensor& mean() const { return mean_; }
  const Tensor& variance() const { return variance_; }

 private:
  Tensor mean_;
  Tensor variance_;
};

// Mixture of unit-variance Gaussians over the whole latent tensor.
class MixtureOracle final : public DataPredictor {
 public:
  MixtureOracle(std::vector<double> weights, std::vector<Tensor> means);
  // K means at L2 distance `radius` from the origin, uniform weights.
  static MixtureOracle seeded(LatentShape shape, std::uint64_t seed, int components = 4,
                              double radius = 3.0);

  Tensor predict(const Tensor& x, const NoiseLevel& level) const override;
  std::vector<double> responsibilities(const Tensor& x, const NoiseLevel& level) const;

  std::size_t components() const { return means_.size(); }

 private:
  std::vector<double> log_weights_;
  std::vector<Tensor> means_;
};

// D(z) = W vec(z) + gain * tanh(W vec(z)), E(x) = reshape(W^T x).
// W is L x (F*T) with orthonormal columns.
class LatentCodec {
 public:
  LatentCodec(LatentShape shape, Eigen::MatrixXd weight, double nonlinearity);
  static LatentCodec seeded(LatentShape shape, std::uint64_t seed, int expansion = 4,
                            double nonlinearity = 0.1);

  Signal decode(const Tensor& z) const;
  Tensor encode(const Signal& x) const;
  // Gradient of ||x - D(z)||^2 with respect to z, given residual = x - D(z).
  Tensor decode_grad(const Tensor& z, const Signal& residual) const;
  double loss(const Tensor& z, const Signal& x) const;

  LatentShape shape() const { return shape_; }
  Eigen::Index signal_length() const { return weight_.rows(); }
  double nonlinearity() const { return nonlinearity_; }
  const Eigen::MatrixXd& weight() const { return weight_; }

 private:
  void check_latent(const Tensor& z) const;
  void check_signal(const Signal& x) const;

  LatentShape shape_;
  Eigen::MatrixXd weight_;
  double nonlinearity_;
};

}  // namespace nstego
