// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include "nstego/toy_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nstego/error.hpp"
#include "nstego/random.hpp"

namespace nstego {
namespace {

Tensor gaussian_tensor(LatentShape shape, Rng& rng) {
  Tensor z(shape.rows, shape.cols);
  for (Eigen::Index k = 0; k < z.size(); ++k) z.data()[k] = rng.gaussian();
  return z;
}

}  // namespace

GaussianOracle::GaussianOracle(Tensor mean, Tensor variance)
    : mean_(std::move(mean)), variance_(std::move(variance)) {
  if (mean_.rows() != variance_.rows() || mean_.cols() != variance_.cols()) {
    throw ShapeError("Gaussian oracle mean and variance shapes differ");
  }
  if (!(variance_.array() > 0.0).all()) {
    throw ConfigError("Gaussian oracle variances must be positive");
  }
}

GaussianOracle GaussianOracle::seeded(LatentShape shape, std::uint64_t seed, double mean_scale,
                                      double var_lo, double var_hi) {
  if (!(var_lo > 0.0 && var_hi >= var_lo)) {
    throw ConfigError("Gaussian oracle variance range must satisfy 0 < lo <= hi");
  }
  Rng rng = Rng::stream(seed, "gaussian-oracle");
  Tensor mean = gaussian_tensor(shape, rng) * mean_scale;
  Tensor var(shape.rows, shape.cols);
  for (Eigen::Index k = 0; k < var.size(); ++k) {
    var.data()[k] = var_lo + (var_hi - var_lo) * rng.uniform();
  }
  return GaussianOracle(std::move(mean), std::move(var));
}

Tensor GaussianOracle::predict(const Tensor& x, const NoiseLevel& level) const {
  const double a = level.alpha;
  const double s2 = level.sigma * level.sigma;
  const auto gain = (a * variance_.array()) / (a * a * variance_.array() + s2);
  Tensor out = mean_.array() + gain * (x.array() - a * mean_.array());
  return out;
}

MixtureOracle::MixtureOracle(std::vector<double> weights, std::vector<Tensor> means)
    : means_(std::move(means)) {
  if (weights.empty() || weights.size() != means_.size()) {
    throw ConfigError("mixture needs one weight per mean and at least one component");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ConfigError("mixture weights must be positive");
    total += w;
  }
  for (const auto& m : means_) {
    if (m.rows() != means_.front().rows() || m.cols() != means_.front().cols()) {
      throw ShapeError("mixture means must share one shape");
    }
  }
  log_weights_.reserve(weights.size());
  for (double w : weights) log_weights_.push_back(std::log(w / total));
}

MixtureOracle MixtureOracle::seeded(LatentShape shape, std::uint64_t seed, int components,
                                    double radius) {
  if (components < 1) throw ConfigError("mixture_components must be >= 1");
  if (!(radius >= 0.0)) throw ConfigError("mixture_radius must be >= 0");
  Rng rng = Rng::stream(seed, "mixture-oracle");
  std::vector<Tensor> means;
  for (int k = 0; k < components; ++k) {
    Tensor m = gaussian_tensor(shape, rng);
    m *= radius / m.norm();
    means.push_back(std::move(m));
  }
  return MixtureOracle(std::vector<double>(static_cast<std::size_t>(components), 1.0),
                       std::move(means));
}

std::vector<double> MixtureOracle::responsibilities(const Tensor& x,
                                                    const NoiseLevel& level) const {
  const double a = level.alpha;
  const double var = a * a + level.sigma * level.sigma;
  std::vector<double> logits(means_.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < means_.size(); ++k) {
    logits[k] = log_weights_[k] - 0.5 * (x - a * means_[k]).squaredNorm() / var;
    peak = std::max(peak, logits[k]);
  }
  double total = 0.0;
  for (double& l : logits) {
    l = std::exp(l - peak);
    total += l;
  }
  for (double& l : logits) l /= total;
  return logits;
}

Tensor MixtureOracle::predict(const Tensor& x, const NoiseLevel& level) const {
  const double a = level.alpha;
  const double gain = a / (a * a + level.sigma * level.sigma);
  const auto gamma = responsibilities(x, level);
  // sum_k gamma_k (mu_k + gain (x - a mu_k)) = gain x + (1 - gain a) sum_k gamma_k mu_k
  Tensor mean_mix = Tensor::Zero(x.rows(), x.cols());
  for (std::size_t k = 0; k < means_.size(); ++k) mean_mix += gamma[k] * means_[k];
  Tensor out = gain * x + (1.0 - gain * a) * mean_mix;
  return out;
}

LatentCodec::LatentCodec(LatentShape shape, Eigen::MatrixXd weight, double nonlinearity)
    : shape_(shape), weight_(std::move(weight)), nonlinearity_(nonlinearity) {
  if (weight_.cols() != shape.size()) {
    throw ShapeError("codec weight has " + std::to_string(weight_.cols()) +
                     " columns, latent has " + std::to_string(shape.size()) + " entries");
  }
  if (weight_.rows() <= weight_.cols()) {
    throw ConfigError("codec signal length must exceed the latent size");
  }
  if (!(nonlinearity >= 0.0)) throw ConfigError("codec_nonlinearity must be >= 0");
}

LatentCodec LatentCodec::seeded(LatentShape shape, std::uint64_t seed, int expansion,
                                double nonlinearity) {
  if (expansion < 2) throw ConfigError("codec_expansion must be >= 2");
  const Eigen::Index n = shape.size();
  const Eigen::Index l = n * expansion;
  Rng rng = Rng::stream(seed, "codec");
  Eigen::MatrixXd g(l, n);
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(l, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return LatentCodec(shape, std::move(q), nonlinearity);
}

void LatentCodec::check_latent(const Tensor& z) const {
  if (z.rows() != shape_.rows || z.cols() != shape_.cols) {
    throw ShapeError("latent shape " + std::to_string(z.rows()) + "x" + std::to_string(z.cols()) +
                     " does not match codec " + std::to_string(shape_.rows) + "x" +
                     std::to_string(shape_.cols));
  }
}

void LatentCodec::check_signal(const Signal& x) const {
  if (x.size() != weight_.rows()) {
    throw ShapeError("signal length " + std::to_string(x.size()) + " does not match codec " +
                     std::to_string(weight_.rows()));
  }
}

Signal LatentCodec::decode(const Tensor& z) const {
  check_latent(z);
  const Eigen::VectorXd u = weight_ * vec(z);
  if (nonlinearity_ == 0.0) return u;
  return u.array() + nonlinearity_ * u.array().tanh();
}

Tensor LatentCodec::encode(const Signal& x) const {
  check_signal(x);
  return unvec(weight_.transpose() * x, shape_);
}

Tensor LatentCodec::decode_grad(const Tensor& z, const Signal& residual) const {
  check_latent(z);
  check_signal(residual);
  const Eigen::ArrayXd u = weight_ * vec(z);
  const Eigen::ArrayXd th = u.tanh();
  const Eigen::VectorXd scaled = (1.0 + nonlinearity_ * (1.0 - th * th)) * residual.array();
  return unvec(-2.0 * (weight_.transpose() * scaled), shape_);
}

double LatentCodec::loss(const Tensor& z, const Signal& x) const {
  check_signal(x);
  return (x - decode(z)).squaredNorm();
}

}  // namespace nstego
