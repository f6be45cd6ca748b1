// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nstego/config.hpp"
#include "nstego/message_codec.hpp"
#include "nstego/schedule.hpp"
#include "nstego/solvers.hpp"
#include "nstego/stats.hpp"
#include "nstego/toy_models.hpp"

namespace nstego {

struct SenderOutput {
  Signal signal;
  // Ground truth retained for evaluation only; the receiver never reads it.
  Tensor stego_noise;  // z_s
  Tensor clean_latent; // z_{t_0}
};

struct ReceiverOutput {
  MessageBits message;
  Tensor recovered_noise;
  std::vector<StepResidual> residuals;
  std::vector<double> loss_curve;
};

std::unique_ptr<DataPredictor> make_predictor(const OracleSpec& spec, LatentShape shape);

// Components built from a validated config. Instances are immutable and may be
// shared between threads.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg);

  const PipelineConfig& config() const { return cfg_; }
  int blocks() const { return blocks_; }
  long long capacity_bits() const;

  SenderOutput embed_and_generate(const MessageBits& message) const;
  ReceiverOutput receive_and_extract(const Signal& signal) const;

  const NoiseSchedule& schedule() const { return schedule_; }
  const DataPredictor& predictor() const { return *predictor_; }
  const LatentCodec& codec() const { return codec_; }

 private:
  PipelineConfig cfg_;
  int blocks_;
  NoiseSchedule schedule_;
  std::unique_ptr<DataPredictor> predictor_;
  LatentCodec codec_;
};

struct TrialResult {
  int trial = 0;
  double ber = 0.0;
  double max_residual = 0.0;
  int unconverged_steps = 0;
  std::vector<double> residuals;
  std::vector<double> loss_curve;
};

struct AttackResult {
  AttackSpec attack;
  std::vector<TrialResult> trials;
  MeanStd ber;
};

struct EvalReport {
  std::string config_text;
  std::uint64_t fingerprint = 0;
  std::vector<AttackResult> attacks;
  KsResult gaussianity;
  std::size_t gaussianity_samples = 0;

  nlohmann::json to_json() const;
  std::string to_string() const;  // pretty JSON with trailing newline

  // attack_index,attack,trial,ber,max_residual,unconverged_steps
  std::string ber_csv() const;
  // attack_index,trial,step,residual
  std::string residual_csv() const;
  // attack_index,trial,iteration,loss
  std::string loss_csv() const;
};

// Trials x attack suite. Results are merged by (attack, trial) so the report
// does not depend on `threads`.
EvalReport run_evaluation(const PipelineConfig& cfg, int threads = 1);

struct StudyRow {
  int steps = 0;
  SolverOrder order = SolverOrder::kFirst;
  InversionMode mode = InversionMode::kNaive;
  double sampling_error = 0.0;   // relative L2 vs. a 10x-resolution reference
  double roundtrip_error = 0.0;  // relative L2 of invert(sample(z_T)) vs. z_T
};

std::vector<StudyRow> convergence_study(const PipelineConfig& cfg);
std::string study_to_csv(const std::vector<StudyRow>& rows);

// Per-trial message seed; shared by every run with the same master seed.
std::uint64_t trial_message_seed(std::uint64_t master_seed, int trial);

}  // namespace nstego
