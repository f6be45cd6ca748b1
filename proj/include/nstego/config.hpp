// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nstego/attacks.hpp"
#include "nstego/latent_opt.hpp"
#include "nstego/message_codec.hpp"
#include "nstego/solvers.hpp"
#include "nstego/tensor.hpp"

namespace nstego {

enum class OracleKind { kZero, kGaussian, kMixture };

struct OracleSpec {
  OracleKind kind = OracleKind::kMixture;
  std::uint64_t seed = 11;
  int components = 4;
  double radius = 3.0;
  double mean_scale = 0.5;
  double var_lo = 0.5;
  double var_hi = 2.0;
};

struct CodecSpec {
  std::uint64_t seed = 13;
  int expansion = 4;
  double nonlinearity = 0.1;
};

struct ScheduleSpec {
  int num_steps = 50;
  double t_min = 1e-3;
  double t_max = 1.0 - 1e-3;
};

// Every field of a run. Parsed from a flat JSON object; keys are listed in
// README.md.
struct PipelineConfig {
  LatentShape shape{16, 16};
  StegoKey key{1, 2, 3, 8};
  int blocks = 0;  // C; 0 means the maximum that fits
  ScheduleSpec schedule;
  SolverOrder order = SolverOrder::kSecond;
  InversionMode inversion = InversionMode::kBackwardEuler;
  SolverConfig solver;
  bool latent_opt = true;
  OptimizerConfig optimizer;
  OracleSpec oracle;
  CodecSpec codec;
  std::vector<AttackSpec> attacks{AttackSpec::none()};
  int trials = 20;
  std::uint64_t seed = 2026;
  std::vector<int> study_steps{10, 20, 40, 80};
  std::string report_path;
  std::string csv_path;

  // Cross-field checks: capacity, shapes, ranges. Throws ConfigError or
  // CapacityError.
  void validate() const;
  int block_count() const;  // resolved C
};

PipelineConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const PipelineConfig& cfg);

PipelineConfig parse_config_text(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

// `key=value`; the value is parsed as JSON when possible, else as a string.
void apply_override(nlohmann::json& j, std::string_view assignment);

// Canonical text: fully resolved config, keys sorted, compact.
std::string canonical_config_text(const PipelineConfig& cfg);
std::uint64_t config_fingerprint(const PipelineConfig& cfg);

const char* oracle_kind_name(OracleKind k);
const char* inversion_mode_name(InversionMode m);

}  // namespace nstego
