// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include "nstego/config.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "nstego/error.hpp"
#include "nstego/io.hpp"
#include "nstego/random.hpp"
#include "nstego/schedule.hpp"

namespace nstego {
namespace {

using nlohmann::json;

template <typename T>
T read_field(const json& value, const std::string& name) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config field '" + name + "' has the wrong type: " + value.dump());
  }
}

OracleKind oracle_kind_from_name(const std::string& name) {
  if (name == "zero") return OracleKind::kZero;
  if (name == "gaussian") return OracleKind::kGaussian;
  if (name == "mixture") return OracleKind::kMixture;
  throw ConfigError("config field 'oracle' must be zero, gaussian or mixture, got '" + name + "'");
}

InversionMode inversion_from_name(const std::string& name) {
  if (name == "naive") return InversionMode::kNaive;
  if (name == "backward_euler") return InversionMode::kBackwardEuler;
  throw ConfigError("config field 'inversion' must be naive or backward_euler, got '" + name + "'");
}

}  // namespace

const char* oracle_kind_name(OracleKind k) {
  switch (k) {
    case OracleKind::kZero: return "zero";
    case OracleKind::kGaussian: return "gaussian";
    case OracleKind::kMixture: return "mixture";
  }
  return "unknown";
}

const char* inversion_mode_name(InversionMode m) {
  return m == InversionMode::kNaive ? "naive" : "backward_euler";
}

PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  PipelineConfig c;
  std::string key_hex;
  std::string key_file;
  for (const auto& [name, v] : j.items()) {
    if (name == "latent_rows") c.shape.rows = read_field<int>(v, name);
    else if (name == "latent_cols") c.shape.cols = read_field<int>(v, name);
    else if (name == "block_size") c.key.block_size = read_field<int>(v, name);
    else if (name == "blocks") c.blocks = read_field<int>(v, name);
    else if (name == "matrix_seed") c.key.matrix_seed = read_field<std::uint64_t>(v, name);
    else if (name == "magnitude_seed") c.key.magnitude_seed = read_field<std::uint64_t>(v, name);
    else if (name == "shuffle_seed") c.key.shuffle_seed = read_field<std::uint64_t>(v, name);
    else if (name == "key_hex") key_hex = read_field<std::string>(v, name);
    else if (name == "key_file") key_file = read_field<std::string>(v, name);
    else if (name == "num_steps") c.schedule.num_steps = read_field<int>(v, name);
    else if (name == "t_min") c.schedule.t_min = read_field<double>(v, name);
    else if (name == "t_max") c.schedule.t_max = read_field<double>(v, name);
    else if (name == "solver_order") {
      const int order = read_field<int>(v, name);
      if (order != 1 && order != 2) throw ConfigError("config field 'solver_order' must be 1 or 2");
      c.order = order == 1 ? SolverOrder::kFirst : SolverOrder::kSecond;
    } else if (name == "inversion") c.inversion = inversion_from_name(read_field<std::string>(v, name));
    else if (name == "epsilon") c.solver.epsilon = read_field<double>(v, name);
    else if (name == "iter_step") c.solver.iter_step = read_field<double>(v, name);
    else if (name == "max_iters") c.solver.max_iters = read_field<int>(v, name);
    else if (name == "substeps") c.solver.substeps = read_field<int>(v, name);
    else if (name == "strict") c.solver.strict = read_field<bool>(v, name);
    else if (name == "latent_opt") c.latent_opt = read_field<bool>(v, name);
    else if (name == "opt_iterations") c.optimizer.iterations = read_field<int>(v, name);
    else if (name == "opt_step") c.optimizer.step = read_field<double>(v, name);
    else if (name == "opt_loss_threshold") c.optimizer.loss_threshold = read_field<double>(v, name);
    else if (name == "oracle") c.oracle.kind = oracle_kind_from_name(read_field<std::string>(v, name));
    else if (name == "oracle_seed") c.oracle.seed = read_field<std::uint64_t>(v, name);
    else if (name == "mixture_components") c.oracle.components = read_field<int>(v, name);
    else if (name == "mixture_radius") c.oracle.radius = read_field<double>(v, name);
    else if (name == "gaussian_mean_scale") c.oracle.mean_scale = read_field<double>(v, name);
    else if (name == "gaussian_var_lo") c.oracle.var_lo = read_field<double>(v, name);
    else if (name == "gaussian_var_hi") c.oracle.var_hi = read_field<double>(v, name);
    else if (name == "codec_seed") c.codec.seed = read_field<std::uint64_t>(v, name);
    else if (name == "codec_expansion") c.codec.expansion = read_field<int>(v, name);
    else if (name == "codec_nonlinearity") c.codec.nonlinearity = read_field<double>(v, name);
    else if (name == "attacks") {
      if (!v.is_array()) throw ConfigError("config field 'attacks' must be an array");
      c.attacks.clear();
      for (const auto& a : v) c.attacks.push_back(attack_from_json(a));
    } else if (name == "trials") c.trials = read_field<int>(v, name);
    else if (name == "seed") c.seed = read_field<std::uint64_t>(v, name);
    else if (name == "study_steps") c.study_steps = read_field<std::vector<int>>(v, name);
    else if (name == "report_path") c.report_path = read_field<std::string>(v, name);
    else if (name == "csv_path") c.csv_path = read_field<std::string>(v, name);
    else throw ConfigError("unknown config field '" + name + "'");
  }
  if (!key_file.empty()) {
    try {
      c.key = parse_key(read_binary_file(key_file));
    } catch (const Error& e) {
      throw ConfigError("config field 'key_file': " + std::string(e.what()));
    }
  }
  if (!key_hex.empty()) {
    try {
      c.key = key_from_hex(key_hex);
    } catch (const Error& e) {
      throw ConfigError("config field 'key_hex': " + std::string(e.what()));
    }
  }
  c.validate();
  return c;
}

json config_to_json(const PipelineConfig& c) {
  json j;
  j["latent_rows"] = c.shape.rows;
  j["latent_cols"] = c.shape.cols;
  j["block_size"] = c.key.block_size;
  j["blocks"] = c.block_count();
  j["matrix_seed"] = c.key.matrix_seed;
  j["magnitude_seed"] = c.key.magnitude_seed;
  j["shuffle_seed"] = c.key.shuffle_seed;
  j["num_steps"] = c.schedule.num_steps;
  j["t_min"] = c.schedule.t_min;
  j["t_max"] = c.schedule.t_max;
  j["solver_order"] = static_cast<int>(c.order);
  j["inversion"] = inversion_mode_name(c.inversion);
  j["epsilon"] = c.solver.epsilon;
  j["iter_step"] = c.solver.iter_step;
  j["max_iters"] = c.solver.max_iters;
  j["substeps"] = c.solver.substeps;
  j["strict"] = c.solver.strict;
  j["latent_opt"] = c.latent_opt;
  j["opt_iterations"] = c.optimizer.iterations;
  j["opt_step"] = c.optimizer.step;
  j["opt_loss_threshold"] = c.optimizer.loss_threshold;
  j["oracle"] = oracle_kind_name(c.oracle.kind);
  j["oracle_seed"] = c.oracle.seed;
  j["mixture_components"] = c.oracle.components;
  j["mixture_radius"] = c.oracle.radius;
  j["gaussian_mean_scale"] = c.oracle.mean_scale;
  j["gaussian_var_lo"] = c.oracle.var_lo;
  j["gaussian_var_hi"] = c.oracle.var_hi;
  j["codec_seed"] = c.codec.seed;
  j["codec_expansion"] = c.codec.expansion;
  j["codec_nonlinearity"] = c.codec.nonlinearity;
  j["attacks"] = json::array();
  for (const auto& a : c.attacks) j["attacks"].push_back(attack_to_json(a));
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["study_steps"] = c.study_steps;
  j["report_path"] = c.report_path;
  j["csv_path"] = c.csv_path;
  return j;
}

int PipelineConfig::block_count() const {
  return blocks == 0 ? max_blocks(shape, key.block_size) : blocks;
}

void PipelineConfig::validate() const {
  if (shape.rows < 1) throw ConfigError("config field 'latent_rows' must be >= 1");
  if (shape.cols < 1) throw ConfigError("config field 'latent_cols' must be >= 1");
  if (key.block_size < 2 || key.block_size > 0xffff) {
    throw ConfigError("config field 'block_size' must be in [2, 65535]");
  }
  if (blocks < 0) throw ConfigError("config field 'blocks' must be >= 0");
  const int c_max = max_blocks(shape, key.block_size);
  const long long per_block = static_cast<long long>(key.block_size) * key.block_size;
  if (c_max < 1) {
    throw CapacityError("latent " + std::to_string(shape.rows) + "x" + std::to_string(shape.cols) +
                            " cannot hold one " + std::to_string(key.block_size) + "x" +
                            std::to_string(key.block_size) + " block",
                        0);
  }
  if (block_count() > c_max) {
    throw CapacityError("config field 'blocks' = " + std::to_string(blocks) +
                            " exceeds capacity; max bits = " + std::to_string(c_max * per_block) +
                            " (" + std::to_string(c_max) + " blocks)",
                        c_max * per_block);
  }
  NoiseSchedule(schedule.num_steps, schedule.t_min, schedule.t_max);
  solver.validate();
  optimizer.validate();
  if (oracle.components < 1) throw ConfigError("config field 'mixture_components' must be >= 1");
  if (!(oracle.radius >= 0.0)) throw ConfigError("config field 'mixture_radius' must be >= 0");
  if (!(oracle.var_lo > 0.0 && oracle.var_hi >= oracle.var_lo)) {
    throw ConfigError("config fields 'gaussian_var_lo'/'gaussian_var_hi' need 0 < lo <= hi");
  }
  if (codec.expansion < 2) throw ConfigError("config field 'codec_expansion' must be >= 2");
  if (!(codec.nonlinearity >= 0.0)) throw ConfigError("config field 'codec_nonlinearity' must be >= 0");
  if (attacks.empty()) throw ConfigError("config field 'attacks' must list at least one attack");
  for (const auto& a : attacks) a.validate();
  if (trials < 1) throw ConfigError("config field 'trials' must be >= 1");
  for (int s : study_steps) {
    if (s < 2) throw ConfigError("config field 'study_steps' entries must be >= 2");
  }
}

PipelineConfig parse_config_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_override(json& j, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string value(assignment.substr(eq + 1));
  json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
  j[key] = parsed.is_discarded() ? json(value) : parsed;
}

std::string canonical_config_text(const PipelineConfig& cfg) { return config_to_json(cfg).dump(); }

std::uint64_t config_fingerprint(const PipelineConfig& cfg) {
  return fnv1a64(canonical_config_text(cfg));
}

}  // namespace nstego
