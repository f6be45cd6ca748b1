// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "nstego/tensor.hpp"

namespace nstego {

enum class AttackKind { kNone, kAdditiveNoise, kQuantize, kLowpass, kAmplitudeClip };

// Channel perturbation applied to a decoded signal. Only the parameter
// belonging to `kind` is read:
//   additive_noise  sigma > 0
//   quantize        bits in [1, 52]
//   lowpass         fraction in [0, 1)
//   amplitude_clip  level in (0, 1]
struct AttackSpec {
  AttackKind kind = AttackKind::kNone;
  double sigma = 0.0;
  int bits = 16;
  double fraction = 0.0;
  double level = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  std::string label() const;

  static AttackSpec none() { return {}; }
  static AttackSpec additive_noise(double sigma, std::uint64_t seed = 0);
  static AttackSpec quantize(int bits);
  static AttackSpec lowpass(double fraction);
  static AttackSpec amplitude_clip(double level);
};

const char* attack_kind_name(AttackKind kind);
AttackKind attack_kind_from_name(const std::string& name);

// {"kind": "lowpass", "fraction": 0.3} and friends.
AttackSpec attack_from_json(const nlohmann::json& j);
nlohmann::json attack_to_json(const AttackSpec& a);

Signal apply_attack(const Signal& x, const AttackSpec& a);

}  // namespace nstego
