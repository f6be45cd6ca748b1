// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>

namespace nstego {

// SplitMix64, version 1. Keys and file headers record this version so that
// streams stay reproducible across implementations.
inline constexpr std::uint8_t kGeneratorVersion = 1;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent child stream; `tag` names its purpose.
  static Rng stream(std::uint64_t seed, std::string_view tag) {
    return Rng(splitmix64_mix(seed ^ splitmix64_mix(fnv1a64(tag))));
  }
  static Rng stream(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
    return Rng(splitmix64_mix(seed ^ splitmix64_mix(fnv1a64(tag) + splitmix64_mix(index + 1))));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64_mix(state_);
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, bound), bound > 0. Lemire's method with rejection.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal via Box-Muller; the second variate is cached.
  double gaussian();

  bool bit() { return (next_u64() >> 63) != 0; }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nstego
