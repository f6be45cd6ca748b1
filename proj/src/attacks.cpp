// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include "nstego/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "nstego/error.hpp"
#include "nstego/random.hpp"

namespace nstego {
namespace {

double peak_amplitude(const Signal& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

Signal lowpass(const Signal& x, double fraction) {
  const auto n = static_cast<std::size_t>(x.size());
  if (n == 0 || fraction == 0.0) return x;
  std::vector<double> in(x.data(), x.data() + n);
  std::vector<std::complex<double>> spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, in);
  const double cutoff = (1.0 - fraction) * static_cast<double>(n) / 2.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t freq = std::min(k, n - k);
    if (static_cast<double>(freq) > cutoff) spectrum[k] = 0.0;
  }
  std::vector<double> out;
  fft.inv(out, spectrum);
  return Eigen::Map<const Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(n));
}

}  // namespace

void AttackSpec::validate() const {
  switch (kind) {
    case AttackKind::kNone:
      return;
    case AttackKind::kAdditiveNoise:
      if (!(sigma > 0.0 && std::isfinite(sigma))) throw ConfigError("additive_noise needs sigma > 0");
      return;
    case AttackKind::kQuantize:
      if (bits < 1 || bits > 52) throw ConfigError("quantize needs bits in [1, 52]");
      return;
    case AttackKind::kLowpass:
      if (!(fraction >= 0.0 && fraction < 1.0)) throw ConfigError("lowpass needs fraction in [0, 1)");
      return;
    case AttackKind::kAmplitudeClip:
      if (!(level > 0.0 && level <= 1.0)) throw ConfigError("amplitude_clip needs level in (0, 1]");
      return;
  }
}

std::string AttackSpec::label() const {
  auto fmt = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  switch (kind) {
    case AttackKind::kNone: return "none";
    case AttackKind::kAdditiveNoise: return "additive_noise(sigma=" + fmt(sigma) + ")";
    case AttackKind::kQuantize: return "quantize(bits=" + std::to_string(bits) + ")";
    case AttackKind::kLowpass: return "lowpass(fraction=" + fmt(fraction) + ")";
    case AttackKind::kAmplitudeClip: return "amplitude_clip(level=" + fmt(level) + ")";
  }
  return "unknown";
}

AttackSpec AttackSpec::additive_noise(double sigma, std::uint64_t seed) {
  AttackSpec a;
  a.kind = AttackKind::kAdditiveNoise;
  a.sigma = sigma;
  a.seed = seed;
  return a;
}

AttackSpec AttackSpec::quantize(int bits) {
  AttackSpec a;
  a.kind = AttackKind::kQuantize;
  a.bits = bits;
  return a;
}

AttackSpec AttackSpec::lowpass(double fraction) {
  AttackSpec a;
  a.kind = AttackKind::kLowpass;
  a.fraction = fraction;
  return a;
}

AttackSpec AttackSpec::amplitude_clip(double level) {
  AttackSpec a;
  a.kind = AttackKind::kAmplitudeClip;
  a.level = level;
  return a;
}

const char* attack_kind_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNone: return "none";
    case AttackKind::kAdditiveNoise: return "additive_noise";
    case AttackKind::kQuantize: return "quantize";
    case AttackKind::kLowpass: return "lowpass";
    case AttackKind::kAmplitudeClip: return "amplitude_clip";
  }
  return "unknown";
}

AttackKind attack_kind_from_name(const std::string& name) {
  for (AttackKind k : {AttackKind::kNone, AttackKind::kAdditiveNoise, AttackKind::kQuantize,
                       AttackKind::kLowpass, AttackKind::kAmplitudeClip}) {
    if (name == attack_kind_name(k)) return k;
  }
  throw ConfigError("unknown attack kind '" + name + "'");
}

AttackSpec attack_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("attack entry must be an object with a 'kind' field");
  }
  AttackSpec a;
  try {
    a.kind = attack_kind_from_name(j.at("kind").get<std::string>());
    for (const auto& [name, value] : j.items()) {
      if (name == "kind") continue;
      if (name == "sigma") a.sigma = value.get<double>();
      else if (name == "bits") a.bits = value.get<int>();
      else if (name == "fraction") a.fraction = value.get<double>();
      else if (name == "level") a.level = value.get<double>();
      else if (name == "seed") a.seed = value.get<std::uint64_t>();
      else throw ConfigError("unknown attack parameter '" + name + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad attack entry: ") + e.what());
  }
  a.validate();
  return a;
}

nlohmann::json attack_to_json(const AttackSpec& a) {
  nlohmann::json j;
  j["kind"] = attack_kind_name(a.kind);
  switch (a.kind) {
    case AttackKind::kNone: break;
    case AttackKind::kAdditiveNoise:
      j["sigma"] = a.sigma;
      j["seed"] = a.seed;
      break;
    case AttackKind::kQuantize: j["bits"] = a.bits; break;
    case AttackKind::kLowpass: j["fraction"] = a.fraction; break;
    case AttackKind::kAmplitudeClip: j["level"] = a.level; break;
  }
  return j;
}

Signal apply_attack(const Signal& x, const AttackSpec& a) {
  a.validate();
  if (!x.allFinite()) throw NumericalError("attack input signal is not finite");
  switch (a.kind) {
    case AttackKind::kNone:
      return x;
    case AttackKind::kAdditiveNoise: {
      Rng rng = Rng::stream(a.seed, "attack-noise");
      Signal out = x;
      for (Eigen::Index k = 0; k < out.size(); ++k) out[k] += a.sigma * rng.gaussian();
      return out;
    }
    case AttackKind::kQuantize: {
      const double peak = peak_amplitude(x);
      if (peak == 0.0) return x;
      const double step = 2.0 * peak / (std::ldexp(1.0, a.bits) - 1.0);
      Signal out(x.size());
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        out[k] = std::clamp(-peak + std::round((x[k] + peak) / step) * step, -peak, peak);
      }
      return out;
    }
    case AttackKind::kLowpass:
      return lowpass(x, a.fraction);
    case AttackKind::kAmplitudeClip: {
      const double limit = a.level * peak_amplitude(x);
      return x.cwiseMax(-limit).cwiseMin(limit);
    }
  }
  throw Error(ErrorCode::kInternal, "unhandled attack kind");
}

}  // namespace nstego
