// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include "nstego/nstego.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nstego/attacks.hpp"
#include "nstego/config.hpp"
#include "nstego/error.hpp"
#include "nstego/io.hpp"
#include "nstego/message_codec.hpp"
#include "nstego/pipeline.hpp"

struct nstego_config {
  nlohmann::json source;
  nstego::PipelineConfig resolved;
};

struct nstego_tensor {
  nstego::RawTensor raw;
};

struct nstego_buffer {
  std::vector<std::uint8_t> bytes;
};

namespace {

thread_local std::string g_last_error;

nstego_status fail(nstego_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps every exception to a status code; nothing escapes the C boundary.
template <typename Fn>
nstego_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return NSTEGO_OK;
  } catch (const nstego::Error& e) {
    return fail(static_cast<nstego_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(NSTEGO_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(NSTEGO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NSTEGO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NSTEGO_ERR_INTERNAL, "unknown error");
  }
}

nstego_buffer* make_buffer(const std::string& text) {
  auto* b = new nstego_buffer;
  b->bytes.assign(text.begin(), text.end());
  return b;
}

nstego::StegoKey to_key(const nstego_key& k) {
  return {k.matrix_seed, k.magnitude_seed, k.shuffle_seed, k.block_size};
}

nstego_key from_key(const nstego::StegoKey& k) {
  return {k.matrix_seed, k.magnitude_seed, k.shuffle_seed,
          static_cast<std::uint16_t>(k.block_size)};
}

nstego::Signal signal_from(const nstego_tensor& t) {
  if (t.raw.dims.size() != 1) {
    throw nstego::ShapeError("signal tensor must have rank 1, got rank " +
                             std::to_string(t.raw.dims.size()));
  }
  return Eigen::Map<const Eigen::VectorXd>(t.raw.values.data(),
                                          static_cast<Eigen::Index>(t.raw.values.size()));
}

nstego_tensor* tensor_from_signal(const nstego::Signal& x) {
  auto* t = new nstego_tensor;
  t->raw.dims = {static_cast<std::uint32_t>(x.size())};
  t->raw.values.assign(x.data(), x.data() + x.size());
  return t;
}

nstego_tensor* tensor_from_latent(const nstego::Tensor& z) {
  auto* t = new nstego_tensor;
  t->raw.dims = {static_cast<std::uint32_t>(z.rows()), static_cast<std::uint32_t>(z.cols())};
  t->raw.values.assign(z.data(), z.data() + z.size());
  return t;
}

#define NSTEGO_REQUIRE(cond, what)                         \
  do {                                                     \
    if (!(cond)) return fail(NSTEGO_ERR_ARGUMENT, (what)); \
  } while (0)

}  // namespace

extern "C" {

const char* nstego_version(void) { return "1.0.0"; }

const char* nstego_last_error(void) { return g_last_error.c_str(); }

nstego_status nstego_config_parse(const char* json_text, nstego_config** out) {
  NSTEGO_REQUIRE(json_text && out, "nstego_config_parse: null argument");
  return guarded([&] {
    auto cfg = std::make_unique<nstego_config>();
    try {
      cfg->source = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw nstego::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg->resolved = nstego::config_from_json(cfg->source);
    *out = cfg.release();
  });
}

nstego_status nstego_config_load(const char* path, nstego_config** out) {
  NSTEGO_REQUIRE(path && out, "nstego_config_load: null argument");
  return guarded([&] {
    std::vector<std::uint8_t> bytes;
    try {
      bytes = nstego::read_binary_file(path);
    } catch (const nstego::IoError& e) {
      throw nstego::ConfigError(e.what());
    }
    const std::string text(bytes.begin(), bytes.end());
    auto cfg = std::make_unique<nstego_config>();
    try {
      cfg->source = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw nstego::ConfigError(std::string(path) + " is not valid JSON: " + e.what());
    }
    cfg->resolved = nstego::config_from_json(cfg->source);
    *out = cfg.release();
  });
}

nstego_status nstego_config_set(nstego_config* cfg, const char* assignment) {
  NSTEGO_REQUIRE(cfg && assignment, "nstego_config_set: null argument");
  return guarded([&] {
    nlohmann::json updated = cfg->source;
    nstego::apply_override(updated, assignment);
    cfg->resolved = nstego::config_from_json(updated);
    cfg->source = std::move(updated);
  });
}

nstego_status nstego_config_fingerprint(const nstego_config* cfg, uint64_t* out) {
  NSTEGO_REQUIRE(cfg && out, "nstego_config_fingerprint: null argument");
  return guarded([&] { *out = nstego::config_fingerprint(cfg->resolved); });
}

nstego_status nstego_config_capacity_bits(const nstego_config* cfg, uint64_t* out) {
  NSTEGO_REQUIRE(cfg && out, "nstego_config_capacity_bits: null argument");
  return guarded([&] {
    const auto& c = cfg->resolved;
    *out = static_cast<uint64_t>(c.block_count()) * c.key.block_size * c.key.block_size;
  });
}

nstego_status nstego_config_canonical(const nstego_config* cfg, nstego_buffer** out) {
  NSTEGO_REQUIRE(cfg && out, "nstego_config_canonical: null argument");
  return guarded([&] { *out = make_buffer(nstego::canonical_config_text(cfg->resolved)); });
}

nstego_status nstego_config_get(const nstego_config* cfg, const char* key, nstego_buffer** out) {
  NSTEGO_REQUIRE(cfg && key && out, "nstego_config_get: null argument");
  return guarded([&] {
    const nlohmann::json j = nstego::config_to_json(cfg->resolved);
    if (!j.contains(key)) throw nstego::ConfigError(std::string("unknown config field '") + key + "'");
    *out = make_buffer(j.at(key).dump());
  });
}

nstego_status nstego_config_get_key(const nstego_config* cfg, nstego_key* out) {
  NSTEGO_REQUIRE(cfg && out, "nstego_config_get_key: null argument");
  *out = from_key(cfg->resolved.key);
  return NSTEGO_OK;
}

nstego_status nstego_config_set_key(nstego_config* cfg, const nstego_key* key) {
  NSTEGO_REQUIRE(cfg && key, "nstego_config_set_key: null argument");
  return guarded([&] {
    nlohmann::json updated = cfg->source;
    updated.erase("key_hex");
    updated.erase("key_file");
    updated["matrix_seed"] = key->matrix_seed;
    updated["magnitude_seed"] = key->magnitude_seed;
    updated["shuffle_seed"] = key->shuffle_seed;
    updated["block_size"] = key->block_size;
    cfg->resolved = nstego::config_from_json(updated);
    cfg->source = std::move(updated);
  });
}

void nstego_config_free(nstego_config* cfg) { delete cfg; }

nstego_status nstego_key_encode(const nstego_key* key, uint8_t out[NSTEGO_KEY_RECORD_SIZE]) {
  NSTEGO_REQUIRE(key && out, "nstego_key_encode: null argument");
  return guarded([&] {
    const auto record = nstego::serialize_key(to_key(*key));
    std::memcpy(out, record.data(), record.size());
  });
}

nstego_status nstego_key_decode(const uint8_t* record, size_t size, nstego_key* out) {
  NSTEGO_REQUIRE(record && out, "nstego_key_decode: null argument");
  return guarded([&] { *out = from_key(nstego::parse_key({record, size})); });
}

nstego_status nstego_key_to_hex(const nstego_key* key, char out[65]) {
  NSTEGO_REQUIRE(key && out, "nstego_key_to_hex: null argument");
  return guarded([&] {
    const std::string hex = nstego::key_to_hex(to_key(*key));
    std::memcpy(out, hex.c_str(), hex.size() + 1);
  });
}

nstego_status nstego_key_from_hex(const char* hex, nstego_key* out) {
  NSTEGO_REQUIRE(hex && out, "nstego_key_from_hex: null argument");
  return guarded([&] { *out = from_key(nstego::key_from_hex(hex)); });
}

nstego_status nstego_tensor_create(const uint32_t* dims, size_t rank, const double* values,
                                   nstego_tensor** out) {
  NSTEGO_REQUIRE(out && (rank == 0 || dims), "nstego_tensor_create: null argument");
  return guarded([&] {
    auto t = std::make_unique<nstego_tensor>();
    t->raw.dims.assign(dims, dims + rank);
    const std::size_t n = t->raw.element_count();
    if (n > 0 && !values) throw nstego::Error(nstego::ErrorCode::kInvalidArgument, "null values");
    t->raw.values.assign(values, values + n);
    *out = t.release();
  });
}

nstego_status nstego_tensor_read(const char* path, nstego_tensor** out) {
  NSTEGO_REQUIRE(path && out, "nstego_tensor_read: null argument");
  return guarded([&] {
    auto t = std::make_unique<nstego_tensor>();
    t->raw = nstego::read_tensor_file(path);
    *out = t.release();
  });
}

nstego_status nstego_tensor_write(const nstego_tensor* t, const char* path) {
  NSTEGO_REQUIRE(t && path, "nstego_tensor_write: null argument");
  return guarded([&] { nstego::write_tensor_file(path, t->raw); });
}

size_t nstego_tensor_rank(const nstego_tensor* t) { return t ? t->raw.dims.size() : 0; }

uint32_t nstego_tensor_dim(const nstego_tensor* t, size_t axis) {
  return t && axis < t->raw.dims.size() ? t->raw.dims[axis] : 0;
}

size_t nstego_tensor_size(const nstego_tensor* t) { return t ? t->raw.values.size() : 0; }

const double* nstego_tensor_data(const nstego_tensor* t) {
  return t ? t->raw.values.data() : nullptr;
}

void nstego_tensor_free(nstego_tensor* t) { delete t; }

size_t nstego_buffer_size(const nstego_buffer* b) { return b ? b->bytes.size() : 0; }

const uint8_t* nstego_buffer_data(const nstego_buffer* b) {
  return b ? b->bytes.data() : nullptr;
}

void nstego_buffer_free(nstego_buffer* b) { delete b; }

nstego_status nstego_embed(const nstego_config* cfg, const uint8_t* message, size_t size,
                           nstego_tensor** signal, nstego_tensor** stego_noise) {
  NSTEGO_REQUIRE(cfg && signal && (message || size == 0), "nstego_embed: null argument");
  return guarded([&] {
    const nstego::Pipeline pipe(cfg->resolved);
    const auto bits = nstego::bits_from_bytes({message, size}, pipe.blocks(), cfg->resolved.key);
    const nstego::SenderOutput sent = pipe.embed_and_generate(bits);
    std::unique_ptr<nstego_tensor> sig(tensor_from_signal(sent.signal));
    if (stego_noise) *stego_noise = tensor_from_latent(sent.stego_noise);
    *signal = sig.release();
  });
}

nstego_status nstego_extract(const nstego_config* cfg, const nstego_tensor* signal,
                             nstego_buffer** message) {
  NSTEGO_REQUIRE(cfg && signal && message, "nstego_extract: null argument");
  return guarded([&] {
    const nstego::Pipeline pipe(cfg->resolved);
    const nstego::ReceiverOutput rx = pipe.receive_and_extract(signal_from(*signal));
    auto* b = new nstego_buffer;
    b->bytes = nstego::bytes_from_bits(rx.message);
    *message = b;
  });
}

nstego_status nstego_attack(const nstego_tensor* signal, const char* attack_json,
                            nstego_tensor** out) {
  NSTEGO_REQUIRE(signal && attack_json && out, "nstego_attack: null argument");
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(attack_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw nstego::ConfigError(std::string("attack is not valid JSON: ") + e.what());
    }
    const nstego::AttackSpec spec = nstego::attack_from_json(j);
    *out = tensor_from_signal(nstego::apply_attack(signal_from(*signal), spec));
  });
}

nstego_status nstego_evaluate_tables(const nstego_config* cfg, int threads,
                                     nstego_buffer** report_json, nstego_buffer** ber_csv,
                                     nstego_buffer** residual_csv, nstego_buffer** loss_csv) {
  NSTEGO_REQUIRE(cfg, "nstego_evaluate: null config");
  return guarded([&] {
    const nstego::EvalReport report = nstego::run_evaluation(cfg->resolved, threads);
    std::unique_ptr<nstego_buffer> json(make_buffer(report.to_string()));
    std::unique_ptr<nstego_buffer> ber(ber_csv ? make_buffer(report.ber_csv()) : nullptr);
    std::unique_ptr<nstego_buffer> res(residual_csv ? make_buffer(report.residual_csv()) : nullptr);
    std::unique_ptr<nstego_buffer> loss(loss_csv ? make_buffer(report.loss_csv()) : nullptr);
    if (report_json) *report_json = json.release();
    if (ber_csv) *ber_csv = ber.release();
    if (residual_csv) *residual_csv = res.release();
    if (loss_csv) *loss_csv = loss.release();
  });
}

nstego_status nstego_evaluate(const nstego_config* cfg, int threads, nstego_buffer** report_json) {
  NSTEGO_REQUIRE(report_json, "nstego_evaluate: null output");
  return nstego_evaluate_tables(cfg, threads, report_json, nullptr, nullptr, nullptr);
}

nstego_status nstego_convergence_study(const nstego_config* cfg, nstego_buffer** csv) {
  NSTEGO_REQUIRE(cfg && csv, "nstego_convergence_study: null argument");
  return guarded([&] {
    *csv = make_buffer(nstego::study_to_csv(nstego::convergence_study(cfg->resolved)));
  });
}

}  // extern "C"
