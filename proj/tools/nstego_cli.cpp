// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through nstego.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nstego/nstego.h"

namespace {

struct ConfigDeleter {
  void operator()(nstego_config* c) const { nstego_config_free(c); }
};
struct TensorDeleter {
  void operator()(nstego_tensor* t) const { nstego_tensor_free(t); }
};
struct BufferDeleter {
  void operator()(nstego_buffer* b) const { nstego_buffer_free(b); }
};
using ConfigPtr = std::unique_ptr<nstego_config, ConfigDeleter>;
using TensorPtr = std::unique_ptr<nstego_tensor, TensorDeleter>;
using BufferPtr = std::unique_ptr<nstego_buffer, BufferDeleter>;

// Carries a library status out of a subcommand.
struct Failure {
  nstego_status status;
};

void check(nstego_status status, const char* what) {
  if (status != NSTEGO_OK) {
    std::cerr << "nstego: " << what << ": " << nstego_last_error() << "\n";
    throw Failure{status};
  }
}

std::string buffer_text(const nstego_buffer* b) {
  return {reinterpret_cast<const char*>(nstego_buffer_data(b)), nstego_buffer_size(b)};
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "nstego: cannot write " << path << "\n";
    throw Failure{NSTEGO_ERR_IO};
  }
  out << data;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "nstego: cannot open " << path << "\n";
    throw Failure{NSTEGO_ERR_IO};
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Options shared by every subcommand.
struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string key_hex;
  std::string key_file;

  void attach(CLI::App* cmd) {
    cmd->add_option("config", config_path, "Pipeline config file (JSON)")->required();
    cmd->add_option("--set", overrides, "Override a config field: key=value")
        ->allow_extra_args(false);
    cmd->add_option("--key", key_hex, "Stego key as 64 hex characters");
    cmd->add_option("--key-file", key_file, "Stego key file (32-byte PRDK record)");
  }

  ConfigPtr load() const {
    nstego_config* raw = nullptr;
    check(nstego_config_load(config_path.c_str(), &raw), "loading config");
    ConfigPtr cfg(raw);
    for (const auto& o : overrides) check(nstego_config_set(cfg.get(), o.c_str()), "applying --set");
    if (!key_file.empty()) {
      const auto record = read_file(key_file);
      nstego_key key{};
      check(nstego_key_decode(record.data(), record.size(), &key), "reading key file");
      check(nstego_config_set_key(cfg.get(), &key), "applying key");
    }
    if (!key_hex.empty()) {
      nstego_key key{};
      check(nstego_key_from_hex(key_hex.c_str(), &key), "parsing --key");
      check(nstego_config_set_key(cfg.get(), &key), "applying key");
    }
    return cfg;
  }
};

std::string config_string(const nstego_config* cfg, const char* field) {
  nstego_buffer* raw = nullptr;
  check(nstego_config_get(cfg, field, &raw), "reading config");
  BufferPtr b(raw);
  return nlohmann::json::parse(buffer_text(b.get())).get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Initial-noise diffusion steganography: embed, attack, extract, evaluate"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nstego_version()));

  // keygen
  Common keygen;
  std::string keygen_out;
  bool keygen_random = false;
  auto* keygen_cmd = app.add_subcommand("keygen", "Write the config's key as a PRDK file");
  keygen.attach(keygen_cmd);
  keygen_cmd->add_option("-o,--output", keygen_out, "Key file to write");
  keygen_cmd->add_flag("--random", keygen_random, "Draw fresh seeds from the system entropy source");

  // embed
  Common embed;
  std::string embed_message, embed_out, embed_noise_out;
  auto* embed_cmd = app.add_subcommand("embed", "Hide a message and generate the stego signal");
  embed.attach(embed_cmd);
  embed_cmd->add_option("-m,--message", embed_message, "Message file (raw bytes)")->required();
  embed_cmd->add_option("-o,--output", embed_out, "Signal tensor to write (PRDS)")->required();
  embed_cmd->add_option("--noise-out", embed_noise_out, "Also write the stego noise z_s (PRDS)");

  // extract
  Common extract;
  std::string extract_signal, extract_out;
  std::size_t extract_bytes = 0;
  auto* extract_cmd = app.add_subcommand("extract", "Recover the message from a signal");
  extract.attach(extract_cmd);
  extract_cmd->add_option("-s,--signal", extract_signal, "Signal tensor (PRDS)")->required();
  extract_cmd->add_option("-o,--output", extract_out, "Message file to write")->required();
  extract_cmd->add_option("--bytes", extract_bytes, "Truncate the payload to this many bytes");

  // attack
  Common attack;
  std::string attack_signal, attack_out, attack_json;
  std::size_t attack_index = 0;
  auto* attack_cmd = app.add_subcommand("attack", "Apply one channel attack to a signal");
  attack.attach(attack_cmd);
  attack_cmd->add_option("-s,--signal", attack_signal, "Signal tensor (PRDS)")->required();
  attack_cmd->add_option("-o,--output", attack_out, "Attacked signal to write")->required();
  attack_cmd->add_option("--attack", attack_json, "Attack as JSON, e.g. {\"kind\":\"lowpass\",\"fraction\":0.3}");
  attack_cmd->add_option("--index", attack_index, "Use entry INDEX of the config's attack suite");

  // evaluate
  Common evaluate;
  std::string evaluate_out, evaluate_csv;
  int evaluate_threads = 1;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Run trials x attack suite, write a report");
  evaluate.attach(evaluate_cmd);
  evaluate_cmd->add_option("-o,--output", evaluate_out, "Report JSON (default: report_path or stdout)");
  evaluate_cmd->add_option("--csv", evaluate_csv, "CSV prefix (default: csv_path)");
  evaluate_cmd->add_option("-j,--threads", evaluate_threads, "Worker threads")->check(CLI::PositiveNumber);

  // convergence-study
  Common study;
  std::string study_out;
  auto* study_cmd = app.add_subcommand("convergence-study", "Solver error vs. step count as CSV");
  study.attach(study_cmd);
  study_cmd->add_option("-o,--output", study_out, "CSV to write (default: csv_path or stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen_cmd) {
      ConfigPtr cfg = keygen.load();
      nstego_key key{};
      check(nstego_config_get_key(cfg.get(), &key), "reading key");
      if (keygen_random) {
        std::random_device rd;
        auto draw = [&] { return (static_cast<std::uint64_t>(rd()) << 32) | rd(); };
        key.matrix_seed = draw();
        key.magnitude_seed = draw();
        key.shuffle_seed = draw();
      }
      std::uint8_t record[NSTEGO_KEY_RECORD_SIZE];
      check(nstego_key_encode(&key, record), "encoding key");
      char hex[65];
      check(nstego_key_to_hex(&key, hex), "encoding key");
      if (!keygen_out.empty()) {
        write_output(keygen_out, std::string(reinterpret_cast<char*>(record), sizeof record));
      }
      std::cout << hex << "\n";
    } else if (*embed_cmd) {
      ConfigPtr cfg = embed.load();
      const auto message = read_file(embed_message);
      nstego_tensor* signal = nullptr;
      nstego_tensor* noise = nullptr;
      check(nstego_embed(cfg.get(), message.data(), message.size(), &signal,
                         embed_noise_out.empty() ? nullptr : &noise),
            "embedding");
      TensorPtr signal_ptr(signal), noise_ptr(noise);
      check(nstego_tensor_write(signal, embed_out.c_str()), "writing signal");
      if (noise) check(nstego_tensor_write(noise, embed_noise_out.c_str()), "writing noise");
    } else if (*extract_cmd) {
      ConfigPtr cfg = extract.load();
      nstego_tensor* raw = nullptr;
      check(nstego_tensor_read(extract_signal.c_str(), &raw), "reading signal");
      TensorPtr signal(raw);
      nstego_buffer* msg = nullptr;
      check(nstego_extract(cfg.get(), signal.get(), &msg), "extracting");
      BufferPtr message(msg);
      std::string bytes = buffer_text(message.get());
      if (extract_bytes > 0 && extract_bytes < bytes.size()) bytes.resize(extract_bytes);
      write_output(extract_out, bytes);
    } else if (*attack_cmd) {
      ConfigPtr cfg = attack.load();
      std::string spec = attack_json;
      if (spec.empty()) {
        nstego_buffer* raw = nullptr;
        check(nstego_config_get(cfg.get(), "attacks", &raw), "reading attacks");
        BufferPtr suite(raw);
        const auto attacks = nlohmann::json::parse(buffer_text(suite.get()));
        if (attack_index >= attacks.size()) {
          std::cerr << "nstego: attack index " << attack_index << " out of range\n";
          return NSTEGO_ERR_CONFIG;
        }
        spec = attacks[attack_index].dump();
      }
      nstego_tensor* raw = nullptr;
      check(nstego_tensor_read(attack_signal.c_str(), &raw), "reading signal");
      TensorPtr signal(raw);
      nstego_tensor* attacked = nullptr;
      check(nstego_attack(signal.get(), spec.c_str(), &attacked), "attacking");
      TensorPtr out(attacked);
      check(nstego_tensor_write(out.get(), attack_out.c_str()), "writing signal");
    } else if (*evaluate_cmd) {
      ConfigPtr cfg = evaluate.load();
      const std::string out_path =
          evaluate_out.empty() ? config_string(cfg.get(), "report_path") : evaluate_out;
      const std::string csv_prefix =
          evaluate_csv.empty() ? config_string(cfg.get(), "csv_path") : evaluate_csv;
      nstego_buffer *report = nullptr, *ber = nullptr, *res = nullptr, *loss = nullptr;
      const bool tables = !csv_prefix.empty();
      check(nstego_evaluate_tables(cfg.get(), evaluate_threads, &report, tables ? &ber : nullptr,
                                   tables ? &res : nullptr, tables ? &loss : nullptr),
            "evaluating");
      BufferPtr report_ptr(report), ber_ptr(ber), res_ptr(res), loss_ptr(loss);
      write_output(out_path, buffer_text(report));
      if (tables) {
        write_output(csv_prefix + ".ber.csv", buffer_text(ber));
        write_output(csv_prefix + ".residuals.csv", buffer_text(res));
        write_output(csv_prefix + ".loss.csv", buffer_text(loss));
      }
    } else if (*study_cmd) {
      ConfigPtr cfg = study.load();
      const std::string out_path =
          study_out.empty() ? config_string(cfg.get(), "csv_path") : study_out;
      nstego_buffer* raw = nullptr;
      check(nstego_convergence_study(cfg.get(), &raw), "convergence study");
      BufferPtr csv(raw);
      write_output(out_path, buffer_text(csv.get()));
    }
  } catch (const Failure& f) {
    return static_cast<int>(f.status);
  }
  return 0;
}
