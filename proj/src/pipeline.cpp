// Copyright 2026 The nstego Authors
// SPDX-License-Identifier: Apache-2.0

#include "nstego/pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "nstego/attacks.hpp"
#include "nstego/error.hpp"
#include "nstego/latent_opt.hpp"
#include "nstego/random.hpp"

namespace nstego {
namespace {

// Runs task(0..count-1) on up to `threads` workers. Each task writes only its
// own output slot, so scheduling order never shows up in results.
template <typename Task>
void parallel_for(std::size_t count, int threads, Task&& task) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double relative_error(const Tensor& a, const Tensor& reference) {
  return (a - reference).norm() / reference.norm();
}

std::uint64_t attack_seed(std::uint64_t master, const AttackSpec& a, int trial) {
  // Independent of the attack's position in the suite, so that entries which
  // differ only in strength see the same noise realization.
  return Rng::stream(master ^ a.seed, "attack", static_cast<std::uint64_t>(trial)).next_u64();
}

}  // namespace

std::uint64_t trial_message_seed(std::uint64_t master_seed, int trial) {
  return Rng::stream(master_seed, "trial-message", static_cast<std::uint64_t>(trial)).next_u64();
}

std::unique_ptr<DataPredictor> make_predictor(const OracleSpec& spec, LatentShape shape) {
  switch (spec.kind) {
    case OracleKind::kZero:
      return std::make_unique<ZeroPredictor>();
    case OracleKind::kGaussian:
      return std::make_unique<GaussianOracle>(
          GaussianOracle::seeded(shape, spec.seed, spec.mean_scale, spec.var_lo, spec.var_hi));
    case OracleKind::kMixture:
      return std::make_unique<MixtureOracle>(
          MixtureOracle::seeded(shape, spec.seed, spec.components, spec.radius));
  }
  throw Error(ErrorCode::kInternal, "unhandled oracle kind");
}

Pipeline::Pipeline(PipelineConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))),
      blocks_(cfg_.block_count()),
      schedule_(cfg_.schedule.num_steps, cfg_.schedule.t_min, cfg_.schedule.t_max),
      predictor_(make_predictor(cfg_.oracle, cfg_.shape)),
      codec_(LatentCodec::seeded(cfg_.shape, cfg_.codec.seed, cfg_.codec.expansion,
                                 cfg_.codec.nonlinearity)) {}

long long Pipeline::capacity_bits() const {
  return static_cast<long long>(blocks_) * cfg_.key.block_size * cfg_.key.block_size;
}

SenderOutput Pipeline::embed_and_generate(const MessageBits& message) const {
  if (message.block_size() != cfg_.key.block_size || message.blocks() != blocks_) {
    throw ShapeError("message must have " + std::to_string(blocks_) + " blocks of " +
                     std::to_string(cfg_.key.block_size) + "x" +
                     std::to_string(cfg_.key.block_size));
  }
  SenderOutput out;
  out.stego_noise = embed(message, cfg_.key, cfg_.shape);
  Trajectory traj = sample(cfg_.order, out.stego_noise, schedule_, *predictor_);
  out.clean_latent = std::move(traj.states.back());
  out.signal = codec_.decode(out.clean_latent);
  return out;
}

ReceiverOutput Pipeline::receive_and_extract(const Signal& signal) const {
  if (signal.size() != codec_.signal_length()) {
    throw ShapeError("signal length " + std::to_string(signal.size()) + " does not match codec " +
                     std::to_string(codec_.signal_length()));
  }
  Tensor latent;
  std::vector<double> loss_curve;
  if (cfg_.latent_opt) {
    OptimizationResult opt = optimize_latent(signal, codec_, cfg_.optimizer);
    latent = std::move(opt.latent);
    loss_curve = std::move(opt.loss);
  } else {
    latent = codec_.encode(signal);
  }
  InversionResult inv = invert(cfg_.order, cfg_.inversion, latent, schedule_, *predictor_,
                               cfg_.solver);
  MessageBits message = extract(inv.noise, cfg_.key, blocks_);
  return {std::move(message), std::move(inv.noise), std::move(inv.steps), std::move(loss_curve)};
}

EvalReport run_evaluation(const PipelineConfig& cfg, int threads) {
  const Pipeline pipe(cfg);
  const int trials = cfg.trials;
  const int n = cfg.key.block_size;

  std::vector<MessageBits> messages;
  messages.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    messages.push_back(MessageBits::random(pipe.blocks(), n, trial_message_seed(cfg.seed, t)));
  }
  std::vector<SenderOutput> sent(static_cast<std::size_t>(trials));
  parallel_for(sent.size(), threads, [&](std::size_t t) {
    sent[t] = pipe.embed_and_generate(messages[t]);
  });

  EvalReport report;
  report.config_text = canonical_config_text(cfg);
  report.fingerprint = config_fingerprint(cfg);

  const std::size_t attack_count = cfg.attacks.size();
  std::vector<TrialResult> results(attack_count * static_cast<std::size_t>(trials));
  parallel_for(results.size(), threads, [&](std::size_t task) {
    const std::size_t a = task / static_cast<std::size_t>(trials);
    const int t = static_cast<int>(task % static_cast<std::size_t>(trials));
    AttackSpec attack = cfg.attacks[a];
    attack.seed = attack_seed(cfg.seed, cfg.attacks[a], t);
    const Signal received = apply_attack(sent[static_cast<std::size_t>(t)].signal, attack);
    ReceiverOutput rx = pipe.receive_and_extract(received);

    TrialResult& r = results[task];
    r.trial = t;
    r.ber = bit_error_rate(messages[static_cast<std::size_t>(t)], rx.message);
    for (const auto& step : rx.residuals) {
      r.residuals.push_back(step.residual);
      r.max_residual = std::max(r.max_residual, step.residual);
      if (!step.converged) ++r.unconverged_steps;
    }
    r.loss_curve = std::move(rx.loss_curve);
  });

  for (std::size_t a = 0; a < attack_count; ++a) {
    AttackResult ar;
    ar.attack = cfg.attacks[a];
    std::vector<double> bers;
    for (int t = 0; t < trials; ++t) {
      ar.trials.push_back(std::move(results[a * static_cast<std::size_t>(trials) +
                                            static_cast<std::size_t>(t)]));
      bers.push_back(ar.trials.back().ber);
    }
    ar.ber = summarize(bers);
    report.attacks.push_back(std::move(ar));
  }

  std::vector<double> pooled;
  for (const auto& s : sent) pooled.insert(pooled.end(), s.stego_noise.data(),
                                           s.stego_noise.data() + s.stego_noise.size());
  report.gaussianity_samples = pooled.size();
  if (pooled.size() >= 1000) report.gaussianity = gaussianity_test(pooled);
  return report;
}

nlohmann::json EvalReport::to_json() const {
  using nlohmann::json;
  json j;
  j["format"] = "nstego-report";
  j["version"] = 1;
  char fp[17];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(fingerprint));
  j["fingerprint"] = fp;
  j["config"] = json::parse(config_text);
  if (gaussianity_samples >= 1000) {
    j["gaussianity"] = {{"samples", gaussianity_samples},
                        {"ks_statistic", gaussianity.statistic},
                        {"p_value", gaussianity.p_value}};
  } else {
    j["gaussianity"] = {{"samples", gaussianity_samples}, {"ks_statistic", nullptr},
                        {"p_value", nullptr}};
  }
  j["attacks"] = json::array();
  for (std::size_t a = 0; a < attacks.size(); ++a) {
    const auto& ar = attacks[a];
    json ja;
    ja["index"] = a;
    ja["label"] = ar.attack.label();
    ja["attack"] = attack_to_json(ar.attack);
    ja["mean_ber"] = ar.ber.mean;
    ja["std_ber"] = ar.ber.std;
    ja["stderr_ber"] = ar.ber.standard_error;
    ja["trials"] = json::array();
    for (const auto& t : ar.trials) {
      ja["trials"].push_back({{"trial", t.trial},
                              {"ber", t.ber},
                              {"max_residual", t.max_residual},
                              {"unconverged_steps", t.unconverged_steps},
                              {"residuals", t.residuals},
                              {"loss_curve", t.loss_curve}});
    }
    j["attacks"].push_back(std::move(ja));
  }
  return j;
}

std::string EvalReport::to_string() const { return to_json().dump(2) + "\n"; }

std::string EvalReport::ber_csv() const {
  std::ostringstream out;
  out << "attack_index,attack,trial,ber,max_residual,unconverged_steps\n";
  for (std::size_t a = 0; a < attacks.size(); ++a) {
    for (const auto& t : attacks[a].trials) {
      out << a << ",\"" << attacks[a].attack.label() << "\"," << t.trial << ','
          << format_double(t.ber) << ',' << format_double(t.max_residual) << ','
          << t.unconverged_steps << '\n';
    }
  }
  return out.str();
}

std::string EvalReport::residual_csv() const {
  std::ostringstream out;
  out << "attack_index,trial,step,residual\n";
  for (std::size_t a = 0; a < attacks.size(); ++a) {
    for (const auto& t : attacks[a].trials) {
      for (std::size_t s = 0; s < t.residuals.size(); ++s) {
        out << a << ',' << t.trial << ',' << s + 1 << ',' << format_double(t.residuals[s]) << '\n';
      }
    }
  }
  return out.str();
}

std::string EvalReport::loss_csv() const {
  std::ostringstream out;
  out << "attack_index,trial,iteration,loss\n";
  for (std::size_t a = 0; a < attacks.size(); ++a) {
    for (const auto& t : attacks[a].trials) {
      for (std::size_t k = 0; k < t.loss_curve.size(); ++k) {
        out << a << ',' << t.trial << ',' << k << ',' << format_double(t.loss_curve[k]) << '\n';
      }
    }
  }
  return out.str();
}

std::vector<StudyRow> convergence_study(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.study_steps.empty()) throw ConfigError("config field 'study_steps' is empty");
  const int blocks = cfg.block_count();
  const auto predictor = make_predictor(cfg.oracle, cfg.shape);
  const MessageBits message =
      MessageBits::random(blocks, cfg.key.block_size, trial_message_seed(cfg.seed, 0));
  const Tensor z_T = embed(message, cfg.key, cfg.shape);

  const int finest = *std::max_element(cfg.study_steps.begin(), cfg.study_steps.end());
  const NoiseSchedule reference_schedule(10 * finest, cfg.schedule.t_min, cfg.schedule.t_max);
  const Tensor reference = sample_second_order(z_T, reference_schedule, *predictor).final_state();

  SolverConfig solver = cfg.solver;
  solver.strict = false;
  std::vector<StudyRow> rows;
  for (int steps : cfg.study_steps) {
    const NoiseSchedule s(steps, cfg.schedule.t_min, cfg.schedule.t_max);
    for (SolverOrder order : {SolverOrder::kFirst, SolverOrder::kSecond}) {
      const Tensor x0 = sample(order, z_T, s, *predictor).final_state();
      for (InversionMode mode : {InversionMode::kNaive, InversionMode::kBackwardEuler}) {
        StudyRow row;
        row.steps = steps;
        row.order = order;
        row.mode = mode;
        row.sampling_error = relative_error(x0, reference);
        row.roundtrip_error = relative_error(invert(order, mode, x0, s, *predictor, solver).noise, z_T);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string study_to_csv(const std::vector<StudyRow>& rows) {
  std::ostringstream out;
  out << "steps,solver,inversion,sampling_error,roundtrip_error\n";
  for (const auto& r : rows) {
    out << r.steps << ',' << (r.order == SolverOrder::kFirst ? "first_order" : "second_order")
        << ',' << inversion_mode_name(r.mode) << ',' << format_double(r.sampling_error) << ','
        << format_double(r.roundtrip_error) << '\n';
  }
  return out.str();
}

}  // namespace nstego
