// Copyright 2026 The dualcons Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dualcons/trainer.h"

#include <cmath>
#include <utility>

#include "dualcons/errors.h"
#include "dualcons/io.h"

namespace dualcons {
namespace {

// Stream salts; each random consumer gets its own derived seed.
constexpr std::uint64_t kInitSalt = 1;
constexpr std::uint64_t kPoolSalt = 2;
constexpr std::uint64_t kDiscoverySalt = 3;
constexpr std::uint64_t kProbeSalt = 1000;

constexpr int kDiscoveryProbeSize = 256;

template <typename F>
double mean_of(const std::vector<RewardBreakdown>& rewards, F field) {
  double s = 0.0;
  for (const auto& r : rewards) s += field(r);
  return s / static_cast<double>(rewards.size());
}

}  // namespace

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::kBiased: return "biased";
    case InitKind::kZero: return "zero";
    case InitKind::kOracle: return "oracle";
  }
  return "?";
}

InitKind parse_init_kind(const std::string& name) {
  if (name == "biased") return InitKind::kBiased;
  if (name == "zero") return InitKind::kZero;
  if (name == "oracle") return InitKind::kOracle;
  throw InvalidArgument("init must be one of biased, zero, oracle (got '" + name + "')");
}

void validate(const TrainConfig& config) {
  if (config.total_steps < 0) throw InvalidArgument("total_steps must be >= 0");
  if (config.group_size < 2 || config.group_size % 2 != 0) {
    throw InvalidArgument("group_size must be even and >= 2");
  }
  if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda)) {
    throw InvalidArgument("lambda must be finite and >= 0");
  }
  if (!(config.beta >= 0.0) || !std::isfinite(config.beta)) {
    throw InvalidArgument("beta must be finite and >= 0");
  }
  if (!(config.lr > 0.0) || !std::isfinite(config.lr)) {
    throw InvalidArgument("lr must be finite and > 0");
  }
  if (!(config.bias_strength >= 0.0) || !std::isfinite(config.bias_strength)) {
    throw InvalidArgument("bias_strength must be finite and >= 0");
  }
  if (config.hidden_units < 0) throw InvalidArgument("hidden_units must be >= 0");
  if (config.checkpoint_interval < 0) throw InvalidArgument("checkpoint_interval must be >= 0");
  validate(config.pool);
  validate(config.env);
}

TrainerState initial_state(const TrainConfig& config) {
  validate(config);
  Rng init_rng(derive_seed(config.seed, kInitSalt));
  PolicyParams params(config.hidden_units);
  switch (config.init) {
    case InitKind::kBiased:
      params = biased_init(init_rng, config.bias_strength, config.hidden_units);
      break;
    case InitKind::kZero:
      break;
    case InitKind::kOracle:
      params = oracle_params(20.0, config.hidden_units);
      break;
  }
  TrainerState state{0, params, params, initial_pool(config.pool), Rng(config.seed),
                     Rng(derive_seed(config.seed, kPoolSalt))};
  return state;
}

std::vector<Example> discovery_probe(const TrainConfig& config) {
  Rng rng(derive_seed(config.seed, kDiscoverySalt));
  std::vector<Example> probe;
  for (int i = 0; i < kDiscoveryProbeSize; ++i) probe.push_back(sample_example(rng, config.env));
  return probe;
}

std::vector<Example> probe_set_for_step(const TrainConfig& config, std::int64_t step) {
  Rng rng(derive_seed(config.seed, kProbeSalt + static_cast<std::uint64_t>(step)));
  std::vector<Example> probe;
  probe.reserve(static_cast<std::size_t>(config.pool.probe_size));
  for (int i = 0; i < config.pool.probe_size; ++i) probe.push_back(sample_example(rng, config.env));
  return probe;
}

Trainer::Trainer(TrainConfig config) : Trainer(config, initial_state(config)) {}

Trainer::Trainer(TrainConfig config, TrainerState state)
    : config_(std::move(config)), state_(std::move(state)) {
  validate(config_);
  if (config_.corpus_path) {
    corpus_ = load_corpus(*config_.corpus_path);
    if (corpus_.empty()) throw InvalidArgument("corpus " + *config_.corpus_path + " is empty");
  }
  if (config_.consistency_enabled) discovery_probe_ = discovery_probe(config_);
}

Example Trainer::next_example() {
  if (!corpus_.empty()) {
    return corpus_[static_cast<std::size_t>(state_.step % static_cast<std::int64_t>(corpus_.size()))];
  }
  return sample_example(state_.rng, config_.env);
}

StepMetrics Trainer::step() {
  // Work on a copy so that a failed step leaves the state untouched.
  TrainerState next = state_;
  std::swap(next, state_);
  try {
    const int g = config_.group_size;
    StepMetrics metrics;
    metrics.step = state_.step + 1;

    const Example example = next_example();
    metrics.kind = example.query.kind;
    const OptionFeatures features = extract_features(example.scene, example.query);
    const auto primaries = sample_completions(state_.params, features, g, state_.rng);
    metrics.generation_calls = g;

    std::vector<double> consistency(static_cast<std::size_t>(g), 0.0);
    std::optional<std::pair<Scene, Query>> dual_input;
    std::vector<Completion> duals;
    std::optional<DualityOp> op;
    if (config_.consistency_enabled) {
      const Selection selection =
          select_for_step(state_.pool, example.scene, example.query, state_.pool_rng, config_.pool);
      metrics.spot_check = selection.spot_check;
      metrics.mastered_available = state_.pool.count(OpState::kMastered) > 0;
      metrics.working_set_size = selection.working_set_size;
      op = selection.op;
      if (op) {
        metrics.op_id = op->id();
        dual_input = op->apply(example.scene, example.query);
        const OptionFeatures dual_features = extract_features(dual_input->first, dual_input->second);
        duals = sample_completions(state_.params, dual_features, g / 2, state_.pool_rng);
        metrics.generation_calls += g / 2;
        for (int i = 0; i < g; ++i) {
          consistency[static_cast<std::size_t>(i)] =
              consistency_reward(*op, primaries[static_cast<std::size_t>(i)], duals, example.query,
                                 dual_input->second, config_.lambda);
        }
      }
    }
    metrics.active_count = state_.pool.count(OpState::kActive);

    std::vector<RewardBreakdown> rewards;
    std::vector<double> totals;
    for (int i = 0; i < g; ++i) {
      rewards.push_back(total_reward(primaries[static_cast<std::size_t>(i)], example.answer,
                                     consistency[static_cast<std::size_t>(i)]));
      totals.push_back(rewards.back().total);
    }
    const AdvantageGroup group = group_advantages(totals);
    metrics.degenerate = group.degenerate;
    metrics.mean_accuracy = mean_of(rewards, [](const RewardBreakdown& r) { return r.accuracy; });
    metrics.mean_format = mean_of(rewards, [](const RewardBreakdown& r) { return r.format; });
    metrics.mean_consistency = mean_of(rewards, [](const RewardBreakdown& r) { return r.consistency; });
    metrics.mean_total = mean_of(rewards, [](const RewardBreakdown& r) { return r.total; });
    metrics.kl = kl_to_reference(state_.params, state_.reference, features).value;

    PolicyParams updated = grpo_update(state_.params, state_.reference, features, primaries,
                                       group.advantages, config_.beta, config_.lr);

    if (config_.dual_gradient && op) {
      // Symmetric variant: duals are scored against the dual ground truth and
      // against the inverse view of the primaries.
      const AnswerIndex dual_truth = ground_truth(dual_input->first, dual_input->second);
      const OptionFeatures dual_features = extract_features(dual_input->first, dual_input->second);
      std::vector<double> dual_totals;
      for (const auto& dual : duals) {
        int agree = 0;
        for (const auto& primary : primaries) {
          agree += op->map_answer(example.query, dual_input->second, primary.answer) == dual.answer;
        }
        const double cons = config_.lambda * agree / static_cast<double>(primaries.size());
        dual_totals.push_back(total_reward(dual, dual_truth, cons).total);
      }
      const AdvantageGroup dual_group = group_advantages(dual_totals);
      updated = grpo_update(updated, state_.reference, dual_features, duals, dual_group.advantages,
                            config_.beta, config_.lr);
    }
    state_.params = std::move(updated);
    state_.step = metrics.step;

    last_probes_.clear();
    if (config_.consistency_enabled && state_.step % config_.pool.eval_interval == 0) {
      discover_candidates(state_.pool, discovery_probe_, config_.pool, config_.env,
                          derive_seed(config_.seed, kDiscoverySalt), state_.step);
      const auto probe = probe_set_for_step(config_, state_.step);
      last_probes_ = evaluate_pool(state_.pool, state_.params, probe, config_.pool, state_.step);
    }
    return metrics;
  } catch (...) {
    std::swap(next, state_);
    throw;
  }
}

RunResult run_training(Trainer& trainer, const RunObserver& observer) {
  RunResult result;
  std::size_t journal_seen = 0;
  auto flush_journal = [&] {
    const auto& journal = trainer.state().pool.journal;
    for (; journal_seen < journal.size(); ++journal_seen) {
      result.journal.push_back(journal[journal_seen]);
      if (observer.on_journal) observer.on_journal(journal[journal_seen]);
    }
  };
  flush_journal();
  const auto interval = trainer.config().checkpoint_interval;
  while (!trainer.finished()) {
    StepMetrics metrics;
    try {
      metrics = trainer.step();
    } catch (const NumericalError&) {
      if (observer.on_checkpoint) observer.on_checkpoint(trainer, "diagnostic");
      throw;
    }
    result.metrics.push_back(metrics);
    if (observer.on_metrics) observer.on_metrics(metrics);
    for (const auto& probe : trainer.last_probes()) {
      result.probes.push_back(probe);
      if (observer.on_probe) observer.on_probe(probe);
    }
    flush_journal();
    if (interval > 0 && trainer.state().step % interval == 0 && !trainer.finished() &&
        observer.on_checkpoint) {
      observer.on_checkpoint(trainer, "step_" + std::to_string(trainer.state().step));
    }
  }
  if (observer.on_checkpoint) observer.on_checkpoint(trainer, "final");
  result.final_params = trainer.state().params;
  result.final_state = trainer.state();
  return result;
}

RunResult run_training(const TrainConfig& config, const RunObserver& observer) {
  Trainer trainer(config);
  return run_training(trainer, observer);
}

}  // namespace dualcons
