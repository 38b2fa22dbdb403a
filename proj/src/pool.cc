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

#include "dualcons/pool.h"

#include <algorithm>

#include "dualcons/errors.h"

namespace dualcons {

std::string to_string(OpState state) {
  switch (state) {
    case OpState::kCandidate: return "Candidate";
    case OpState::kActive: return "Active";
    case OpState::kMastered: return "Mastered";
  }
  return "?";
}

OpState parse_op_state(const std::string& name) {
  if (name == "Candidate") return OpState::kCandidate;
  if (name == "Active") return OpState::kActive;
  if (name == "Mastered") return OpState::kMastered;
  throw FormatError("unknown op state '" + name + "'");
}

void validate(const PoolConfig& config) {
  if (config.max_active < 1) throw InvalidArgument("pool.max_active (K) must be >= 1");
  if (config.max_pool < config.max_active) {
    throw InvalidArgument("pool.max_pool (M) must be >= pool.max_active (K)");
  }
  if (config.max_pool < kNumPrimitives) {
    throw InvalidArgument("pool.max_pool (M) must hold the " + std::to_string(kNumPrimitives) +
                          " built-in operations");
  }
  if (config.eval_interval < 1) throw InvalidArgument("pool.eval_interval (E) must be >= 1");
  if (!(config.mastery_threshold > 0.0 && config.mastery_threshold <= 1.0)) {
    throw InvalidArgument("pool.mastery_threshold (tau) must be in (0, 1]");
  }
  if (!(config.forget_ratio > 0.0 && config.forget_ratio <= 1.0)) {
    throw InvalidArgument("pool.forget_ratio must be in (0, 1]");
  }
  if (!(config.novelty_bonus >= 0.0)) throw InvalidArgument("pool.novelty_bonus must be >= 0");
  if (config.novelty_evals < 0) throw InvalidArgument("pool.novelty_evals must be >= 0");
  if (!(config.spot_check_prob >= 0.0 && config.spot_check_prob <= 1.0)) {
    throw InvalidArgument("pool.spot_check_prob (p_f) must be in [0, 1]");
  }
  if (config.probe_size < 1) throw InvalidArgument("pool.probe_size must be >= 1");
  if (!(config.weight_floor > 0.0)) throw InvalidArgument("pool.weight_floor must be > 0");
  if (config.discovery_per_checkpoint < 0) {
    throw InvalidArgument("pool.discovery_per_checkpoint must be >= 0");
  }
  if (config.discovery_verify_samples < 1) {
    throw InvalidArgument("pool.discovery_verify_samples must be >= 1");
  }
  if (static_cast<int>(config.initial_active.size()) > config.max_active) {
    throw InvalidArgument("pool.initial_active lists more ops than pool.max_active (K)");
  }
  for (const auto& id : config.initial_active) {
    try {
      parse_primitive(id);
    } catch (const FormatError&) {
      throw InvalidArgument("pool.initial_active: unknown op '" + id + "'");
    }
  }
}

int PoolState::count(OpState state) const {
  return static_cast<int>(std::count_if(records.begin(), records.end(),
                                        [&](const OpRecord& r) { return r.state == state; }));
}

const OpRecord* PoolState::find(const std::string& op_id) const {
  for (const auto& r : records) {
    if (r.op.id() == op_id) return &r;
  }
  return nullptr;
}

double priority(const OpRecord& record, double novelty_bonus, int novelty_evals) {
  return (1.0 - record.last_consistency) + (record.n_evals < novelty_evals ? novelty_bonus : 0.0);
}

PoolState initial_pool(const PoolConfig& config) {
  validate(config);
  PoolState state;
  for (auto& op : builtin_pool()) {
    OpRecord record{std::move(op), OpState::kCandidate, 0.0, {}, 0, 0.0};
    record.priority = priority(record, config.novelty_bonus, config.novelty_evals);
    state.journal.push_back({0, record.op.id(), std::nullopt, OpState::kCandidate, std::nullopt});
    state.records.push_back(std::move(record));
  }
  for (const auto& id : config.initial_active) {
    for (auto& record : state.records) {
      if (record.op.id() == id && record.state == OpState::kCandidate) {
        record.state = OpState::kActive;
        state.journal.push_back({0, id, OpState::kCandidate, OpState::kActive, std::nullopt});
      }
    }
  }
  return state;
}

std::vector<Example> filter_domain(const DualityOp& op, std::span<const Example> probe_set) {
  std::vector<Example> out;
  for (const auto& example : probe_set) {
    if (op.applicable(example.scene, example.query)) out.push_back(example);
  }
  return out;
}

ProbeReport estimate_consistency(const PolicyParams& params, const DualityOp& op,
                                 std::span<const Example> probe_set, std::int64_t step) {
  if (probe_set.empty()) throw InvalidArgument("estimate_consistency: empty probe set for " + op.id());
  ProbeReport report;
  report.op_id = op.id();
  report.step = step;
  for (const auto& example : probe_set) {
    if (!op.applicable(example.scene, example.query)) {
      throw InvalidArgument("estimate_consistency: probe input outside the domain of " + op.id());
    }
    const auto [scene, query] = op.apply(example.scene, example.query);
    const AnswerIndex original = greedy_answer(params, example.scene, example.query);
    const AnswerIndex dual = greedy_answer(params, scene, query);
    if (op.map_answer(example.query, query, original) == dual) ++report.consistent;
    ++report.samples;
  }
  report.consistency = static_cast<double>(report.consistent) / static_cast<double>(report.samples);
  return report;
}

void apply_transitions(PoolState& state, std::span<const ProbeReport> reports,
                       const PoolConfig& config, std::int64_t step) {
  const double tau = config.mastery_threshold;
  for (const auto& report : reports) {
    auto it = std::find_if(state.records.begin(), state.records.end(),
                           [&](const OpRecord& r) { return r.op.id() == report.op_id; });
    if (it == state.records.end()) continue;
    OpRecord& record = *it;
    record.last_consistency = report.consistency;
    record.history.push_back({step, report.consistency});
    ++record.n_evals;
    if (record.state == OpState::kActive && report.consistency >= tau) {
      record.state = OpState::kMastered;
      state.journal.push_back({step, record.op.id(), OpState::kActive, OpState::kMastered,
                               report.consistency});
    } else if (record.state == OpState::kMastered &&
               report.consistency < config.forget_ratio * tau) {
      record.state = OpState::kCandidate;
      state.journal.push_back({step, record.op.id(), OpState::kMastered, OpState::kCandidate,
                               report.consistency});
    }
  }
  for (auto& record : state.records) {
    record.priority = priority(record, config.novelty_bonus, config.novelty_evals);
  }
  while (state.count(OpState::kActive) < config.max_active) {
    OpRecord* best = nullptr;
    for (auto& record : state.records) {
      if (record.state != OpState::kCandidate) continue;
      if (!best || record.priority > best->priority ||
          (record.priority == best->priority && record.op.id() < best->op.id())) {
        best = &record;
      }
    }
    if (!best) break;
    best->state = OpState::kActive;
    state.journal.push_back({step, best->op.id(), OpState::kCandidate, OpState::kActive,
                             best->n_evals > 0 ? std::optional<double>(best->last_consistency)
                                               : std::nullopt});
  }
}

std::vector<ProbeReport> evaluate_pool(PoolState& state, const PolicyParams& params,
                                       std::span<const Example> probe_set, const PoolConfig& config,
                                       std::int64_t step) {
  std::vector<ProbeReport> reports;
  for (const auto& record : state.records) {
    const auto in_domain = filter_domain(record.op, probe_set);
    if (in_domain.empty()) continue;
    reports.push_back(estimate_consistency(params, record.op, in_domain, step));
  }
  apply_transitions(state, reports, config, step);
  return reports;
}

std::vector<std::string> discover_candidates(PoolState& state, std::span<const Example> probe_set,
                                             const PoolConfig& config, const EnvConfig& env,
                                             std::uint64_t seed, std::int64_t step) {
  std::vector<std::string> added;
  if (config.discovery_per_checkpoint == 0 ||
      static_cast<int>(state.records.size()) >= config.max_pool) {
    return added;
  }
  const auto candidates = depth2_candidates(probe_set);
  while (static_cast<int>(added.size()) < config.discovery_per_checkpoint &&
         static_cast<int>(state.records.size()) < config.max_pool &&
         state.discovery_cursor < candidates.size()) {
    const DualityOp& candidate = candidates[state.discovery_cursor];
    Rng rng(derive_seed(seed, state.discovery_cursor));
    ++state.discovery_cursor;
    const bool duplicate = std::any_of(state.records.begin(), state.records.end(), [&](const OpRecord& r) {
      return behaviorally_equal(candidate, r.op, probe_set);
    });
    if (duplicate) continue;
    if (!verify_axiom(candidate, config.discovery_verify_samples, rng, env).passed()) continue;
    OpRecord record{candidate, OpState::kCandidate, 0.0, {}, 0, 0.0};
    record.priority = priority(record, config.novelty_bonus, config.novelty_evals);
    state.journal.push_back({step, candidate.id(), std::nullopt, OpState::kCandidate, std::nullopt});
    state.records.push_back(std::move(record));
    added.push_back(candidate.id());
  }
  return added;
}

Selection select_for_step(const PoolState& state, const Scene& scene, const Query& query, Rng& rng,
                          const PoolConfig& config) {
  std::vector<const OpRecord*> working;
  for (const auto& record : state.records) {
    if (record.state == OpState::kActive) working.push_back(&record);
  }
  Selection selection;
  if (rng.bernoulli(config.spot_check_prob)) {
    std::vector<const OpRecord*> mastered;
    for (const auto& record : state.records) {
      if (record.state == OpState::kMastered) mastered.push_back(&record);
    }
    if (!mastered.empty()) {
      const OpRecord* pick = mastered[rng.index(mastered.size())];
      working.push_back(pick);
      selection.spot_check = true;
      selection.spot_check_op = pick->op.id();
    }
  }
  selection.working_set_size = static_cast<int>(working.size());
  std::vector<const OpRecord*> applicable;
  std::vector<double> weights;
  for (const auto* record : working) {
    if (!record->op.applicable(scene, query)) continue;
    applicable.push_back(record);
    weights.push_back(std::max(record->priority, config.weight_floor));
  }
  if (applicable.empty()) return selection;
  selection.op = applicable[rng.categorical(weights)]->op;
  return selection;
}

}  // namespace dualcons
