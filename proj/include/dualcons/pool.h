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

// The self-evolving operation pool: consistency probing, lifecycle
// transitions, priority scoring, per-step selection with anti-forgetting
// spot-checks, and bounded candidate discovery.

#ifndef DUALCONS_POOL_H_
#define DUALCONS_POOL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dualcons/duality.h"
#include "dualcons/policy.h"
#include "dualcons/rng.h"
#include "dualcons/scene.h"

namespace dualcons {

enum class OpState : std::uint8_t { kCandidate, kActive, kMastered };

std::string to_string(OpState state);
OpState parse_op_state(const std::string& name);

struct PoolConfig {
  int max_active = 3;            // K
  int max_pool = 12;             // M
  int eval_interval = 100;       // E
  double mastery_threshold = 0.75;  // tau
  double forget_ratio = 0.8;     // demote below forget_ratio * tau
  double novelty_bonus = 0.5;    // gamma
  int novelty_evals = 3;         // bonus while n_evals < novelty_evals
  double spot_check_prob = 0.2;  // p_f
  int probe_size = 256;          // N
  double weight_floor = 0.05;    // WeightedSample floor per op
  int discovery_per_checkpoint = 1;
  int discovery_verify_samples = 500;
  std::vector<std::string> initial_active = {"hflip", "option_reverse"};

  bool operator==(const PoolConfig&) const = default;
};

// Throws InvalidArgument naming the offending field.
void validate(const PoolConfig& config);

struct ConsistencyPoint {
  std::int64_t step = 0;
  double consistency = 0.0;

  bool operator==(const ConsistencyPoint&) const = default;
};

struct OpRecord {
  DualityOp op;
  OpState state = OpState::kCandidate;
  double last_consistency = 0.0;
  std::vector<ConsistencyPoint> history;
  int n_evals = 0;
  double priority = 0.0;

  bool operator==(const OpRecord&) const = default;
};

struct ProbeReport {
  std::string op_id;
  double consistency = 0.0;  // consistent / samples, exactly
  int consistent = 0;
  int samples = 0;
  std::int64_t step = 0;
};

// One lifecycle event. from_state is empty for ops entering the pool.
struct JournalEntry {
  std::int64_t step = 0;
  std::string op_id;
  std::optional<OpState> from_state;
  OpState to_state = OpState::kCandidate;
  std::optional<double> consistency;

  bool operator==(const JournalEntry&) const = default;
};

struct PoolState {
  std::vector<OpRecord> records;
  std::vector<JournalEntry> journal;
  // Next index into the depth-2 candidate enumeration.
  std::size_t discovery_cursor = 0;

  int count(OpState state) const;
  const OpRecord* find(const std::string& op_id) const;

  bool operator==(const PoolState&) const = default;
};

// Built-ins as Candidates, then the configured initial actives promoted at
// step 0.
PoolState initial_pool(const PoolConfig& config);

// Fraction of probe inputs where the greedy answer on the dual equals the
// mapped greedy answer on the original. Throws InvalidArgument when the probe
// set is empty or holds an out-of-domain input.
ProbeReport estimate_consistency(const PolicyParams& params, const DualityOp& op,
                                 std::span<const Example> probe_set, std::int64_t step = 0);

// Probe inputs inside the op's domain.
std::vector<Example> filter_domain(const DualityOp& op, std::span<const Example> probe_set);

// (1 - C) + gamma * [n_evals < novelty_evals].
double priority(const OpRecord& record, double novelty_bonus, int novelty_evals = 3);

// Records the probes (history, n_evals, priority), retires Active ops with
// C >= tau, demotes Mastered ops with C < forget_ratio * tau, then promotes
// the highest-priority Candidates (ties by op id) until K ops are Active.
void apply_transitions(PoolState& state, std::span<const ProbeReport> reports,
                       const PoolConfig& config, std::int64_t step);

// Probes every pool member on the probe set, then applies transitions.
std::vector<ProbeReport> evaluate_pool(PoolState& state, const PolicyParams& params,
                                       std::span<const Example> probe_set, const PoolConfig& config,
                                       std::int64_t step);

// Adds up to config.discovery_per_checkpoint new composite Candidates while the
// pool is below M. A candidate must differ behaviourally from every member and
// pass the duality-axiom check. Returns the ids added.
std::vector<std::string> discover_candidates(PoolState& state, std::span<const Example> probe_set,
                                             const PoolConfig& config, const EnvConfig& env,
                                             std::uint64_t seed, std::int64_t step);

struct Selection {
  std::optional<DualityOp> op;
  // A Mastered op joined this step's working set.
  bool spot_check = false;
  std::optional<std::string> spot_check_op;
  int working_set_size = 0;
};

// Draws the step's op: optional spot-check inclusion of a random Mastered op,
// applicability filtering, then priority-weighted sampling with a floor.
Selection select_for_step(const PoolState& state, const Scene& scene, const Query& query, Rng& rng,
                          const PoolConfig& config);

}  // namespace dualcons

#endif  // DUALCONS_POOL_H_
