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

// Consistency-augmented group policy optimisation over the synthetic
// environment, driven one step at a time.

#ifndef DUALCONS_TRAINER_H_
#define DUALCONS_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dualcons/policy.h"
#include "dualcons/pool.h"
#include "dualcons/rewards.h"
#include "dualcons/rng.h"
#include "dualcons/scene.h"

namespace dualcons {

enum class InitKind : std::uint8_t { kBiased, kZero, kOracle };

std::string to_string(InitKind kind);
InitKind parse_init_kind(const std::string& name);

struct TrainConfig {
  std::int64_t total_steps = 5000;
  int group_size = 8;  // G
  double lambda = 0.3;
  double beta = 0.04;
  double lr = 0.3;
  std::uint64_t seed = 0;
  PoolConfig pool;
  EnvConfig env;
  // Also reward and differentiate the dual completions.
  bool dual_gradient = false;
  // False runs plain group policy optimisation: no op selection, no duals,
  // no probing.
  bool consistency_enabled = true;
  InitKind init = InitKind::kBiased;
  double bias_strength = 3.0;
  int hidden_units = 0;
  // Checkpoint every this many steps (0: only at the end).
  std::int64_t checkpoint_interval = 1000;
  // Replay examples from a JSONL corpus instead of sampling fresh ones.
  std::optional<std::string> corpus_path;

  bool operator==(const TrainConfig&) const = default;
};

// Throws InvalidArgument naming the offending field.
void validate(const TrainConfig& config);

struct StepMetrics {
  std::int64_t step = 0;
  double mean_accuracy = 0.0;
  double mean_format = 0.0;
  double mean_consistency = 0.0;
  double mean_total = 0.0;
  double kl = 0.0;  // KL to the reference before the update
  std::optional<std::string> op_id;
  bool degenerate = false;
  bool spot_check = false;
  bool mastered_available = false;
  int generation_calls = 0;
  int active_count = 0;
  int working_set_size = 0;
  QueryKind kind = QueryKind::kRelPosH;

  bool operator==(const StepMetrics&) const = default;
};

struct TrainerState {
  std::int64_t step = 0;
  PolicyParams params;
  PolicyParams reference;
  PoolState pool;
  Rng rng;       // examples and primary generation
  Rng pool_rng;  // op selection and dual generation

  bool operator==(const TrainerState&) const = default;
};

TrainerState initial_state(const TrainConfig& config);

// Fixed set of examples used for behavioural deduplication during discovery.
std::vector<Example> discovery_probe(const TrainConfig& config);

// The checkpoint probe set at a given step; regenerated from the run seed.
std::vector<Example> probe_set_for_step(const TrainConfig& config, std::int64_t step);

class Trainer {
 public:
  explicit Trainer(TrainConfig config);
  Trainer(TrainConfig config, TrainerState state);

  // Runs one step. On failure the state is left exactly as before the call.
  StepMetrics step();

  bool finished() const { return state_.step >= config_.total_steps; }
  const TrainerState& state() const { return state_; }
  const TrainConfig& config() const { return config_; }
  // Probe reports from the most recent checkpoint step (empty otherwise).
  const std::vector<ProbeReport>& last_probes() const { return last_probes_; }

 private:
  Example next_example();

  TrainConfig config_;
  TrainerState state_;
  std::vector<Example> corpus_;
  std::vector<Example> discovery_probe_;
  std::vector<ProbeReport> last_probes_;
};

struct RunResult {
  PolicyParams final_params;
  std::vector<StepMetrics> metrics;
  std::vector<JournalEntry> journal;
  std::vector<ProbeReport> probes;
  TrainerState final_state;
};

// Hooks for streaming artifacts; every member is optional.
struct RunObserver {
  std::function<void(const StepMetrics&)> on_metrics;
  std::function<void(const JournalEntry&)> on_journal;
  std::function<void(const ProbeReport&)> on_probe;
  std::function<void(const Trainer&, const std::string& tag)> on_checkpoint;
};

// Runs the remaining steps of `trainer`. A numerical failure triggers an
// on_checkpoint call tagged "diagnostic" and is rethrown.
RunResult run_training(Trainer& trainer, const RunObserver& observer = {});
RunResult run_training(const TrainConfig& config, const RunObserver& observer = {});

}  // namespace dualcons

#endif  // DUALCONS_TRAINER_H_
