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

// JSON and JSONL persistence for examples, policies, pools, journals,
// metrics, configs and trainer checkpoints. Doubles round-trip exactly.

#ifndef DUALCONS_IO_H_
#define DUALCONS_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dualcons/duality.h"
#include "dualcons/errors.h"
#include "dualcons/policy.h"
#include "dualcons/pool.h"
#include "dualcons/scene.h"
#include "dualcons/trainer.h"

namespace dualcons {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Every *_from_json throws FormatError naming the offending field.
Json to_json(const Example& example);
Example example_from_json(const Json& j);

Json to_json(const PolicyParams& params);
PolicyParams policy_from_json(const Json& j);

Json to_json(const DualityOp& op);
DualityOp op_from_json(const Json& j);

Json to_json(const PoolState& state);
PoolState pool_state_from_json(const Json& j);

Json to_json(const JournalEntry& entry);
JournalEntry journal_entry_from_json(const Json& j);

Json to_json(const StepMetrics& metrics);
StepMetrics metrics_from_json(const Json& j);

Json to_json(const ProbeReport& report);
ProbeReport probe_report_from_json(const Json& j);

// Missing fields take their defaults; unknown fields and type errors are
// rejected. The result is validated, so range errors surface as
// InvalidArgument naming the field.
Json to_json(const TrainConfig& config);
TrainConfig config_from_json(const Json& j);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

struct JsonLine {
  int line = 0;  // 1-based
  Json value;
};

// One JSON document per non-empty line. Errors carry the line number.
std::vector<JsonLine> read_jsonl(const std::filesystem::path& path);

std::vector<Example> load_corpus(const std::filesystem::path& path);
void save_corpus(const std::filesystem::path& path, const std::vector<Example>& examples);

template <typename T>
std::vector<T> read_jsonl_as(const std::filesystem::path& path, T (*parse)(const Json&)) {
  std::vector<T> out;
  for (const auto& line : read_jsonl(path)) {
    try {
      out.push_back(parse(line.value));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ":" + std::to_string(line.line) + ": " + e.what());
    }
  }
  return out;
}

// A checkpoint directory holds config.json, policy.json, reference.json,
// pool.json, rng.txt, pool_rng.txt and state.json.
void save_checkpoint(const std::filesystem::path& dir, const TrainConfig& config,
                     const TrainerState& state);

struct LoadedCheckpoint {
  TrainConfig config;
  TrainerState state;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace dualcons

#endif  // DUALCONS_IO_H_
