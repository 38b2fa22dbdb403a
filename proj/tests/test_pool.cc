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

#include <gtest/gtest.h>

#include <map>

#include "dualcons/errors.h"
#include "dualcons/pool.h"
#include "test_support.h"

namespace dualcons {
namespace {

using testing::sample_examples;
using testing::single_kind_env;

OpRecord record_with(const std::string& id, OpState state, double consistency, int n_evals) {
  OpRecord r{builtin(id), state, consistency, {}, n_evals, 0.0};
  r.priority = priority(r, 0.5, 3);
  return r;
}

ProbeReport report_for(const std::string& id, double c) {
  ProbeReport r;
  r.op_id = id;
  r.consistency = c;
  r.samples = 100;
  r.consistent = static_cast<int>(c * 100);
  return r;
}

TEST(Pool, PriorityCombinesGapAndNovelty) {
  EXPECT_DOUBLE_EQ(priority(record_with("hflip", OpState::kActive, 0.2, 0), 0.5), 1.3);
  EXPECT_DOUBLE_EQ(priority(record_with("hflip", OpState::kActive, 1.0, 3), 0.5), 0.0);
  EXPECT_DOUBLE_EQ(priority(record_with("hflip", OpState::kCandidate, 0.0, 2), 0.5), 1.5);
  EXPECT_DOUBLE_EQ(priority(record_with("hflip", OpState::kCandidate, 0.4, 7), 0.5), 0.6);
}

TEST(Pool, InitialPoolHoldsBuiltinsWithConfiguredActives) {
  PoolConfig config;
  const auto state = initial_pool(config);
  EXPECT_EQ(state.records.size(), 9u);
  EXPECT_EQ(state.count(OpState::kActive), 2);
  EXPECT_EQ(state.find("hflip")->state, OpState::kActive);
  EXPECT_EQ(state.find("option_reverse")->state, OpState::kActive);
  EXPECT_EQ(state.count(OpState::kMastered), 0);
  EXPECT_EQ(state.journal.size(), 11u);
  EXPECT_EQ(state.find("nope"), nullptr);
}

TEST(Pool, ConfigValidationNamesFields) {
  PoolConfig config;
  config.mastery_threshold = 1.5;
  try {
    validate(config);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("mastery_threshold"), std::string::npos);
  }
  config = {};
  config.max_pool = 8;
  EXPECT_THROW(validate(config), InvalidArgument);
  config = {};
  config.initial_active = {"hflip", "vflip", "rot180", "negation"};
  EXPECT_THROW(validate(config), InvalidArgument);
  config = {};
  config.initial_active = {"mirror"};
  EXPECT_THROW(validate(config), InvalidArgument);
  config = {};
  config.spot_check_prob = 1.2;
  EXPECT_THROW(validate(config), InvalidArgument);
}

TEST(Pool, TransitionsFollowThresholds) {
  PoolConfig config;  // tau 0.75, forget below 0.6
  PoolState state;
  state.records = {record_with("hflip", OpState::kActive, 0.0, 0),
                   record_with("vflip", OpState::kMastered, 0.9, 5),
                   record_with("rot180", OpState::kMastered, 0.9, 5),
                   record_with("paraphrase", OpState::kCandidate, 0.2, 0),
                   record_with("negation", OpState::kCandidate, 0.6, 5)};
  state.records[3].priority = 1.3;
  state.records[4].priority = 0.4;
  config.max_active = 2;
  const std::vector<ProbeReport> reports = {report_for("hflip", 0.80), report_for("vflip", 0.55),
                                            report_for("rot180", 0.65)};
  apply_transitions(state, reports, config, 100);
  EXPECT_EQ(state.find("hflip")->state, OpState::kMastered);
  EXPECT_EQ(state.find("rot180")->state, OpState::kMastered);  // 0.65 >= 0.8 * 0.75
  // Two Active slots open; paraphrase (1.3) and the just-demoted vflip (0.95)
  // outrank negation (0.4).
  EXPECT_EQ(state.find("paraphrase")->state, OpState::kActive);
  EXPECT_EQ(state.find("vflip")->state, OpState::kActive);
  EXPECT_EQ(state.find("negation")->state, OpState::kCandidate);
  EXPECT_EQ(state.count(OpState::kActive), 2);

  const auto& h = *state.find("hflip");
  EXPECT_EQ(h.n_evals, 1);
  ASSERT_EQ(h.history.size(), 1u);
  EXPECT_EQ(h.history[0].step, 100);
  EXPECT_EQ(h.last_consistency, 0.80);

  ASSERT_EQ(state.journal.size(), 4u);
  EXPECT_EQ(state.journal[0], (JournalEntry{100, "hflip", OpState::kActive, OpState::kMastered, 0.80}));
  EXPECT_EQ(state.journal[1], (JournalEntry{100, "vflip", OpState::kMastered, OpState::kCandidate, 0.55}));
  EXPECT_EQ(state.journal[2].op_id, "paraphrase");
  EXPECT_EQ(state.journal[3], (JournalEntry{100, "vflip", OpState::kCandidate, OpState::kActive, 0.55}));
}

TEST(Pool, ActiveOpBelowThresholdStaysActive) {
  PoolConfig config;
  PoolState state;
  state.records = {record_with("hflip", OpState::kActive, 0.0, 0)};
  apply_transitions(state, std::vector<ProbeReport>{report_for("hflip", 0.749)}, config, 100);
  EXPECT_EQ(state.records[0].state, OpState::kActive);
  EXPECT_TRUE(state.journal.empty());
}

// Hand-rolled generator: random pools and reports, checking lifecycle invariants.
TEST(Pool, LifecycleInvariantsOnRandomPools) {
  Rng rng(1);
  const auto ids = builtin_pool();
  for (int trial = 0; trial < 300; ++trial) {
    PoolConfig config;
    config.max_active = 1 + static_cast<int>(rng.index(4));
    config.initial_active.clear();
    auto state = initial_pool(config);
    for (int round = 0; round < 10; ++round) {
      const auto before = state;
      std::vector<ProbeReport> reports;
      for (const auto& r : state.records) {
        if (rng.bernoulli(0.7)) reports.push_back(report_for(r.op.id(), rng.uniform01()));
      }
      apply_transitions(state, reports, config, round * 100);
      EXPECT_LE(state.count(OpState::kActive), config.max_active);
      if (state.count(OpState::kActive) < config.max_active) {
        EXPECT_EQ(state.count(OpState::kCandidate), 0);
      }
      for (std::size_t i = 0; i < state.records.size(); ++i) {
        const auto from = before.records[i].state;
        const auto to = state.records[i].state;
        if (from == to) continue;
        // Allowed moves: Active->Mastered, Mastered->Candidate, Candidate->Active,
        // and Mastered->Candidate->Active within one checkpoint.
        const bool ok = (from == OpState::kActive && to == OpState::kMastered) ||
                        (from == OpState::kMastered && to != OpState::kMastered) ||
                        (from == OpState::kCandidate && to == OpState::kActive);
        EXPECT_TRUE(ok) << to_string(from) << "->" << to_string(to);
      }
    }
  }
}

TEST(Pool, SelectionWithEmptyWorkingSet) {
  PoolConfig config;
  config.spot_check_prob = 0.0;
  PoolState state;
  state.records = {record_with("hflip", OpState::kCandidate, 0.0, 0)};
  Rng rng(2);
  const auto e = sample_example(rng, EnvConfig{});
  const auto s = select_for_step(state, e.scene, e.query, rng, config);
  EXPECT_FALSE(s.op.has_value());
  EXPECT_EQ(s.working_set_size, 0);
}

TEST(Pool, SelectionSingletonAndDomain) {
  PoolConfig config;
  config.spot_check_prob = 0.0;
  PoolState state;
  state.records = {record_with("negation", OpState::kActive, 0.0, 0)};
  Rng rng(3);
  EnvConfig env;
  env.binary_prob = 0.5;
  for (const auto& e : sample_examples(rng, single_kind_env(QueryKind::kCountShape, env), 200)) {
    const auto s = select_for_step(state, e.scene, e.query, rng, config);
    EXPECT_EQ(s.op.has_value(), e.query.num_options() == 2);
    if (s.op) {
      EXPECT_EQ(s.op->id(), "negation");
    }
  }
}

TEST(Pool, SelectionFrequenciesFollowFlooredPriorities) {
  PoolConfig config;
  config.spot_check_prob = 0.0;
  PoolState state;
  state.records = {record_with("paraphrase", OpState::kActive, 0.0, 3),
                   record_with("option_reverse", OpState::kActive, 0.5, 3),
                   record_with("option_cycle", OpState::kActive, 1.0, 3)};
  // Weights 1, 0.5 and the 0.05 floor.
  Rng rng(4);
  const auto e = sample_example(rng, single_kind_env(QueryKind::kCountShape));
  std::map<std::string, int> counts;
  const int n = 31000;
  for (int i = 0; i < n; ++i) ++counts[select_for_step(state, e.scene, e.query, rng, config).op->id()];
  EXPECT_NEAR(counts["paraphrase"] / double(n), 1.0 / 1.55, 0.01);
  EXPECT_NEAR(counts["option_reverse"] / double(n), 0.5 / 1.55, 0.01);
  EXPECT_NEAR(counts["option_cycle"] / double(n), 0.05 / 1.55, 0.005);
}

TEST(Pool, SpotCheckFrequencyMatchesProbability) {
  PoolConfig config;
  config.spot_check_prob = 0.2;
  PoolState state;
  state.records = {record_with("hflip", OpState::kActive, 0.3, 3),
                   record_with("paraphrase", OpState::kMastered, 0.95, 3),
                   record_with("option_cycle", OpState::kMastered, 0.95, 3)};
  Rng rng(5);
  const auto e = sample_example(rng, single_kind_env(QueryKind::kRelPosH));
  int checks = 0;
  const int n = 20000;
  std::map<std::string, int> picked;
  for (int i = 0; i < n; ++i) {
    const auto s = select_for_step(state, e.scene, e.query, rng, config);
    if (s.spot_check) {
      ++checks;
      ++picked[*s.spot_check_op];
      EXPECT_EQ(s.working_set_size, 2);
    } else {
      EXPECT_EQ(s.working_set_size, 1);
    }
  }
  EXPECT_NEAR(checks / double(n), 0.2, 0.02);
  EXPECT_NEAR(picked["paraphrase"] / double(checks), 0.5, 0.05);

  // Without Mastered ops there is nothing to spot-check.
  state.records.erase(state.records.begin() + 1, state.records.end());
  for (int i = 0; i < 1000; ++i) EXPECT_FALSE(select_for_step(state, e.scene, e.query, rng, config).spot_check);
}

TEST(Pool, ConsistencyOfOracleIsOne) {
  Rng rng(6);
  EnvConfig env;
  env.kind_weights = {1, 1, 1, 1, 1, 1};
  const auto probe = sample_examples(rng, env, 400);
  const auto oracle = oracle_params();
  for (const auto& op : builtin_pool()) {
    const auto in_domain = filter_domain(op, probe);
    const auto report = estimate_consistency(oracle, op, in_domain, 7);
    EXPECT_EQ(report.consistency, 1.0) << op.id();
    EXPECT_EQ(report.samples, static_cast<int>(in_domain.size()));
    EXPECT_EQ(report.step, 7);
  }
}

TEST(Pool, PositionBiasIsNeverConsistentUnderReversal) {
  PolicyParams first(0);
  first.weights()[feature::kPosition] = 5.0;  // always answers option 0
  Rng rng(7);
  const auto probe = sample_examples(rng, EnvConfig{}, 300);
  const auto report = estimate_consistency(first, builtin("option_reverse"), probe);
  EXPECT_EQ(report.consistency, 0.0);
  // A constant policy is trivially consistent under paraphrase.
  EXPECT_EQ(estimate_consistency(first, builtin("paraphrase"), probe).consistency, 1.0);
  EXPECT_EQ(estimate_consistency(PolicyParams(0), builtin("paraphrase"), probe).consistency, 1.0);
}

TEST(Pool, ConsistencyRejectsEmptyOrOutOfDomainProbes) {
  Rng rng(8);
  EXPECT_THROW(estimate_consistency(PolicyParams(0), builtin("hflip"), std::vector<Example>{}), InvalidArgument);
  const auto colour = sample_examples(rng, single_kind_env(QueryKind::kColorOf), 5);
  EXPECT_THROW(estimate_consistency(PolicyParams(0), builtin("grayscale"), colour), InvalidArgument);
}

TEST(Pool, EvaluatePoolSkipsOpsWithoutDomain) {
  PoolConfig config;
  auto state = initial_pool(config);
  Rng rng(9);
  const auto probe = sample_examples(rng, single_kind_env(QueryKind::kColorOf), 50);
  const auto reports = evaluate_pool(state, oracle_params(), probe, config, 100);
  for (const auto& r : reports) {
    EXPECT_NE(r.op_id, "grayscale");
    EXPECT_NE(r.op_id, "color_invert");
  }
  EXPECT_EQ(state.find("grayscale")->n_evals, 0);
  EXPECT_EQ(state.find("hflip")->state, OpState::kMastered);
}

TEST(Pool, DiscoveryIsBoundedAndVerified) {
  PoolConfig config;
  auto state = initial_pool(config);
  Rng rng(10);
  EnvConfig env;
  env.kind_weights = {1, 1, 1, 1, 1, 1};
  const auto probe = sample_examples(rng, env, 256);
  for (int checkpoint = 1; checkpoint <= 8; ++checkpoint) {
    const auto before = state.records.size();
    const auto added = discover_candidates(state, probe, config, env, 42, checkpoint * 100);
    EXPECT_LE(added.size(), 1u);
    EXPECT_EQ(state.records.size(), before + added.size());
    for (const auto& id : added) {
      const auto* r = state.find(id);
      ASSERT_NE(r, nullptr);
      EXPECT_EQ(r->state, OpState::kCandidate);
      EXPECT_EQ(r->op.transform_chain().size(), 2u);
      Rng verify(static_cast<std::uint64_t>(checkpoint));
      EXPECT_TRUE(verify_axiom(r->op, 300, verify, env).passed());
      EXPECT_EQ(state.journal.back().op_id, id);
      EXPECT_FALSE(state.journal.back().from_state.has_value());
    }
  }
  EXPECT_EQ(state.records.size(), 12u);
  EXPECT_TRUE(discover_candidates(state, probe, config, env, 42, 900).empty());

  auto again = initial_pool(config);
  for (int checkpoint = 1; checkpoint <= 8; ++checkpoint) discover_candidates(again, probe, config, env, 42, checkpoint * 100);
  EXPECT_EQ(again, state);
}

}  // namespace
}  // namespace dualcons
