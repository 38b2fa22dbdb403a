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

#include <filesystem>

#include "dualcons/io.h"
#include "test_support.h"

namespace dualcons {
namespace {

namespace fs = std::filesystem;
using testing::random_params;
using testing::sample_examples;

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dualcons_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

TEST(Io, ExamplesRoundTrip) {
  Rng rng(1);
  EnvConfig env;
  env.kind_weights = {1, 1, 1, 1, 1, 1};
  env.negation_prob = 0.3;
  for (const auto& e : sample_examples(rng, env, 500)) {
    const Json j = to_json(e);
    EXPECT_EQ(example_from_json(j), e);
    EXPECT_EQ(example_from_json(Json::parse(j.dump())), e);
  }
}

TEST(Io, ExampleFieldsAreReadable) {
  Rng rng(2);
  const auto e = sample_example(rng, testing::single_kind_env(QueryKind::kRelPosH));
  const Json j = to_json(e);
  EXPECT_EQ(j["kind"], "rel_pos_h");
  EXPECT_TRUE(j["options"][0].is_string());
  EXPECT_EQ(j["answer_index"], e.answer.index);
  EXPECT_EQ(j["objects"].size(), e.scene.objects.size());
}

TEST(Io, PolicyRoundTripIsExact) {
  Rng rng(3);
  for (int hidden : {0, 4}) {
    const auto p = random_params(rng, hidden, 3.0);
    EXPECT_EQ(policy_from_json(Json::parse(to_json(p).dump())), p);
  }
  Json bad = to_json(PolicyParams(0));
  bad["feature_dim"] = 3;
  EXPECT_THROW(policy_from_json(bad), FormatError);
  bad = to_json(PolicyParams(0));
  bad["w"].erase(bad["w"].begin());
  EXPECT_THROW(policy_from_json(bad), FormatError);
}

TEST(Io, OpsAndPoolRoundTrip) {
  for (const auto& op : builtin_pool()) EXPECT_EQ(op_from_json(to_json(op)), op);
  const auto composite = compose(builtin("hflip"), builtin("option_cycle"));
  EXPECT_EQ(op_from_json(to_json(composite)), composite);
  EXPECT_EQ(to_json(composite)["mapping_kind"], "composite");

  TrainConfig config;
  config.total_steps = 200;
  config.seed = 4;
  const auto result = run_training(config);
  const auto& pool = result.final_state.pool;
  EXPECT_EQ(pool_state_from_json(Json::parse(to_json(pool).dump())), pool);
  for (const auto& entry : result.journal) EXPECT_EQ(journal_entry_from_json(to_json(entry)), entry);
  for (const auto& m : result.metrics) EXPECT_EQ(metrics_from_json(Json::parse(to_json(m).dump())), m);
  for (const auto& p : result.probes) {
    const auto back = probe_report_from_json(to_json(p));
    EXPECT_EQ(back.op_id, p.op_id);
    EXPECT_EQ(back.consistency, p.consistency);
    EXPECT_EQ(back.consistent, p.consistent);
    EXPECT_EQ(back.samples, p.samples);
    EXPECT_EQ(back.step, p.step);
  }
}

TEST(Io, ConfigRoundTripAndDefaults) {
  TrainConfig config;
  config.seed = 99;
  config.lambda = 0.7;
  config.pool.initial_active = {"vflip"};
  config.env.kind_weights = {1, 2, 3, 4, 5, 6};
  config.corpus_path = "corpus.jsonl";
  EXPECT_EQ(config_from_json(Json::parse(to_json(config).dump())), config);
  EXPECT_EQ(config_from_json(Json::object()), TrainConfig{});
  const auto partial = config_from_json(Json::parse(R"({"lambda": 0.5, "pool": {"max_active": 2}})"));
  EXPECT_EQ(partial.lambda, 0.5);
  EXPECT_EQ(partial.pool.max_active, 2);
  EXPECT_EQ(partial.pool.max_pool, 12);
}

TEST(Io, ConfigErrorsNameTheField) {
  const auto tau = message_of([] { config_from_json(Json::parse(R"({"pool": {"mastery_threshold": 1.5}})")); });
  EXPECT_NE(tau.find("pool.mastery_threshold"), std::string::npos) << tau;
  EXPECT_THROW(config_from_json(Json::parse(R"({"pool": {"mastery_threshold": 1.5}})")), InvalidArgument);

  const auto unknown = message_of([] { config_from_json(Json::parse(R"({"env": {"grid": 8}})")); });
  EXPECT_NE(unknown.find("env.grid"), std::string::npos) << unknown;
  EXPECT_THROW(config_from_json(Json::parse(R"({"lamda": 0.3})")), FormatError);

  const auto type = message_of([] { config_from_json(Json::parse(R"({"group_size": "eight"})")); });
  EXPECT_NE(type.find("group_size"), std::string::npos) << type;
  EXPECT_THROW(config_from_json(Json::parse(R"({"group_size": 7})")), InvalidArgument);
  EXPECT_THROW(config_from_json(Json::parse(R"({"env": {"kind_weights": {"sideways": 1}}})")), FormatError);
  EXPECT_THROW(config_from_json(Json::parse("[1, 2]")), FormatError);
}

TEST(Io, JsonlErrorsCarryLineNumbers) {
  const auto dir = scratch_dir("jsonl");
  Rng rng(5);
  const auto examples = sample_examples(rng, EnvConfig{}, 4);
  std::string text;
  for (const auto& e : examples) text += to_json(e).dump() + "\n";
  write_text_file(dir / "ok.jsonl", text + "\n");
  EXPECT_EQ(load_corpus(dir / "ok.jsonl"), examples);

  const std::string truncated = text + to_json(examples[0]).dump().substr(0, 20) + "\n";
  write_text_file(dir / "truncated.jsonl", truncated);
  const auto msg = message_of([&] { read_jsonl(dir / "truncated.jsonl"); });
  EXPECT_NE(msg.find("truncated.jsonl:5:"), std::string::npos) << msg;

  Json wrong = to_json(examples[1]);
  wrong["kind"] = "sideways";
  write_text_file(dir / "bad_kind.jsonl", to_json(examples[0]).dump() + "\n" + wrong.dump() + "\n");
  const auto kind = message_of([&] { load_corpus(dir / "bad_kind.jsonl"); });
  EXPECT_NE(kind.find("bad_kind.jsonl:2:"), std::string::npos) << kind;

  Json lie = to_json(examples[0]);
  lie["answer_index"] = (examples[0].answer.index + 1) % examples[0].query.num_options();
  write_text_file(dir / "lie.jsonl", lie.dump() + "\n");
  EXPECT_THROW(load_corpus(dir / "lie.jsonl"), FormatError);
  EXPECT_THROW(read_jsonl(dir / "missing.jsonl"), FormatError);
  fs::remove_all(dir);
}

TEST(Io, CorpusRoundTrip) {
  const auto dir = scratch_dir("corpus");
  Rng rng(6);
  const auto examples = sample_examples(rng, EnvConfig{}, 50);
  save_corpus(dir / "c.jsonl", examples);
  EXPECT_EQ(load_corpus(dir / "c.jsonl"), examples);
  fs::remove_all(dir);
}

TEST(Io, CheckpointRoundTripAndCorruption) {
  const auto dir = scratch_dir("checkpoint");
  TrainConfig config;
  config.total_steps = 150;
  config.seed = 7;
  config.hidden_units = 2;
  Trainer trainer(config);
  while (!trainer.finished()) trainer.step();
  save_checkpoint(dir / "final", config, trainer.state());
  for (const char* file : {"config.json", "policy.json", "reference.json", "pool.json", "rng.txt",
                           "pool_rng.txt", "state.json"}) {
    EXPECT_TRUE(fs::exists(dir / "final" / file)) << file;
  }
  const auto loaded = load_checkpoint(dir / "final");
  EXPECT_EQ(loaded.config, config);
  EXPECT_EQ(loaded.state, trainer.state());

  write_text_file(dir / "final" / "pool.json", "{\"records\": ");
  const auto msg = message_of([&] { load_checkpoint(dir / "final"); });
  EXPECT_NE(msg.find("pool.json"), std::string::npos) << msg;
  EXPECT_THROW(load_checkpoint(dir / "nowhere"), FormatError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace dualcons
