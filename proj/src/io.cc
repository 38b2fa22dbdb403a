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

#include "dualcons/io.h"

#include <fstream>
#include <set>
#include <sstream>

namespace dualcons {
namespace {

namespace fs = std::filesystem;

template <typename E>
E parse_enum(const std::string& name, int count, const char* what) {
  for (int i = 0; i < count; ++i) {
    if (to_string(static_cast<E>(i)) == name) return static_cast<E>(i);
  }
  throw FormatError(std::string("unknown ") + what + " '" + name + "'");
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const Json& require(const Json& j, const std::string& key, const std::string& ctx = "") {
  if (!j.is_object()) throw FormatError("expected an object" + (ctx.empty() ? "" : " at '" + ctx + "'"));
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError("missing field '" + join(ctx, key) + "'");
  return *it;
}

template <typename T>
T as(const Json& j, const std::string& name) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) throw FormatError("field '" + name + "' must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) throw FormatError("field '" + name + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0) {
        throw FormatError("field '" + name + "' must be non-negative");
      }
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!j.is_number()) throw FormatError("field '" + name + "' must be a number");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!j.is_string()) throw FormatError("field '" + name + "' must be a string");
  }
  return j.get<T>();
}

template <typename T>
T get(const Json& j, const std::string& key, const std::string& ctx = "") {
  return as<T>(require(j, key, ctx), join(ctx, key));
}

const Json& require_array(const Json& j, const std::string& key, const std::string& ctx = "") {
  const Json& a = require(j, key, ctx);
  if (!a.is_array()) throw FormatError("field '" + join(ctx, key) + "' must be an array");
  return a;
}

Json to_json(const Descriptor& d) {
  Json j = {{"shape", to_string(d.shape)}};
  j["size"] = d.size ? Json(to_string(*d.size)) : Json(nullptr);
  return j;
}

Descriptor descriptor_from_json(const Json& j, const std::string& ctx) {
  Descriptor d;
  d.shape = parse_enum<Shape>(get<std::string>(j, "shape", ctx), kNumShapes, "shape");
  const auto it = j.find("size");
  if (it != j.end() && !it->is_null()) {
    d.size = parse_enum<ObjectSize>(as<std::string>(*it, join(ctx, "size")), kNumSizes, "size");
  }
  return d;
}

}  // namespace

Json to_json(const Example& example) {
  Json objects = Json::array();
  for (const auto& o : example.scene.objects) {
    objects.push_back({{"id", o.id},
                       {"shape", to_string(o.shape)},
                       {"color", to_string(o.color)},
                       {"x", o.x},
                       {"y", o.y},
                       {"size", to_string(o.size)}});
  }
  Json options = Json::array();
  for (const auto& opt : example.query.options) options.push_back(to_string(opt));
  Json j;
  j["grid_size"] = example.scene.grid_size;
  j["objects"] = std::move(objects);
  j["kind"] = to_string(example.query.kind);
  j["subject"] = to_json(example.query.subject);
  j["object"] = example.query.object ? to_json(*example.query.object) : Json(nullptr);
  j["options"] = std::move(options);
  j["template_variant"] = example.query.template_variant;
  j["negated"] = example.query.negated;
  j["answer_index"] = example.answer.index;
  return j;
}

Example example_from_json(const Json& j) {
  Example e;
  e.scene.grid_size = get<int>(j, "grid_size");
  const Json& objects = require_array(j, "objects");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string ctx = "objects[" + std::to_string(i) + "]";
    const Json& o = objects[i];
    SceneObject obj;
    obj.id = get<int>(o, "id", ctx);
    obj.shape = parse_enum<Shape>(get<std::string>(o, "shape", ctx), kNumShapes, "shape");
    obj.color = parse_enum<Color>(get<std::string>(o, "color", ctx), kNumColors, "color");
    obj.x = get<int>(o, "x", ctx);
    obj.y = get<int>(o, "y", ctx);
    obj.size = parse_enum<ObjectSize>(get<std::string>(o, "size", ctx), kNumSizes, "size");
    if (obj.x < 0 || obj.y < 0 || obj.x >= e.scene.grid_size || obj.y >= e.scene.grid_size) {
      throw FormatError("field '" + ctx + "' lies outside the grid");
    }
    e.scene.objects.push_back(obj);
  }
  e.query.kind = parse_enum<QueryKind>(get<std::string>(j, "kind"), kNumQueryKinds, "query kind");
  e.query.subject = descriptor_from_json(require(j, "subject"), "subject");
  const auto obj = j.find("object");
  if (obj != j.end() && !obj->is_null()) e.query.object = descriptor_from_json(*obj, "object");
  const Json& options = require_array(j, "options");
  for (std::size_t i = 0; i < options.size(); ++i) {
    const auto text = as<std::string>(options[i], "options[" + std::to_string(i) + "]");
    try {
      e.query.options.push_back(parse_option_content(text));
    } catch (const Error& err) {
      throw FormatError("field 'options[" + std::to_string(i) + "]': " + err.what());
    }
  }
  e.query.template_variant = get<int>(j, "template_variant");
  if (e.query.template_variant < 0 || e.query.template_variant >= kNumTemplateVariants) {
    throw FormatError("field 'template_variant' out of range");
  }
  e.query.negated = get<bool>(j, "negated");
  e.answer.index = get<int>(j, "answer_index");
  if (e.answer.index < 0 || e.answer.index >= e.query.num_options()) {
    throw FormatError("field 'answer_index' out of option bounds");
  }
  return e;
}

Json to_json(const PolicyParams& params) {
  const auto w = params.weights();
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["feature_dim"] = kFeatureDim;
  j["w"] = std::vector<double>(w.begin(), w.end());
  j["b"] = params.format_logit();
  j["hidden_units"] = params.hidden_units();
  if (params.hidden_units() > 0) {
    const auto u = params.hidden_weights();
    const auto c = params.hidden_bias();
    const auto v = params.hidden_output();
    j["hidden_weights"] = std::vector<double>(u.begin(), u.end());
    j["hidden_bias"] = std::vector<double>(c.begin(), c.end());
    j["hidden_output"] = std::vector<double>(v.begin(), v.end());
  }
  return j;
}

namespace {

void read_block(const Json& j, const std::string& key, std::span<double> out) {
  const Json& a = require_array(j, key);
  if (a.size() != out.size()) {
    throw FormatError("field '" + key + "' has " + std::to_string(a.size()) + " entries, expected " +
                      std::to_string(out.size()));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = as<double>(a[i], key + "[" + std::to_string(i) + "]");
  }
}

}  // namespace

PolicyParams policy_from_json(const Json& j) {
  if (get<int>(j, "schema_version") != kSchemaVersion) {
    throw FormatError("unsupported policy schema_version");
  }
  if (get<int>(j, "feature_dim") != kFeatureDim) {
    throw FormatError("field 'feature_dim' does not match this build (" + std::to_string(kFeatureDim) + ")");
  }
  const int hidden = j.contains("hidden_units") ? get<int>(j, "hidden_units") : 0;
  if (hidden < 0) throw FormatError("field 'hidden_units' must be >= 0");
  PolicyParams params(hidden);
  read_block(j, "w", params.weights());
  params.format_logit() = get<double>(j, "b");
  if (hidden > 0) {
    read_block(j, "hidden_weights", params.hidden_weights());
    read_block(j, "hidden_bias", params.hidden_bias());
    read_block(j, "hidden_output", params.hidden_output());
  }
  if (!params.all_finite()) throw FormatError("policy holds non-finite values");
  return params;
}

Json to_json(const DualityOp& op) {
  Json chain = Json::array();
  for (Primitive p : op.transform_chain()) chain.push_back(to_string(p));
  Json steps = Json::array();
  for (const Step& s : op.steps()) {
    steps.push_back({{"transform", to_string(s.transform)}, {"mapping", to_string(s.mapping)}});
  }
  return {{"id", op.id()},
          {"transform_chain", std::move(chain)},
          {"mapping_kind", to_string(op.mapping_kind())},
          {"domain_tag", op.domain_tag()},
          {"steps", std::move(steps)}};
}

DualityOp op_from_json(const Json& j) {
  const auto id = get<std::string>(j, "id");
  std::vector<Step> steps;
  if (j.contains("steps")) {
    const Json& a = require_array(j, "steps");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string ctx = "steps[" + std::to_string(i) + "]";
      steps.push_back({parse_primitive(get<std::string>(a[i], "transform", ctx)),
                       parse_primitive(get<std::string>(a[i], "mapping", ctx))});
    }
  } else {
    const Json& a = require_array(j, "transform_chain");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto p = parse_primitive(as<std::string>(a[i], "transform_chain[" + std::to_string(i) + "]"));
      steps.push_back({p, p});
    }
  }
  if (steps.empty()) throw FormatError("op '" + id + "' has no steps");
  return DualityOp::from_steps(id, std::move(steps));
}

Json to_json(const JournalEntry& entry) {
  Json j;
  j["step"] = entry.step;
  j["op_id"] = entry.op_id;
  j["from_state"] = entry.from_state ? Json(to_string(*entry.from_state)) : Json(nullptr);
  j["to_state"] = to_string(entry.to_state);
  j["consistency"] = entry.consistency ? Json(*entry.consistency) : Json(nullptr);
  return j;
}

JournalEntry journal_entry_from_json(const Json& j) {
  JournalEntry e;
  e.step = get<std::int64_t>(j, "step");
  e.op_id = get<std::string>(j, "op_id");
  const Json& from = require(j, "from_state");
  if (!from.is_null()) e.from_state = parse_op_state(as<std::string>(from, "from_state"));
  e.to_state = parse_op_state(get<std::string>(j, "to_state"));
  const Json& c = require(j, "consistency");
  if (!c.is_null()) e.consistency = as<double>(c, "consistency");
  return e;
}

Json to_json(const PoolState& state) {
  Json records = Json::array();
  for (const auto& r : state.records) {
    Json history = Json::array();
    for (const auto& p : r.history) history.push_back({{"step", p.step}, {"consistency", p.consistency}});
    records.push_back({{"op", to_json(r.op)},
                       {"state", to_string(r.state)},
                       {"last_consistency", r.last_consistency},
                       {"history", std::move(history)},
                       {"n_evals", r.n_evals},
                       {"priority", r.priority}});
  }
  Json journal = Json::array();
  for (const auto& e : state.journal) journal.push_back(to_json(e));
  return {{"schema_version", kSchemaVersion},
          {"records", std::move(records)},
          {"journal", std::move(journal)},
          {"discovery_cursor", state.discovery_cursor}};
}

PoolState pool_state_from_json(const Json& j) {
  PoolState state;
  const Json& records = require_array(j, "records");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string ctx = "records[" + std::to_string(i) + "]";
    const Json& r = records[i];
    OpRecord rec{op_from_json(require(r, "op", ctx)), OpState::kCandidate, 0.0, {}, 0, 0.0};
    rec.state = parse_op_state(get<std::string>(r, "state", ctx));
    rec.last_consistency = get<double>(r, "last_consistency", ctx);
    for (const auto& p : require_array(r, "history", ctx)) {
      rec.history.push_back({get<std::int64_t>(p, "step", ctx), get<double>(p, "consistency", ctx)});
    }
    rec.n_evals = get<int>(r, "n_evals", ctx);
    rec.priority = get<double>(r, "priority", ctx);
    state.records.push_back(std::move(rec));
  }
  for (const auto& e : require_array(j, "journal")) state.journal.push_back(journal_entry_from_json(e));
  state.discovery_cursor = get<std::size_t>(j, "discovery_cursor");
  return state;
}

Json to_json(const StepMetrics& m) {
  Json j;
  j["step"] = m.step;
  j["mean_accuracy"] = m.mean_accuracy;
  j["mean_format"] = m.mean_format;
  j["mean_consistency"] = m.mean_consistency;
  j["mean_total"] = m.mean_total;
  j["kl"] = m.kl;
  j["op_id"] = m.op_id ? Json(*m.op_id) : Json(nullptr);
  j["degenerate"] = m.degenerate;
  j["spot_check"] = m.spot_check;
  j["mastered_available"] = m.mastered_available;
  j["generation_calls"] = m.generation_calls;
  j["active_count"] = m.active_count;
  j["working_set_size"] = m.working_set_size;
  j["kind"] = to_string(m.kind);
  return j;
}

StepMetrics metrics_from_json(const Json& j) {
  StepMetrics m;
  m.step = get<std::int64_t>(j, "step");
  m.mean_accuracy = get<double>(j, "mean_accuracy");
  m.mean_format = get<double>(j, "mean_format");
  m.mean_consistency = get<double>(j, "mean_consistency");
  m.mean_total = get<double>(j, "mean_total");
  m.kl = get<double>(j, "kl");
  const Json& op = require(j, "op_id");
  if (!op.is_null()) m.op_id = as<std::string>(op, "op_id");
  m.degenerate = get<bool>(j, "degenerate");
  m.spot_check = get<bool>(j, "spot_check");
  m.mastered_available = get<bool>(j, "mastered_available");
  m.generation_calls = get<int>(j, "generation_calls");
  m.active_count = get<int>(j, "active_count");
  m.working_set_size = get<int>(j, "working_set_size");
  m.kind = parse_enum<QueryKind>(get<std::string>(j, "kind"), kNumQueryKinds, "query kind");
  return m;
}

Json to_json(const ProbeReport& r) {
  return {{"step", r.step},
          {"op_id", r.op_id},
          {"consistency", r.consistency},
          {"consistent", r.consistent},
          {"samples", r.samples}};
}

ProbeReport probe_report_from_json(const Json& j) {
  ProbeReport r;
  r.step = get<std::int64_t>(j, "step");
  r.op_id = get<std::string>(j, "op_id");
  r.consistency = get<double>(j, "consistency");
  r.consistent = get<int>(j, "consistent");
  r.samples = get<int>(j, "samples");
  return r;
}

// Config schema --------------------------------------------------------------

namespace {

// Assigns fields present in an object and rejects unknown ones.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string ctx) : j_(j), ctx_(std::move(ctx)) {
    if (!j_.is_object()) throw FormatError("'" + (ctx_.empty() ? "config" : ctx_) + "' must be an object");
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    out = as<T>(*it, join(ctx_, key));
  }

  const Json* child(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string path(const std::string& key) const { return join(ctx_, key); }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw FormatError("unknown field '" + join(ctx_, key) + "'");
    }
  }

 private:
  const Json& j_;
  std::string ctx_;
  std::set<std::string> seen_;
};

}  // namespace

Json to_json(const TrainConfig& c) {
  Json kind_weights = Json::object();
  for (int k = 0; k < kNumQueryKinds; ++k) {
    kind_weights[to_string(static_cast<QueryKind>(k))] = c.env.kind_weights[static_cast<std::size_t>(k)];
  }
  Json env = {{"grid_size", c.env.grid_size},
              {"min_objects", c.env.min_objects},
              {"max_objects", c.env.max_objects},
              {"kind_weights", std::move(kind_weights)},
              {"binary_prob", c.env.binary_prob},
              {"negation_prob", c.env.negation_prob},
              {"horizontal_skew", c.env.horizontal_skew},
              {"vertical_skew", c.env.vertical_skew},
              {"max_attempts", c.env.max_attempts}};
  Json pool = {{"max_active", c.pool.max_active},
               {"max_pool", c.pool.max_pool},
               {"eval_interval", c.pool.eval_interval},
               {"mastery_threshold", c.pool.mastery_threshold},
               {"forget_ratio", c.pool.forget_ratio},
               {"novelty_bonus", c.pool.novelty_bonus},
               {"novelty_evals", c.pool.novelty_evals},
               {"spot_check_prob", c.pool.spot_check_prob},
               {"probe_size", c.pool.probe_size},
               {"weight_floor", c.pool.weight_floor},
               {"discovery_per_checkpoint", c.pool.discovery_per_checkpoint},
               {"discovery_verify_samples", c.pool.discovery_verify_samples},
               {"initial_active", c.pool.initial_active}};
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["total_steps"] = c.total_steps;
  j["group_size"] = c.group_size;
  j["lambda"] = c.lambda;
  j["beta"] = c.beta;
  j["lr"] = c.lr;
  j["seed"] = c.seed;
  j["dual_gradient"] = c.dual_gradient;
  j["consistency_enabled"] = c.consistency_enabled;
  j["init"] = to_string(c.init);
  j["bias_strength"] = c.bias_strength;
  j["hidden_units"] = c.hidden_units;
  j["checkpoint_interval"] = c.checkpoint_interval;
  j["corpus_path"] = c.corpus_path ? Json(*c.corpus_path) : Json(nullptr);
  j["pool"] = std::move(pool);
  j["env"] = std::move(env);
  return j;
}

TrainConfig config_from_json(const Json& j) {
  TrainConfig c;
  ObjectReader top(j, "");
  int version = kSchemaVersion;
  top.read("schema_version", version);
  if (version != kSchemaVersion) throw FormatError("unsupported config schema_version");
  top.read("total_steps", c.total_steps);
  top.read("group_size", c.group_size);
  top.read("lambda", c.lambda);
  top.read("beta", c.beta);
  top.read("lr", c.lr);
  top.read("seed", c.seed);
  top.read("dual_gradient", c.dual_gradient);
  top.read("consistency_enabled", c.consistency_enabled);
  std::string init = to_string(c.init);
  top.read("init", init);
  try {
    c.init = parse_init_kind(init);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("field 'init': ") + e.what());
  }
  top.read("bias_strength", c.bias_strength);
  top.read("hidden_units", c.hidden_units);
  top.read("checkpoint_interval", c.checkpoint_interval);
  if (const Json* corpus = top.child("corpus_path"); corpus && !corpus->is_null()) {
    c.corpus_path = as<std::string>(*corpus, "corpus_path");
  }
  if (const Json* pool = top.child("pool")) {
    ObjectReader r(*pool, "pool");
    r.read("max_active", c.pool.max_active);
    r.read("max_pool", c.pool.max_pool);
    r.read("eval_interval", c.pool.eval_interval);
    r.read("mastery_threshold", c.pool.mastery_threshold);
    r.read("forget_ratio", c.pool.forget_ratio);
    r.read("novelty_bonus", c.pool.novelty_bonus);
    r.read("novelty_evals", c.pool.novelty_evals);
    r.read("spot_check_prob", c.pool.spot_check_prob);
    r.read("probe_size", c.pool.probe_size);
    r.read("weight_floor", c.pool.weight_floor);
    r.read("discovery_per_checkpoint", c.pool.discovery_per_checkpoint);
    r.read("discovery_verify_samples", c.pool.discovery_verify_samples);
    if (const Json* active = r.child("initial_active")) {
      if (!active->is_array()) throw FormatError("field 'pool.initial_active' must be an array");
      c.pool.initial_active.clear();
      for (std::size_t i = 0; i < active->size(); ++i) {
        c.pool.initial_active.push_back(
            as<std::string>((*active)[i], "pool.initial_active[" + std::to_string(i) + "]"));
      }
    }
    r.finish();
  }
  if (const Json* env = top.child("env")) {
    ObjectReader r(*env, "env");
    r.read("grid_size", c.env.grid_size);
    r.read("min_objects", c.env.min_objects);
    r.read("max_objects", c.env.max_objects);
    if (const Json* weights = r.child("kind_weights")) {
      ObjectReader w(*weights, "env.kind_weights");
      for (int k = 0; k < kNumQueryKinds; ++k) {
        w.read(to_string(static_cast<QueryKind>(k)), c.env.kind_weights[static_cast<std::size_t>(k)]);
      }
      w.finish();
    }
    r.read("binary_prob", c.env.binary_prob);
    r.read("negation_prob", c.env.negation_prob);
    r.read("horizontal_skew", c.env.horizontal_skew);
    r.read("vertical_skew", c.env.vertical_skew);
    r.read("max_attempts", c.env.max_attempts);
    r.finish();
  }
  top.finish();
  validate(c);
  return c;
}

// Files ----------------------------------------------------------------------

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

Json read_json_file(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::vector<JsonLine> read_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::vector<JsonLine> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back({number, Json::parse(line)});
    } catch (const Json::parse_error&) {
      throw FormatError(path.string() + ":" + std::to_string(number) + ": malformed JSON line");
    }
  }
  return out;
}

std::vector<Example> load_corpus(const fs::path& path) {
  auto examples = read_jsonl_as<Example>(path, &example_from_json);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    try {
      if (ground_truth(examples[i].scene, examples[i].query) != examples[i].answer) {
        throw FormatError("answer_index disagrees with the scene");
      }
    } catch (const Error& e) {
      throw FormatError(path.string() + ": record " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return examples;
}

void save_corpus(const fs::path& path, const std::vector<Example>& examples) {
  std::string text;
  for (const auto& e : examples) text += to_json(e).dump() + "\n";
  write_text_file(path, text);
}

void save_checkpoint(const fs::path& dir, const TrainConfig& config, const TrainerState& state) {
  fs::create_directories(dir);
  write_json_file(dir / "config.json", to_json(config));
  write_json_file(dir / "policy.json", to_json(state.params));
  write_json_file(dir / "reference.json", to_json(state.reference));
  write_json_file(dir / "pool.json", to_json(state.pool));
  write_text_file(dir / "rng.txt", state.rng.serialize());
  write_text_file(dir / "pool_rng.txt", state.pool_rng.serialize());
  write_json_file(dir / "state.json", Json{{"schema_version", kSchemaVersion}, {"step", state.step}});
}

LoadedCheckpoint load_checkpoint(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw FormatError("checkpoint directory " + dir.string() + " not found");
  auto wrap = [&](const char* file, auto&& fn) {
    try {
      return fn(read_json_file(dir / file));
    } catch (const FormatError& e) {
      throw FormatError((dir / file).string() + ": " + e.what());
    }
  };
  LoadedCheckpoint out{wrap("config.json", config_from_json), TrainerState{}};
  out.state.params = wrap("policy.json", policy_from_json);
  out.state.reference = wrap("reference.json", policy_from_json);
  out.state.pool = wrap("pool.json", pool_state_from_json);
  out.state.rng = Rng::deserialize(read_text_file(dir / "rng.txt"));
  out.state.pool_rng = Rng::deserialize(read_text_file(dir / "pool_rng.txt"));
  out.state.step = wrap("state.json", [](const Json& j) { return get<std::int64_t>(j, "step"); });
  return out;
}

}  // namespace dualcons
