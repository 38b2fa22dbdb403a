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

#include "dualcons/cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "dualcons/duality.h"
#include "dualcons/errors.h"
#include "dualcons/io.h"
#include "dualcons/pool.h"
#include "dualcons/theory.h"
#include "dualcons/trainer.h"

#ifndef DUALCONS_VERSION
#define DUALCONS_VERSION "0.0.0"
#endif

namespace dualcons {
namespace {

namespace fs = std::filesystem;

// A usage or configuration problem detected after parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("dualcons", sink);
  logger->set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char* env = std::getenv("DUALCONS_LOG")) {
    level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; keep the default instead.
    if (level == spdlog::level::off && std::string(env) != "off") level = spdlog::level::info;
  }
  logger->set_level(level);
  return logger;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

TrainConfig load_config(const std::string& path) {
  if (path.empty()) return TrainConfig{};
  try {
    return config_from_json(read_json_file(path));
  } catch (const Error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
}

// Line-buffered JSONL writer.
class JsonlWriter {
 public:
  explicit JsonlWriter(const fs::path& path) : path_(path), out_(path, std::ios::trunc) {
    if (!out_) throw Error("cannot write " + path.string());
  }
  void write(const Json& j) {
    out_ << j.dump() << '\n';
    if (!out_) throw Error("write failed for " + path_.string());
  }
  void flush() { out_.flush(); }

 private:
  fs::path path_;
  std::ofstream out_;
};

// train ----------------------------------------------------------------------

struct TrainArgs {
  std::string config;
  std::string out = "run";
  std::string resume;
  std::string corpus;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> steps;
};

int cmd_train(const TrainArgs& args, std::ostream& out, spdlog::logger& log) {
  TrainConfig config;
  std::optional<TrainerState> resumed;
  if (!args.resume.empty()) {
    try {
      auto loaded = load_checkpoint(args.resume);
      config = loaded.config;
      resumed = std::move(loaded.state);
    } catch (const FormatError& e) {
      throw UsageError(std::string("checkpoint: ") + e.what());
    }
    if (!args.config.empty()) log.warn("--config is ignored when resuming");
  } else {
    config = load_config(args.config);
  }
  if (args.seed) {
    if (resumed) throw UsageError("--seed cannot change a resumed run");
    config.seed = *args.seed;
  }
  if (args.steps) config.total_steps = *args.steps;
  if (!args.corpus.empty()) config.corpus_path = args.corpus;
  try {
    validate(config);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("config: ") + e.what());
  }

  const fs::path dir = args.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());

  const std::string started = timestamp();
  write_json_file(dir / "config.json", to_json(config));
  JsonlWriter metrics(dir / "metrics.jsonl");
  JsonlWriter journal(dir / "journal.jsonl");
  JsonlWriter probes(dir / "probes.jsonl");
  std::vector<std::string> checkpoints;

  Trainer trainer = resumed ? Trainer(config, *resumed) : Trainer(config);
  log.info("training {} steps from step {} (seed {})", config.total_steps, trainer.state().step,
           config.seed);
  RunObserver observer;
  observer.on_metrics = [&](const StepMetrics& m) { metrics.write(to_json(m)); };
  observer.on_journal = [&](const JournalEntry& e) {
    journal.write(to_json(e));
    if (e.step > 0) {
      log.info("step {}: {} {} -> {}", e.step, e.op_id,
               e.from_state ? to_string(*e.from_state) : std::string("new"), to_string(e.to_state));
    }
  };
  observer.on_probe = [&](const ProbeReport& p) {
    probes.write(to_json(p));
    log.debug("step {}: probe {} C={:.3f} ({}/{})", p.step, p.op_id, p.consistency, p.consistent,
              p.samples);
  };
  observer.on_checkpoint = [&](const Trainer& t, const std::string& tag) {
    const fs::path path = dir / "checkpoints" / tag;
    save_checkpoint(path, t.config(), t.state());
    checkpoints.push_back(fs::relative(path, dir).string());
    log.debug("checkpoint {}", path.string());
  };

  auto write_manifest = [&](const std::string& status) {
    Json manifest;
    manifest["tool"] = "dualcons";
    manifest["version"] = DUALCONS_VERSION;
    manifest["status"] = status;
    manifest["seed"] = config.seed;
    manifest["started_at"] = started;
    manifest["finished_at"] = timestamp();
    manifest["resumed_from"] = args.resume.empty() ? Json(nullptr) : Json(args.resume);
    manifest["config"] = to_json(config);
    manifest["outputs"] = {{"config", "config.json"},
                           {"metrics", "metrics.jsonl"},
                           {"journal", "journal.jsonl"},
                           {"probes", "probes.jsonl"},
                           {"checkpoints", checkpoints}};
    write_json_file(dir / "manifest.json", manifest);
  };

  RunResult result;
  try {
    result = run_training(trainer, observer);
  } catch (const NumericalError&) {
    metrics.flush();
    journal.flush();
    probes.flush();
    write_manifest("numerical_failure");
    throw;
  }
  metrics.flush();
  journal.flush();
  probes.flush();
  write_manifest("completed");

  double acc = 0.0;
  const std::size_t tail = std::min<std::size_t>(result.metrics.size(), 500);
  for (std::size_t i = result.metrics.size() - tail; i < result.metrics.size(); ++i) {
    acc += result.metrics[i].mean_accuracy;
  }
  out << "steps " << trainer.state().step << "\n";
  if (tail > 0) out << "mean accuracy over last " << tail << " steps " << acc / tail << "\n";
  for (const auto& r : trainer.state().pool.records) {
    out << std::left << std::setw(28) << r.op.id() << std::setw(10) << to_string(r.state)
        << (r.n_evals > 0 ? std::to_string(r.last_consistency) : std::string("-")) << "\n";
  }
  out << "artifacts in " << dir.string() << "\n";
  return kExitOk;
}

// probe ----------------------------------------------------------------------

struct ProbeArgs {
  std::string checkpoint;
  std::string policy;
  std::string ops;
  std::string kind;
  int n = 256;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_probe(const ProbeArgs& args, std::ostream& out, spdlog::logger& log) {
  if (args.n <= 0) throw UsageError("-n must be positive");
  if (args.checkpoint.empty() == args.policy.empty()) {
    throw UsageError("give exactly one of --checkpoint or --policy");
  }
  PolicyParams params;
  EnvConfig env;
  std::vector<DualityOp> ops = builtin_pool();
  try {
    if (!args.checkpoint.empty()) {
      const auto loaded = load_checkpoint(args.checkpoint);
      params = loaded.state.params;
      env = loaded.config.env;
      ops.clear();
      for (const auto& r : loaded.state.pool.records) ops.push_back(r.op);
    } else {
      params = policy_from_json(read_json_file(args.policy));
    }
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  }
  if (!args.ops.empty()) {
    std::vector<DualityOp> selected;
    std::stringstream list(args.ops);
    std::string id;
    while (std::getline(list, id, ',')) {
      const auto it = std::find_if(ops.begin(), ops.end(), [&](const DualityOp& op) { return op.id() == id; });
      if (it == ops.end()) throw UsageError("unknown op id '" + id + "'");
      selected.push_back(*it);
    }
    ops = std::move(selected);
  }
  std::optional<QueryKind> kind;
  if (!args.kind.empty()) {
    try {
      kind = parse_query_kind(args.kind);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    for (int k = 0; k < kNumQueryKinds; ++k) {
      env.kind_weights[static_cast<std::size_t>(k)] = k == static_cast<int>(*kind) ? 1.0 : 0.0;
    }
  }
  Rng rng(args.seed);
  std::vector<Example> probe;
  probe.reserve(static_cast<std::size_t>(args.n));
  for (int i = 0; i < args.n; ++i) probe.push_back(sample_example(rng, env));

  Json reports = Json::array();
  out << std::left << std::setw(28) << "op" << std::setw(12) << "consistency" << "samples\n";
  for (const auto& op : ops) {
    const auto in_domain = filter_domain(op, probe);
    if (in_domain.empty()) {
      out << std::setw(28) << op.id() << std::setw(12) << "n/a" << 0 << "\n";
      reports.push_back({{"op_id", op.id()}, {"consistency", nullptr}, {"consistent", 0}, {"samples", 0}});
      continue;
    }
    const ProbeReport r = estimate_consistency(params, op, in_domain);
    std::ostringstream c;
    c << std::fixed << std::setprecision(4) << r.consistency;
    out << std::setw(28) << op.id() << std::setw(12) << c.str() << r.samples << "\n";
    Json j = to_json(r);
    j.erase("step");
    reports.push_back(std::move(j));
  }
  if (!args.out.empty()) {
    Json report = {{"source", args.checkpoint.empty() ? args.policy : args.checkpoint},
                   {"probe_size", args.n},
                   {"seed", args.seed},
                   {"kind", kind ? Json(to_string(*kind)) : Json(nullptr)},
                   {"reports", std::move(reports)}};
    write_json_file(args.out, report);
    log.info("wrote {}", args.out);
  }
  return kExitOk;
}

// verify ---------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  int tasks = 100;
  int samples = 10000;
  int compositions = 0;
  std::uint64_t seed = 0;
  int num_ops = 4;
  int max_active = 3;
  double gain = 0.02;
  double decay = 0.004;
  double threshold = 0.75;
  int steps = 0;
  std::string out;
};

Json report_json(const VerificationReport& r) {
  return {{"claim", r.claim},
          {"instances", r.instances},
          {"violations", r.violations},
          {"tightest_case", r.tightest_slack ? Json{{"slack", *r.tightest_slack}, {"case", r.tightest_case}}
                                             : Json(nullptr)}};
}

VerificationReport verify_theorem1_suite(const VerifyArgs& args) {
  VerificationReport total;
  Rng rng(args.seed);
  for (int i = 0; i < args.tasks; ++i) {
    const FiniteTask task = random_finite_task(rng);
    VerificationReport r = verify_theorem1(task);
    total.claim = r.claim;
    total.instances += r.instances;
    total.violations += r.violations;
    if (r.tightest_slack && (!total.tightest_slack || *r.tightest_slack < *total.tightest_slack)) {
      total.tightest_slack = r.tightest_slack;
      total.tightest_case = "task " + std::to_string(i) + ": " + r.tightest_case;
    }
  }
  return total;
}

VerificationReport verify_prop2_suite(const VerifyArgs& args) {
  VerificationReport total;
  total.claim = "feasible hypotheses <= C^(N - N_T/2); for C = 2, VC dimension <= N - N_T/2";
  Rng rng(args.seed);
  for (int i = 0; i < args.tasks; ++i) {
    const FiniteTask task = random_finite_task(rng);
    const HypothesisCount h = count_feasible_hypotheses(task);
    ++total.instances;
    bool violated = h.feasible > h.bound;
    if (h.vc_dimension && *h.vc_dimension > h.vc_bound) violated = true;
    if (violated) ++total.violations;
    const double slack = static_cast<double>(h.bound - h.feasible);
    if (!total.tightest_slack || slack < *total.tightest_slack) {
      total.tightest_slack = slack;
      std::ostringstream c;
      c << "task " << i << ": N=" << task.num_inputs() << " C=" << task.num_answers
        << " N_T=" << task.orbit_inputs() << " feasible=" << h.feasible << " bound=" << h.bound;
      if (h.vc_dimension) c << " vc=" << *h.vc_dimension << " vc_bound=" << h.vc_bound;
      total.tightest_case = c.str();
    }
  }
  return total;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, spdlog::logger& log) {
  if (args.tasks < 1) throw UsageError("--tasks must be positive");
  if (args.samples < 1) throw UsageError("--samples must be positive");
  Json report;
  bool violated = false;
  if (args.suite == "theorem1" || args.suite == "prop2") {
    const VerificationReport r =
        args.suite == "theorem1" ? verify_theorem1_suite(args) : verify_prop2_suite(args);
    report = report_json(r);
    violated = !r.passed();
    out << r.claim << "\n"
        << "instances " << r.instances << ", violations " << r.violations << "\n";
    if (r.tightest_slack) out << "tightest slack " << *r.tightest_slack << " at " << r.tightest_case << "\n";
  } else if (args.suite == "prop3") {
    PotentialConfig pc;
    pc.num_ops = args.num_ops;
    pc.max_active = args.max_active;
    pc.gain = args.gain;
    pc.decay = args.decay;
    pc.threshold = args.threshold;
    PotentialTrace probe_trace;
    try {
      pc.steps = 0;
      probe_trace = simulate_potential(pc);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    const double horizon = probe_trace.predicted_horizon;
    pc.steps = args.steps > 0 ? args.steps
                              : (std::isfinite(horizon) ? static_cast<int>(std::ceil(horizon)) * 2 + 10 : 1000);
    const PotentialTrace trace = simulate_potential(pc);
    const double rate = pc.max_active * pc.gain - (pc.num_ops - pc.max_active) * pc.decay;
    report["claim"] = "potential reaches 0 within ceil(T*) steps; per-step decrement >= K*eps - (M-K)*eta before mastery";
    report["condition_met"] = trace.condition_met;
    report["predicted_horizon"] = trace.condition_met ? Json(horizon) : Json(nullptr);
    report["zero_step"] = trace.zero_step ? Json(*trace.zero_step) : Json(nullptr);
    report["min_pre_mastery_decrement"] =
        trace.min_pre_mastery_decrement ? Json(*trace.min_pre_mastery_decrement) : Json(nullptr);
    report["rate"] = rate;
    report["instances"] = 1;
    if (!trace.condition_met) {
      report["violations"] = 0;
      report["status"] = "non-convergent, condition unmet";
      report["tightest_case"] = nullptr;
      out << "non-convergent, condition unmet (K*eps - (M-K)*eta = " << rate << " <= 0)\n";
    } else {
      const int deadline = static_cast<int>(std::ceil(horizon));
      int violations = 0;
      if (!trace.zero_step || *trace.zero_step > deadline) ++violations;
      if (trace.min_pre_mastery_decrement && *trace.min_pre_mastery_decrement < rate - 1e-12) ++violations;
      violated = violations > 0;
      report["violations"] = violations;
      report["status"] = violated ? "violated" : "converged";
      report["tightest_case"] = {{"deadline", deadline},
                                 {"potential_at_deadline",
                                  trace.potential[static_cast<std::size_t>(std::min<int>(
                                      deadline, static_cast<int>(trace.potential.size()) - 1))]}};
      out << "T* = " << horizon << " (deadline " << deadline << "), potential reached 0 at step "
          << (trace.zero_step ? std::to_string(*trace.zero_step) : std::string("never")) << "\n"
          << "min pre-mastery decrement "
          << (trace.min_pre_mastery_decrement ? std::to_string(*trace.min_pre_mastery_decrement)
                                              : std::string("n/a"))
          << " vs rate " << rate << "\n";
    }
  } else if (args.suite == "axiom") {
    VerificationReport r;
    r.claim = "ground truth on T(x) equals phi(ground truth on x)";
    std::vector<DualityOp> ops = builtin_pool();
    Rng rng(args.seed);
    if (args.compositions > 0) {
      const auto base = builtin_pool();
      for (int i = 0; i < args.compositions; ++i) {
        ops.push_back(compose(base[rng.index(base.size())], base[rng.index(base.size())]));
      }
    }
    Json per_op = Json::array();
    for (const auto& op : ops) {
      try {
        const AxiomReport a = verify_axiom(op, args.samples, rng, EnvConfig{});
        r.instances += a.samples_tested;
        r.violations += a.violation_count;
        per_op.push_back({{"op_id", op.id()}, {"samples", a.samples_tested}, {"violations", a.violation_count}});
      } catch (const Unsatisfiable& e) {
        log.warn("{}", e.what());
        per_op.push_back({{"op_id", op.id()}, {"samples", 0}, {"violations", 0}, {"skipped", e.what()}});
      }
    }
    report = report_json(r);
    report["ops"] = std::move(per_op);
    violated = !r.passed();
    out << ops.size() << " ops, " << r.instances << " samples, violations " << r.violations << "\n";
  } else {
    throw UsageError("unknown suite '" + args.suite + "'");
  }
  if (!args.out.empty()) write_json_file(args.out, report);
  out << (violated ? "VIOLATED" : "OK") << "\n";
  return violated ? kExitViolation : kExitOk;
}

// report ---------------------------------------------------------------------

std::string csv_number(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

int cmd_report(const std::string& run_dir, const std::string& out_dir_arg, std::ostream& out,
               spdlog::logger& log) {
  const fs::path dir = run_dir;
  if (!fs::is_directory(dir)) throw UsageError("run directory " + dir.string() + " not found");
  for (const char* name : {"metrics.jsonl", "journal.jsonl", "probes.jsonl"}) {
    if (!fs::exists(dir / name)) throw UsageError("run directory lacks " + std::string(name));
  }
  const auto metrics = read_jsonl_as<StepMetrics>(dir / "metrics.jsonl", &metrics_from_json);
  const auto journal = read_jsonl_as<JournalEntry>(dir / "journal.jsonl", &journal_entry_from_json);
  const auto probes = read_jsonl_as<ProbeReport>(dir / "probes.jsonl", &probe_report_from_json);
  if (metrics.empty()) throw UsageError(dir.string() + "/metrics.jsonl holds no steps");
  double threshold = PoolConfig{}.mastery_threshold;
  if (fs::exists(dir / "config.json")) threshold = config_from_json(read_json_file(dir / "config.json")).pool.mastery_threshold;

  const fs::path out_dir = out_dir_arg.empty() ? dir : fs::path(out_dir_arg);
  std::ostringstream rewards;
  rewards << "step,accuracy,format,consistency,total,kl,op_id,degenerate\n";
  for (const auto& m : metrics) {
    rewards << m.step << ',' << csv_number(m.mean_accuracy) << ',' << csv_number(m.mean_format) << ','
            << csv_number(m.mean_consistency) << ',' << csv_number(m.mean_total) << ','
            << csv_number(m.kl) << ',' << m.op_id.value_or("") << ',' << (m.degenerate ? 1 : 0) << '\n';
  }
  write_text_file(out_dir / "rewards.csv", rewards.str());

  // One row per checkpoint, one column per op seen in any probe.
  std::vector<std::string> op_ids;
  std::map<std::int64_t, std::map<std::string, double>> by_step;
  for (const auto& p : probes) {
    if (std::find(op_ids.begin(), op_ids.end(), p.op_id) == op_ids.end()) op_ids.push_back(p.op_id);
    by_step[p.step][p.op_id] = p.consistency;
  }
  std::ostringstream consistency;
  consistency << "step";
  for (const auto& id : op_ids) consistency << ',' << id;
  consistency << ",potential\n";
  for (const auto& [step, values] : by_step) {
    consistency << step;
    std::vector<double> probed;
    for (const auto& id : op_ids) {
      consistency << ',';
      const auto it = values.find(id);
      if (it != values.end()) {
        consistency << csv_number(it->second);
        probed.push_back(it->second);
      }
    }
    consistency << ',' << csv_number(potential(probed, threshold)) << '\n';
  }
  write_text_file(out_dir / "consistency.csv", consistency.str());

  std::ostringstream states;
  states << "step,op_id,from_state,to_state,consistency\n";
  for (const auto& e : journal) {
    states << e.step << ',' << e.op_id << ',' << (e.from_state ? to_string(*e.from_state) : "") << ','
           << to_string(e.to_state) << ',' << (e.consistency ? csv_number(*e.consistency) : "") << '\n';
  }
  write_text_file(out_dir / "states.csv", states.str());

  log.info("wrote rewards.csv ({} rows), consistency.csv ({} rows), states.csv ({} rows)", metrics.size(),
           by_step.size(), journal.size());
  out << (out_dir / "rewards.csv").string() << "\n"
      << (out_dir / "consistency.csv").string() << "\n"
      << (out_dir / "states.csv").string() << "\n";
  return kExitOk;
}

// gen-corpus -----------------------------------------------------------------

int cmd_gen_corpus(const std::string& config_path, int n, std::uint64_t seed, const std::string& path,
                   std::ostream& out) {
  if (n <= 0) throw UsageError("-n must be positive");
  const TrainConfig config = load_config(config_path);
  Rng rng(seed);
  std::vector<Example> examples;
  examples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) examples.push_back(sample_example(rng, config.env));
  save_corpus(path, examples);
  out << "wrote " << n << " examples to " << path << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Duality-consistency training, probing and verification on a synthetic spatial VQA task",
               "dualcons"};
  app.set_version_flag("--version", DUALCONS_VERSION);
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Run consistency-augmented training");
  train_cmd->add_option("--config", train.config, "JSON config (defaults apply to missing fields)");
  train_cmd->add_option("--out", train.out, "Output directory")->capture_default_str();
  train_cmd->add_option("--resume", train.resume, "Checkpoint directory to resume from");
  train_cmd->add_option("--corpus", train.corpus, "Replay examples from a JSONL corpus");
  train_cmd->add_option("--seed", train.seed, "Override the config seed");
  train_cmd->add_option("--steps", train.steps, "Override total_steps");

  ProbeArgs probe;
  auto* probe_cmd = app.add_subcommand("probe", "Estimate per-op duality consistency of a policy");
  probe_cmd->add_option("--checkpoint", probe.checkpoint, "Checkpoint directory");
  probe_cmd->add_option("--policy", probe.policy, "Policy JSON file");
  probe_cmd->add_option("--ops", probe.ops, "Comma-separated op ids (default: every op)");
  probe_cmd->add_option("--kind", probe.kind, "Restrict the probe set to one query kind");
  probe_cmd->add_option("-n", probe.n, "Probe set size")->capture_default_str();
  probe_cmd->add_option("--seed", probe.seed, "Probe set seed")->capture_default_str();
  probe_cmd->add_option("--out", probe.out, "Write a JSON report here");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("suite", verify.suite, "theorem1 | prop2 | prop3 | axiom")
      ->required()
      ->check(CLI::IsMember({"theorem1", "prop2", "prop3", "axiom"}));
  verify_cmd->add_option("--tasks", verify.tasks, "Random finite tasks")->capture_default_str();
  verify_cmd->add_option("--samples", verify.samples, "In-domain samples per op")->capture_default_str();
  verify_cmd->add_option("--compositions", verify.compositions, "Extra random depth-2 compositions");
  verify_cmd->add_option("--seed", verify.seed, "Seed")->capture_default_str();
  verify_cmd->add_option("--M", verify.num_ops, "Pool size")->capture_default_str();
  verify_cmd->add_option("--K", verify.max_active, "Active ops")->capture_default_str();
  verify_cmd->add_option("--eps", verify.gain, "Per-step gain of an active op")->capture_default_str();
  verify_cmd->add_option("--eta", verify.decay, "Per-step loss of an inactive op")->capture_default_str();
  verify_cmd->add_option("--tau", verify.threshold, "Mastery threshold")->capture_default_str();
  verify_cmd->add_option("--steps", verify.steps, "Simulation steps (default: from T*)");
  verify_cmd->add_option("--out", verify.out, "Write a JSON report here");

  std::string run_dir;
  std::string report_out;
  auto* report_cmd = app.add_subcommand("report", "Write CSV series from a finished run");
  report_cmd->add_option("run", run_dir, "Run directory")->required();
  report_cmd->add_option("--out", report_out, "Directory for the CSV files (default: the run)");

  std::string corpus_config;
  std::string corpus_out;
  int corpus_n = 1000;
  std::uint64_t corpus_seed = 0;
  auto* corpus_cmd = app.add_subcommand("gen-corpus", "Write a JSONL corpus of examples");
  corpus_cmd->add_option("--config", corpus_config, "JSON config supplying the environment");
  corpus_cmd->add_option("-n", corpus_n, "Number of examples")->capture_default_str();
  corpus_cmd->add_option("--seed", corpus_seed, "Seed")->capture_default_str();
  corpus_cmd->add_option("--out", corpus_out, "Output JSONL path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto log = make_logger(err);
  try {
    if (*train_cmd) return cmd_train(train, out, *log);
    if (*probe_cmd) return cmd_probe(probe, out, *log);
    if (*verify_cmd) return cmd_verify(verify, out, *log);
    if (*report_cmd) return cmd_report(run_dir, report_out, out, *log);
    if (*corpus_cmd) return cmd_gen_corpus(corpus_config, corpus_n, corpus_seed, corpus_out, out);
  } catch (const UsageError& e) {
    log->error("{}", e.what());
    return kExitUsage;
  } catch (const FormatError& e) {
    log->error("{}", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace dualcons
