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

#include "dualcons/theory.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace dualcons {
namespace {

std::string format_classifier(const Classifier& f) {
  std::ostringstream out;
  out << "f=[";
  for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
  out << "]";
  return out.str();
}

std::int64_t power(std::int64_t base, int exponent) {
  std::int64_t out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

bool feasible(const Classifier& f, const FiniteTask& task) {
  for (const auto& orbit : task.orbits) {
    const int a = f[static_cast<std::size_t>(orbit.original)];
    if (f[static_cast<std::size_t>(orbit.dual)] != orbit.phi[static_cast<std::size_t>(a)]) return false;
  }
  return true;
}

}  // namespace

void validate(const FiniteTask& task) {
  const int n = task.num_inputs();
  const int c = task.num_answers;
  if (c < 2) throw InvalidArgument("finite task needs at least 2 answers");
  if (n < 1) throw InvalidArgument("finite task needs at least 1 input");
  for (int a : task.truth) {
    if (a < 0 || a >= c) throw InvalidArgument("ground truth outside the answer range");
  }
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (const auto& orbit : task.orbits) {
    for (int x : {orbit.original, orbit.dual}) {
      if (x < 0 || x >= n) throw InvalidArgument("orbit references an unknown input");
      if (used[static_cast<std::size_t>(x)]) throw InvalidArgument("orbits overlap");
      used[static_cast<std::size_t>(x)] = true;
    }
    if (orbit.original == orbit.dual) throw InvalidArgument("orbit pairs an input with itself");
    if (static_cast<int>(orbit.phi.size()) != c) throw InvalidArgument("phi must cover every answer");
    std::vector<int> sorted = orbit.phi;
    std::sort(sorted.begin(), sorted.end());
    for (int a = 0; a < c; ++a) {
      if (sorted[static_cast<std::size_t>(a)] != a) throw InvalidArgument("phi is not a bijection");
    }
    const int a = task.truth[static_cast<std::size_t>(orbit.original)];
    if (task.truth[static_cast<std::size_t>(orbit.dual)] != orbit.phi[static_cast<std::size_t>(a)]) {
      throw InvalidArgument("ground truth breaks the duality axiom on an orbit");
    }
  }
}

FiniteTask random_finite_task(Rng& rng, int max_inputs, int max_answers) {
  if (max_inputs < 2 || max_answers < 2) throw InvalidArgument("random_finite_task: limits too small");
  FiniteTask task;
  const int n = static_cast<int>(rng.uniform_int(2, max_inputs));
  task.num_answers = static_cast<int>(rng.uniform_int(2, max_answers));
  std::vector<int> inputs(static_cast<std::size_t>(n));
  std::iota(inputs.begin(), inputs.end(), 0);
  rng.shuffle(std::span<int>(inputs));
  const int num_orbits = static_cast<int>(rng.uniform_int(1, n / 2));
  task.truth.assign(static_cast<std::size_t>(n), 0);
  for (auto& a : task.truth) a = static_cast<int>(rng.index(static_cast<std::size_t>(task.num_answers)));
  for (int k = 0; k < num_orbits; ++k) {
    Orbit orbit;
    orbit.original = inputs[static_cast<std::size_t>(2 * k)];
    orbit.dual = inputs[static_cast<std::size_t>(2 * k + 1)];
    orbit.phi.resize(static_cast<std::size_t>(task.num_answers));
    std::iota(orbit.phi.begin(), orbit.phi.end(), 0);
    rng.shuffle(std::span<int>(orbit.phi));
    task.truth[static_cast<std::size_t>(orbit.dual)] =
        orbit.phi[static_cast<std::size_t>(task.truth[static_cast<std::size_t>(orbit.original)])];
    task.orbits.push_back(std::move(orbit));
  }
  return task;
}

RiskReport risks(const Classifier& classifier, const FiniteTask& task) {
  if (static_cast<int>(classifier.size()) != task.num_inputs()) {
    throw InvalidArgument("classifier must answer every task input");
  }
  if (task.orbits.empty()) throw InvalidArgument("risks need at least one orbit");
  RiskReport r;
  r.orbits = static_cast<int>(task.orbits.size());
  for (const auto& orbit : task.orbits) {
    const int f = classifier[static_cast<std::size_t>(orbit.original)];
    const int f_dual = classifier[static_cast<std::size_t>(orbit.dual)];
    r.wrong += f != task.truth[static_cast<std::size_t>(orbit.original)];
    r.wrong_dual += f_dual != task.truth[static_cast<std::size_t>(orbit.dual)];
    r.consistent += f_dual == orbit.phi[static_cast<std::size_t>(f)];
  }
  const double n = r.orbits;
  r.risk = r.wrong / n;
  r.dual_risk = r.wrong_dual / n;
  r.augmented_risk = (r.wrong + r.wrong_dual) / (2.0 * n);
  r.consistency = r.consistent / n;
  return r;
}

VerificationReport verify_theorem1(const FiniteTask& task, std::int64_t budget) {
  validate(task);
  if (task.orbits.empty()) throw InvalidArgument("verify_theorem1 needs at least one orbit");
  VerificationReport report;
  report.claim = "augmented risk >= (1 - consistency) / 2; zero risk implies dual risk >= 1 - consistency";
  for_each_classifier(task.num_inputs(), task.num_answers, budget, [&](const Classifier& f) {
    const RiskReport r = risks(f, task);
    ++report.instances;
    const int inconsistent = r.orbits - r.consistent;
    bool violated = r.wrong + r.wrong_dual < inconsistent;
    if (r.wrong == 0 && r.wrong_dual < inconsistent) violated = true;
    for (const auto& orbit : task.orbits) {
      const int a = f[static_cast<std::size_t>(orbit.original)];
      const int b = f[static_cast<std::size_t>(orbit.dual)];
      const int lhs = (a != task.truth[static_cast<std::size_t>(orbit.original)]) +
                      (b != task.truth[static_cast<std::size_t>(orbit.dual)]);
      if (lhs < (b != orbit.phi[static_cast<std::size_t>(a)])) violated = true;
    }
    if (violated) ++report.violations;
    const double slack = r.augmented_risk - (1.0 - r.consistency) / 2.0;
    if (!report.tightest_slack || slack < *report.tightest_slack) {
      report.tightest_slack = slack;
      std::ostringstream out;
      out << format_classifier(f) << " R=" << r.risk << " R_dual=" << r.dual_risk
          << " C=" << r.consistency;
      report.tightest_case = out.str();
    }
  });
  return report;
}

HypothesisCount count_feasible_hypotheses(const FiniteTask& task, std::int64_t budget) {
  validate(task);
  const int n = task.num_inputs();
  const int c = task.num_answers;
  HypothesisCount out;
  out.vc_bound = n - task.orbit_inputs() / 2;
  out.bound = power(c, out.vc_bound);
  std::vector<Classifier> members;
  for_each_classifier(n, c, budget, [&](const Classifier& f) {
    ++out.total;
    if (!feasible(f, task)) return;
    ++out.feasible;
    if (c == 2) members.push_back(f);
  });
  out.equality = out.feasible == out.bound;
  if (c == 2) {
    // A subset is shattered when the class realises all 2^|S| labelings on it.
    int best = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      const int size = std::popcount(mask);
      if (size <= best) continue;
      std::vector<bool> seen(std::size_t{1} << size, false);
      std::size_t distinct = 0;
      for (const auto& f : members) {
        std::size_t pattern = 0;
        int bit = 0;
        for (int x = 0; x < n; ++x) {
          if (mask & (1u << x)) pattern |= static_cast<std::size_t>(f[static_cast<std::size_t>(x)]) << bit++;
        }
        if (!seen[pattern]) {
          seen[pattern] = true;
          ++distinct;
        }
      }
      if (distinct == seen.size()) best = size;
    }
    out.vc_dimension = best;
  }
  return out;
}

double potential(const std::vector<double>& consistencies, double threshold) {
  double phi = 0.0;
  for (double c : consistencies) phi += std::max(0.0, threshold - c);
  return phi;
}

PotentialTrace simulate_potential(const PotentialConfig& config) {
  const int m = config.num_ops;
  const int k = config.max_active;
  if (m < 1 || k < 1 || k > m) throw InvalidArgument("simulate_potential needs 1 <= K <= M");
  if (!(config.gain >= 0.0) || !(config.decay >= 0.0)) {
    throw InvalidArgument("simulate_potential needs non-negative gain and decay");
  }
  if (!(config.threshold > 0.0 && config.threshold <= 1.0)) {
    throw InvalidArgument("simulate_potential needs threshold in (0, 1]");
  }
  if (config.steps < 0) throw InvalidArgument("simulate_potential needs steps >= 0");
  std::vector<double> c = config.initial;
  if (c.empty()) c.assign(static_cast<std::size_t>(m), 0.0);
  if (static_cast<int>(c.size()) != m) throw InvalidArgument("initial consistencies must have M entries");

  PotentialTrace trace;
  const double rate = k * config.gain - (m - k) * config.decay;
  trace.condition_met = rate > 0.0;
  trace.predicted_horizon =
      trace.condition_met ? m * config.threshold / rate : std::numeric_limits<double>::infinity();
  trace.potential.push_back(potential(c, config.threshold));
  if (trace.potential.back() == 0.0) trace.zero_step = 0;

  std::vector<int> order(static_cast<std::size_t>(m));
  for (int t = 1; t <= config.steps; ++t) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return c[static_cast<std::size_t>(a)] < c[static_cast<std::size_t>(b)];
    });
    bool pre_mastery = true;
    for (int rank = 0; rank < m; ++rank) {
      double& value = c[static_cast<std::size_t>(order[static_cast<std::size_t>(rank)])];
      if (rank < k) {
        value = std::min(1.0, value + config.gain);
        pre_mastery &= value <= config.threshold;
      } else {
        value = std::max(0.0, value - config.decay);
      }
    }
    const double before = trace.potential.back();
    trace.potential.push_back(potential(c, config.threshold));
    if (pre_mastery) {
      const double decrement = before - trace.potential.back();
      ++trace.pre_mastery_steps;
      if (!trace.min_pre_mastery_decrement || decrement < *trace.min_pre_mastery_decrement) {
        trace.min_pre_mastery_decrement = decrement;
      }
    }
    if (!trace.zero_step && trace.potential.back() == 0.0) trace.zero_step = t;
  }
  return trace;
}

}  // namespace dualcons
