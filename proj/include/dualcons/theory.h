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

// Brute-force checks of the risk bounds, the hypothesis-class reduction and
// the scheduler potential argument on small finite problems.

#ifndef DUALCONS_THEORY_H_
#define DUALCONS_THEORY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualcons/errors.h"
#include "dualcons/rng.h"

namespace dualcons {

// A duality op restricted to one pair of inputs: dual = T(original), and
// answers map through the permutation phi.
struct Orbit {
  int original = 0;
  int dual = 0;
  std::vector<int> phi;
};

// Inputs are 0..N-1; orbits must be disjoint and their ground truth must
// commute with the op: truth[dual] == phi[truth[original]].
struct FiniteTask {
  int num_answers = 2;  // C
  std::vector<int> truth;
  std::vector<Orbit> orbits;

  int num_inputs() const { return static_cast<int>(truth.size()); }
  // Inputs covered by orbits (N_T).
  int orbit_inputs() const { return 2 * static_cast<int>(orbits.size()); }
};

// Throws InvalidArgument on malformed tasks: bad arity, overlapping orbits,
// non-bijective phi, or ground truth that breaks the axiom.
void validate(const FiniteTask& task);

// Random valid task with 2 <= N <= max_inputs and 2 <= C <= max_answers.
FiniteTask random_finite_task(Rng& rng, int max_inputs = 8, int max_answers = 3);

using Classifier = std::vector<int>;

// Frequencies over the orbits, uniform over originals.
struct RiskReport {
  int orbits = 0;
  int wrong = 0;       // originals answered wrongly
  int wrong_dual = 0;  // duals answered wrongly
  int consistent = 0;  // f(T x) == phi(f(x))
  double risk = 0.0;
  double dual_risk = 0.0;
  double augmented_risk = 0.0;  // (risk + dual_risk) / 2
  double consistency = 0.0;
};

// Throws InvalidArgument when the classifier does not cover every input or
// the task has no orbits.
RiskReport risks(const Classifier& classifier, const FiniteTask& task);

// Summary shared by the verification suites.
struct VerificationReport {
  std::string claim;
  std::int64_t instances = 0;
  std::int64_t violations = 0;
  // Smallest slack of the main inequality and the instance where it occurred.
  std::optional<double> tightest_slack;
  std::string tightest_case;

  bool passed() const { return violations == 0; }
};

inline constexpr std::int64_t kDefaultEnumerationBudget = 1'000'000;

// Calls fn on every classifier in C^N; throws InvalidArgument past budget.
template <typename F>
void for_each_classifier(int num_inputs, int num_answers, std::int64_t budget, F&& fn);

// Enumerates every classifier and checks
//   (i)  augmented risk >= (1 - consistency) / 2,
//   (ii) zero risk implies dual risk >= 1 - consistency,
//   and per orbit [f(x) wrong] + [f(Tx) wrong] >= [f inconsistent on x].
// Checks run on integer counts, so they are exact.
VerificationReport verify_theorem1(const FiniteTask& task,
                                   std::int64_t budget = kDefaultEnumerationBudget);

struct HypothesisCount {
  std::int64_t total = 0;     // C^N
  std::int64_t feasible = 0;  // classifiers satisfying every orbit constraint
  std::int64_t bound = 0;     // C^(N - N_T / 2)
  bool equality = false;
  // Exhaustive shattering; only for C = 2.
  std::optional<int> vc_dimension;
  int vc_bound = 0;  // N - N_T / 2
};

HypothesisCount count_feasible_hypotheses(const FiniteTask& task,
                                          std::int64_t budget = kDefaultEnumerationBudget);

struct PotentialConfig {
  int num_ops = 4;       // M
  int max_active = 3;    // K
  double gain = 0.02;    // per-step gain of an active op
  double decay = 0.004;  // per-step loss of an inactive op
  double threshold = 0.75;
  int steps = 200;
  // Starting consistencies; empty means all zero.
  std::vector<double> initial;
};

struct PotentialTrace {
  std::vector<double> potential;  // potential[t] after t steps
  double predicted_horizon = 0.0;  // M tau / (K gain - (M - K) decay); inf if unmet
  bool condition_met = false;
  std::optional<int> zero_step;  // first t with potential[t] == 0
  // Smallest one-step decrease among steps where every active op stayed at
  // or below the threshold.
  std::optional<double> min_pre_mastery_decrement;
  int pre_mastery_steps = 0;
};

// Idealised dynamics: each step the K lowest-consistency ops (ties by index)
// gain `gain`, the rest lose `decay`, clipped to [0, 1].
PotentialTrace simulate_potential(const PotentialConfig& config);

// Sum over ops of max(0, tau - C).
double potential(const std::vector<double>& consistencies, double threshold);

template <typename F>
void for_each_classifier(int num_inputs, int num_answers, std::int64_t budget, F&& fn) {
  std::int64_t total = 1;
  for (int i = 0; i < num_inputs; ++i) {
    total *= num_answers;
    if (total > budget) throw InvalidArgument("classifier enumeration exceeds the budget");
  }
  Classifier f(static_cast<std::size_t>(num_inputs), 0);
  for (std::int64_t n = 0; n < total; ++n) {
    fn(static_cast<const Classifier&>(f));
    for (auto& digit : f) {
      if (++digit < num_answers) break;
      digit = 0;
    }
  }
}

}  // namespace dualcons

#endif  // DUALCONS_THEORY_H_
