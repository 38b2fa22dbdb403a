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

// Three-part reward, consistency reward, group-relative advantages and the
// KL-regularised group policy-gradient step.

#ifndef DUALCONS_REWARDS_H_
#define DUALCONS_REWARDS_H_

#include <span>
#include <vector>

#include "dualcons/duality.h"
#include "dualcons/policy.h"

namespace dualcons {

// Format reward granted to a formatted completion.
inline constexpr double kFormatReward = 0.5;

struct RewardBreakdown {
  double accuracy = 0.0;     // {0, 1}
  double format = 0.0;       // {0, kFormatReward}
  double consistency = 0.0;  // [0, lambda]
  double total = 0.0;        // accuracy + format + consistency
};

struct AdvantageGroup {
  std::vector<double> rewards;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  std::vector<double> advantages;
  bool degenerate = false;  // stddev == 0; advantages are all zero
};

double accuracy_reward(const Completion& completion, AnswerIndex truth);

// lambda times the fraction of dual completions whose answer equals the
// primary answer pushed through the op's answer mapping.
double consistency_reward(const DualityOp& op, const Completion& primary,
                          std::span<const Completion> duals, const Query& original_query,
                          const Query& dual_query, double lambda);

RewardBreakdown total_reward(const Completion& completion, AnswerIndex truth, double consistency);

// Throws InvalidArgument when fewer than two rewards are given.
AdvantageGroup group_advantages(std::span<const double> rewards);

// (1/G) sum_i A_i log pi(o_i) - beta KL(pi || pi_ref) on one question.
double grpo_objective(const PolicyParams& params, const PolicyParams& reference,
                      const OptionFeatures& features, std::span<const Completion> completions,
                      std::span<const double> advantages, double beta);

// Gradient of grpo_objective.
ParamVector grpo_gradient(const PolicyParams& params, const PolicyParams& reference,
                          const OptionFeatures& features, std::span<const Completion> completions,
                          std::span<const double> advantages, double beta);

// One ascent step theta + lr * grad. The reference is never touched. Throws
// NumericalError without producing parameters if the gradient or the result
// is not finite.
PolicyParams grpo_update(const PolicyParams& params, const PolicyParams& reference,
                         const OptionFeatures& features, std::span<const Completion> completions,
                         std::span<const double> advantages, double beta, double lr);

}  // namespace dualcons

#endif  // DUALCONS_REWARDS_H_
