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

#include "dualcons/rewards.h"

#include <cmath>

#include "dualcons/errors.h"

namespace dualcons {

double accuracy_reward(const Completion& completion, AnswerIndex truth) {
  return completion.answer == truth ? 1.0 : 0.0;
}

double consistency_reward(const DualityOp& op, const Completion& primary,
                          std::span<const Completion> duals, const Query& original_query,
                          const Query& dual_query, double lambda) {
  if (duals.empty()) throw InvalidArgument("consistency_reward: no dual completions");
  if (!(lambda >= 0.0)) throw InvalidArgument("consistency_reward: lambda must be >= 0");
  const AnswerIndex mapped = op.map_answer(original_query, dual_query, primary.answer);
  int agree = 0;
  for (const auto& dual : duals) agree += dual.answer == mapped ? 1 : 0;
  return lambda * static_cast<double>(agree) / static_cast<double>(duals.size());
}

RewardBreakdown total_reward(const Completion& completion, AnswerIndex truth, double consistency) {
  RewardBreakdown r;
  r.accuracy = accuracy_reward(completion, truth);
  r.format = completion.formatted ? kFormatReward : 0.0;
  r.consistency = consistency;
  r.total = r.accuracy + r.format + r.consistency;
  return r;
}

AdvantageGroup group_advantages(std::span<const double> rewards) {
  if (rewards.size() < 2) throw InvalidArgument("group_advantages: need at least 2 rewards");
  AdvantageGroup group;
  group.rewards.assign(rewards.begin(), rewards.end());
  const double n = static_cast<double>(rewards.size());
  double sum = 0.0;
  for (double r : rewards) sum += r;
  group.mean = sum / n;
  double squares = 0.0;
  for (double r : rewards) squares += (r - group.mean) * (r - group.mean);
  group.stddev = std::sqrt(squares / n);
  group.advantages.assign(rewards.size(), 0.0);
  // Tiny spreads come from rounding in the sum, not from distinct rewards.
  group.degenerate = !(group.stddev > 1e-12);
  if (!group.degenerate) {
    for (std::size_t i = 0; i < rewards.size(); ++i) {
      group.advantages[i] = (rewards[i] - group.mean) / group.stddev;
    }
  }
  return group;
}

double grpo_objective(const PolicyParams& params, const PolicyParams& reference,
                      const OptionFeatures& features, std::span<const Completion> completions,
                      std::span<const double> advantages, double beta) {
  if (completions.size() != advantages.size() || completions.empty()) {
    throw InvalidArgument("grpo_objective: completions and advantages must align");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < completions.size(); ++i) {
    if (advantages[i] != 0.0) total += advantages[i] * log_prob(params, features, completions[i]);
  }
  total /= static_cast<double>(completions.size());
  return total - beta * kl_to_reference(params, reference, features).value;
}

ParamVector grpo_gradient(const PolicyParams& params, const PolicyParams& reference,
                          const OptionFeatures& features, std::span<const Completion> completions,
                          std::span<const double> advantages, double beta) {
  if (completions.size() != advantages.size() || completions.empty()) {
    throw InvalidArgument("grpo_gradient: completions and advantages must align");
  }
  ParamVector grad(params.size(), 0.0);
  const double scale = 1.0 / static_cast<double>(completions.size());
  for (std::size_t i = 0; i < completions.size(); ++i) {
    if (advantages[i] == 0.0) continue;
    const auto g = grad_log_prob(params, features, completions[i]);
    for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += scale * advantages[i] * g[j];
  }
  if (beta != 0.0) {
    const auto kl = kl_to_reference(params, reference, features);
    for (std::size_t j = 0; j < grad.size(); ++j) grad[j] -= beta * kl.gradient[j];
  }
  return grad;
}

PolicyParams grpo_update(const PolicyParams& params, const PolicyParams& reference,
                         const OptionFeatures& features, std::span<const Completion> completions,
                         std::span<const double> advantages, double beta, double lr) {
  if (!(beta >= 0.0)) throw InvalidArgument("grpo_update: beta must be >= 0");
  if (!(lr > 0.0)) throw InvalidArgument("grpo_update: lr must be > 0");
  const auto grad = grpo_gradient(params, reference, features, completions, advantages, beta);
  PolicyParams next = params;
  auto values = next.values();
  for (std::size_t j = 0; j < grad.size(); ++j) {
    if (!std::isfinite(grad[j])) throw NumericalError("non-finite gradient in grpo_update");
    values[j] += lr * grad[j];
  }
  if (!next.all_finite()) throw NumericalError("non-finite parameters after grpo_update");
  return next;
}

}  // namespace dualcons
