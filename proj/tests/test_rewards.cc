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

#include <cmath>

#include "dualcons/errors.h"
#include "dualcons/rewards.h"
#include "test_support.h"

namespace dualcons {
namespace {

using testing::numeric_gradient;
using testing::random_params;
using testing::relative_error;

Completion answer(int k, bool formatted = true) { return Completion{AnswerIndex{k}, formatted, 0.0}; }

Query four_counts() {
  Query q;
  q.kind = QueryKind::kCountShape;
  q.subject = {Shape::kStar, std::nullopt};
  q.options = {OptionContent::count(0), OptionContent::count(1), OptionContent::count(2), OptionContent::count(3)};
  return q;
}

TEST(Rewards, TotalIsSumOfParts) {
  const auto r = total_reward(answer(1, true), AnswerIndex{1}, 0.25);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.format, 0.5);
  EXPECT_EQ(r.consistency, 0.25);
  EXPECT_EQ(r.total, 1.75);
  const auto wrong = total_reward(answer(0, false), AnswerIndex{1}, 0.0);
  EXPECT_EQ(wrong.total, 0.0);
}

TEST(Rewards, ConsistencyCountsAgreeingDuals) {
  const auto op = builtin("option_reverse");
  const Query q = four_counts();
  const Query dual = op.apply_to_query(q);
  // Primary answers 1; under reversal the consistent dual answer is 2.
  const std::vector<Completion> duals = {answer(2), answer(2), answer(1), answer(0)};
  EXPECT_DOUBLE_EQ(consistency_reward(op, answer(1), duals, q, dual, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(consistency_reward(op, answer(1), duals, q, dual, 0.3), 0.15);
  EXPECT_EQ(consistency_reward(op, answer(1), duals, q, dual, 0.0), 0.0);
  const std::vector<Completion> all = {answer(2), answer(2)};
  EXPECT_DOUBLE_EQ(consistency_reward(op, answer(1), all, q, dual, 0.7), 0.7);
  EXPECT_THROW(consistency_reward(op, answer(1), {}, q, dual, 1.0), InvalidArgument);
  EXPECT_THROW(consistency_reward(op, answer(1), duals, q, dual, -0.1), InvalidArgument);
}

TEST(Rewards, ConsistencyIsBoundedByLambda) {
  Rng rng(1);
  const auto op = builtin("option_cycle");
  const Query q = four_counts();
  const Query dual = op.apply_to_query(q);
  for (int trial = 0; trial < 500; ++trial) {
    const double lambda = rng.uniform01() * 2.0;
    std::vector<Completion> duals;
    const int n = 1 + static_cast<int>(rng.index(8));
    for (int i = 0; i < n; ++i) duals.push_back(answer(static_cast<int>(rng.index(4))));
    const double r = consistency_reward(op, answer(static_cast<int>(rng.index(4))), duals, q, dual, lambda);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, lambda);
  }
}

TEST(Rewards, AdvantagesUsePopulationStd) {
  const std::vector<double> rewards = {1.5, 0.5, 1.5, 0.0};
  const auto g = group_advantages(rewards);
  EXPECT_DOUBLE_EQ(g.mean, 0.875);
  const double var = (0.625 * 0.625 * 2 + 0.375 * 0.375 + 0.875 * 0.875) / 4.0;
  EXPECT_DOUBLE_EQ(g.stddev, std::sqrt(var));
  EXPECT_FALSE(g.degenerate);
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    EXPECT_DOUBLE_EQ(g.advantages[i], (rewards[i] - 0.875) / std::sqrt(var));
  }
  EXPECT_THROW(group_advantages(std::vector<double>{1.0}), InvalidArgument);
}

TEST(Rewards, AdvantagePropertiesOnRandomGroups) {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> rewards(2 + rng.index(15));
    for (double& r : rewards) r = static_cast<double>(rng.index(4)) * 0.5;
    const auto g = group_advantages(rewards);
    double sum = 0.0;
    double squares = 0.0;
    for (double a : g.advantages) {
      sum += a;
      squares += a * a;
    }
    if (g.degenerate) {
      EXPECT_EQ(squares, 0.0);
      continue;
    }
    EXPECT_NEAR(sum, 0.0, 1e-9);
    EXPECT_NEAR(squares / static_cast<double>(rewards.size()), 1.0, 1e-9);
    for (std::size_t i = 0; i + 1 < rewards.size(); ++i) {
      if (rewards[i] > rewards[i + 1]) {
        EXPECT_GT(g.advantages[i], g.advantages[i + 1]);
      }
    }
  }
}

TEST(Rewards, UniformGroupIsDegenerate) {
  const auto g = group_advantages(std::vector<double>{1.5, 1.5, 1.5, 1.5});
  EXPECT_TRUE(g.degenerate);
  EXPECT_EQ(g.stddev, 0.0);
  for (double a : g.advantages) EXPECT_EQ(a, 0.0);
}

TEST(Rewards, ObjectiveGradientMatchesFiniteDifferences) {
  Rng rng(3);
  for (int hidden : {0, 3}) {
    for (int trial = 0; trial < 8; ++trial) {
      const auto params = random_params(rng, hidden, 0.3);
      const auto reference = random_params(rng, hidden, 0.3);
      const auto e = sample_example(rng, EnvConfig{});
      const auto features = extract_features(e.scene, e.query);
      const auto completions = sample_completions(params, features, 8, rng);
      std::vector<double> rewards;
      for (const auto& c : completions) rewards.push_back(total_reward(c, e.answer, 0.0).total);
      auto advantages = group_advantages(rewards).advantages;
      advantages[0] += 0.5;  // keep the sum term non-trivial even for degenerate groups
      const double beta = 0.04 * (1 + trial);
      const auto analytic = grpo_gradient(params, reference, features, completions, advantages, beta);
      const auto numeric = numeric_gradient(params, [&](const PolicyParams& p) {
        return grpo_objective(p, reference, features, completions, advantages, beta);
      });
      EXPECT_LT(relative_error(analytic, numeric), 1e-6);
    }
  }
}

TEST(Rewards, UpdateAscendsTheObjective) {
  Rng rng(4);
  const auto params = random_params(rng, 0, 0.3);
  const auto e = sample_example(rng, EnvConfig{});
  const auto features = extract_features(e.scene, e.query);
  const auto completions = sample_completions(params, features, 8, rng);
  std::vector<double> advantages = {1, -1, 0.5, -0.5, 1, -1, 0, 0};
  const double before = grpo_objective(params, params, features, completions, advantages, 0.04);
  const auto next = grpo_update(params, params, features, completions, advantages, 0.04, 1e-3);
  EXPECT_GT(grpo_objective(next, params, features, completions, advantages, 0.04), before);

  // Zero advantages and beta = 0: nothing moves.
  const std::vector<double> zeros(8, 0.0);
  EXPECT_EQ(grpo_update(params, params, features, completions, zeros, 0.0, 0.3), params);
}

TEST(Rewards, UpdateRejectsBadInputs) {
  Rng rng(5);
  const auto params = random_params(rng, 0, 0.3);
  const auto e = sample_example(rng, EnvConfig{});
  const auto features = extract_features(e.scene, e.query);
  const auto completions = sample_completions(params, features, 4, rng);
  const std::vector<double> advantages = {1, -1, 1, -1};
  EXPECT_THROW(grpo_update(params, params, features, completions, advantages, -1.0, 0.1), InvalidArgument);
  EXPECT_THROW(grpo_update(params, params, features, completions, advantages, 0.0, 0.0), InvalidArgument);
  const std::vector<double> short_adv = {1, -1};
  EXPECT_THROW(grpo_update(params, params, features, completions, short_adv, 0.0, 0.1), InvalidArgument);
  const std::vector<double> huge = {1e10, -1e10, 1e10, -1e10};
  EXPECT_THROW(grpo_update(params, params, features, completions, huge, 0.0, 1e308), NumericalError);
}

}  // namespace
}  // namespace dualcons
