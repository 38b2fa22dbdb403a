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
#include <numeric>

#include "dualcons/errors.h"
#include "dualcons/policy.h"
#include "test_support.h"

namespace dualcons {
namespace {

using testing::numeric_gradient;
using testing::random_params;
using testing::relative_error;
using testing::sample_examples;
using testing::single_kind_env;

// Direct sum over the categorical and Bernoulli heads, no shared helpers.
double reference_kl(const PolicyParams& p, const PolicyParams& q, const OptionFeatures& f) {
  const auto dp = answer_distribution(p, f);
  const auto dq = answer_distribution(q, f);
  double kl = 0.0;
  for (std::size_t k = 0; k < dp.size(); ++k) kl += dp[k] * std::log(dp[k] / dq[k]);
  const double a = format_probability(p);
  const double b = format_probability(q);
  return kl + a * std::log(a / b) + (1 - a) * std::log((1 - a) / (1 - b));
}

TEST(Policy, ParameterLayout) {
  EXPECT_EQ(PolicyParams(0).size(), static_cast<std::size_t>(kFeatureDim + 1));
  EXPECT_EQ(PolicyParams::size_for(3), PolicyParams(3).size());
  EXPECT_EQ(PolicyParams(3).size(), static_cast<std::size_t>(kFeatureDim + 1 + 3 * kFeatureDim + 3 + 3));
  EXPECT_TRUE(PolicyParams(0).hidden_weights().empty());
  EXPECT_THROW(PolicyParams(-1), InvalidArgument);
  PolicyParams p(2);
  p.values()[0] = NAN;
  EXPECT_FALSE(p.all_finite());
}

TEST(Policy, DistributionsAreNormalised) {
  Rng rng(1);
  const auto params = random_params(rng, 3, 1.0);
  for (const auto& e : sample_examples(rng, EnvConfig{}, 300)) {
    const auto dist = answer_distribution(params, e.scene, e.query);
    ASSERT_EQ(static_cast<int>(dist.size()), e.query.num_options());
    EXPECT_NEAR(std::accumulate(dist.begin(), dist.end(), 0.0), 1.0, 1e-12);
    for (double x : dist) EXPECT_GT(x, 0.0);
  }
  const double pf = format_probability(params);
  EXPECT_GT(pf, 0.0);
  EXPECT_LT(pf, 1.0);
}

TEST(Policy, SamplingIsDeterministicAndMatchesDistribution) {
  Rng setup(2);
  const auto params = random_params(setup, 0, 0.5);
  const auto e = sample_example(setup, single_kind_env(QueryKind::kCountShape));
  const auto features = extract_features(e.scene, e.query);
  Rng a(7);
  Rng b(7);
  EXPECT_EQ(sample_completions(params, features, 50, a), sample_completions(params, features, 50, b));

  Rng rng(8);
  const int n = 40000;
  const auto samples = sample_completions(params, features, n, rng);
  const auto dist = answer_distribution(params, features);
  std::vector<int> counts(dist.size(), 0);
  int formatted = 0;
  for (const auto& c : samples) {
    ++counts[static_cast<std::size_t>(c.answer.index)];
    formatted += c.formatted;
    EXPECT_NEAR(c.log_prob, log_prob(params, features, c), 1e-12);
  }
  for (std::size_t k = 0; k < dist.size(); ++k) {
    EXPECT_NEAR(counts[k] / static_cast<double>(n), dist[k], 0.015);
  }
  EXPECT_NEAR(formatted / static_cast<double>(n), format_probability(params), 0.015);
  EXPECT_THROW(sample_completions(params, features, 0, rng), InvalidArgument);
}

TEST(Policy, GreedyBreaksTiesTowardLowestIndex) {
  Rng rng(3);
  const auto e = sample_example(rng, EnvConfig{});
  const PolicyParams zero(0);
  EXPECT_EQ(greedy_answer(zero, e.scene, e.query).index, 0);
}

TEST(Policy, LogProbGradientMatchesFiniteDifferences) {
  Rng rng(4);
  for (int hidden : {0, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto params = random_params(rng, hidden, 0.3);
      const auto e = sample_example(rng, EnvConfig{});
      const auto features = extract_features(e.scene, e.query);
      Completion c;
      c.answer = AnswerIndex{static_cast<int>(rng.index(static_cast<std::size_t>(e.query.num_options())))};
      c.formatted = rng.bernoulli(0.5);
      const auto analytic = grad_log_prob(params, features, c);
      const auto numeric = numeric_gradient(params, [&](const PolicyParams& p) { return log_prob(p, features, c); });
      EXPECT_LT(relative_error(analytic, numeric), 1e-6) << "hidden=" << hidden;
    }
  }
}

TEST(Policy, KlMatchesDirectSumAndFiniteDifferences) {
  Rng rng(5);
  for (int hidden : {0, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto params = random_params(rng, hidden, 0.3);
      const auto reference = random_params(rng, hidden, 0.3);
      const auto e = sample_example(rng, EnvConfig{});
      const auto features = extract_features(e.scene, e.query);
      const auto kl = kl_to_reference(params, reference, features);
      EXPECT_NEAR(kl.value, reference_kl(params, reference, features), 1e-10);
      EXPECT_GE(kl.value, 0.0);
      const auto numeric = numeric_gradient(
          params, [&](const PolicyParams& p) { return reference_kl(p, reference, features); });
      EXPECT_LT(relative_error(kl.gradient, numeric), 1e-6) << "hidden=" << hidden;
    }
  }
}

TEST(Policy, KlVanishesAtReference) {
  Rng rng(6);
  const auto params = random_params(rng, 3, 1.0);
  for (const auto& e : sample_examples(rng, EnvConfig{}, 50)) {
    const auto kl = kl_to_reference(params, params, extract_features(e.scene, e.query));
    EXPECT_EQ(kl.value, 0.0);
    for (double g : kl.gradient) EXPECT_NEAR(g, 0.0, 1e-14);
  }
}

TEST(Policy, InvalidAnswerIndexIsRejected) {
  Rng rng(9);
  const auto e = sample_example(rng, EnvConfig{});
  const auto features = extract_features(e.scene, e.query);
  Completion c;
  c.answer = AnswerIndex{e.query.num_options()};
  EXPECT_THROW(log_prob(PolicyParams(0), features, c), InvalidArgument);
  c.answer = AnswerIndex{-1};
  EXPECT_THROW(grad_log_prob(PolicyParams(0), features, c), InvalidArgument);
}

TEST(Policy, NonFiniteScoresRaise) {
  Rng rng(10);
  const auto e = sample_example(rng, EnvConfig{});
  PolicyParams p(0);
  for (double& w : p.weights()) w = INFINITY;
  EXPECT_THROW(answer_distribution(p, e.scene, e.query), NumericalError);
}

double accuracy(const PolicyParams& params, std::span<const Example> examples) {
  int hits = 0;
  for (const auto& e : examples) hits += greedy_answer(params, e.scene, e.query) == e.answer;
  return hits / static_cast<double>(examples.size());
}

TEST(Policy, OracleParamsAnswerEveryKind) {
  Rng rng(11);
  for (int hidden : {0, 3}) {
    const auto oracle = oracle_params(20.0, hidden);
    for (int k = 0; k < kNumQueryKinds; ++k) {
      EnvConfig env = single_kind_env(static_cast<QueryKind>(k));
      env.negation_prob = 0.3;
      const auto examples = sample_examples(rng, env, 500);
      EXPECT_EQ(accuracy(oracle, examples), 1.0) << to_string(static_cast<QueryKind>(k));
    }
  }
}

TEST(Policy, BiasedInitPrefersLeftAndAbove) {
  Rng rng(12);
  const auto params = biased_init(rng, 3.0);
  EnvConfig unbiased = single_kind_env(QueryKind::kRelPosH);
  unbiased.horizontal_skew = 0.5;
  unbiased.negation_prob = 0.0;
  int left = 0;
  const auto examples = sample_examples(rng, unbiased, 1000);
  for (const auto& e : examples) {
    const auto answer = greedy_answer(params, e.scene, e.query);
    left += e.query.options[static_cast<std::size_t>(answer.index)] == OptionContent::direction(Direction::kLeft);
  }
  EXPECT_EQ(left, 1000);
  // On the skewed training distribution the bias looks like competence.
  const auto skewed = sample_examples(rng, single_kind_env(QueryKind::kRelPosH), 2000);
  EXPECT_GT(accuracy(params, skewed), 0.75);
  EXPECT_THROW(biased_init(rng, -1.0), InvalidArgument);
}

}  // namespace
}  // namespace dualcons
