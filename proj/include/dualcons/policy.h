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

// A small differentiable categorical policy over the options of a question,
// with a learnable Bernoulli head for answer formatting.
//
// Option k receives the score
//
//   s_k = w . f_k + sum_h v_h tanh(U_h . f_k + c_h)
//
// where the hidden term is present only when hidden_units > 0. The answer
// distribution is softmax(s); the completion is formatted with probability
// sigmoid(b).

#ifndef DUALCONS_POLICY_H_
#define DUALCONS_POLICY_H_

#include <span>
#include <vector>

#include "dualcons/features.h"
#include "dualcons/rng.h"
#include "dualcons/scene.h"

namespace dualcons {

// Flat parameter vector. Layout: w[D] | b | U[H*D] | c[H] | v[H].
class PolicyParams {
 public:
  PolicyParams() : PolicyParams(0) {}
  explicit PolicyParams(int hidden_units);

  static std::size_t size_for(int hidden_units);

  int hidden_units() const { return hidden_units_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::span<double> weights() { return {values_.data(), kFeatureDim}; }
  std::span<const double> weights() const { return {values_.data(), kFeatureDim}; }
  double& format_logit() { return values_[kFeatureDim]; }
  double format_logit() const { return values_[kFeatureDim]; }

  // Hidden-layer blocks; empty when hidden_units == 0.
  std::span<double> hidden_weights();
  std::span<const double> hidden_weights() const;
  std::span<double> hidden_bias();
  std::span<const double> hidden_bias() const;
  std::span<double> hidden_output();
  std::span<const double> hidden_output() const;

  bool all_finite() const;

  bool operator==(const PolicyParams&) const = default;

 private:
  int hidden_units_ = 0;
  std::vector<double> values_;
};

// Gradient with the same layout as PolicyParams::values().
using ParamVector = std::vector<double>;

struct Completion {
  AnswerIndex answer;
  bool formatted = false;
  // log p(answer) + log p(formatted) under the generating parameters.
  double log_prob = 0.0;

  bool operator==(const Completion&) const = default;
};

std::vector<double> option_scores(const PolicyParams& params, const OptionFeatures& features);

// Softmax over option scores. Throws NumericalError on non-finite scores.
std::vector<double> answer_distribution(const PolicyParams& params, const OptionFeatures& features);
std::vector<double> answer_distribution(const PolicyParams& params, const Scene& scene,
                                        const Query& query);

double format_probability(const PolicyParams& params);

std::vector<Completion> sample_completions(const PolicyParams& params,
                                           const OptionFeatures& features, int n, Rng& rng);

// argmax of the answer distribution; ties go to the lowest index.
AnswerIndex greedy_answer(const PolicyParams& params, const OptionFeatures& features);
AnswerIndex greedy_answer(const PolicyParams& params, const Scene& scene, const Query& query);

double log_prob(const PolicyParams& params, const OptionFeatures& features,
                const Completion& completion);

// Gradient of log_prob with respect to every parameter.
ParamVector grad_log_prob(const PolicyParams& params, const OptionFeatures& features,
                          const Completion& completion);

struct KlResult {
  double value = 0.0;
  ParamVector gradient;
};

// Exact KL(pi_params || pi_reference) over the options plus the Bernoulli KL
// of the format head, with its gradient in `params`.
KlResult kl_to_reference(const PolicyParams& params, const PolicyParams& reference,
                         const OptionFeatures& features);

// Small random weights plus the "left/top visual field" and "left/above"
// shortcut, scaled by bias_strength.
PolicyParams biased_init(Rng& rng, double bias_strength, int hidden_units = 0);

// Weights only on the evidence features; its greedy answer matches the
// ground-truth oracle on every tie-free question.
PolicyParams oracle_params(double strength = 20.0, int hidden_units = 0);

}  // namespace dualcons

#endif  // DUALCONS_POLICY_H_
