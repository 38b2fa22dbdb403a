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

#include "dualcons/policy.h"

#include <algorithm>
#include <cmath>

#include "dualcons/errors.h"

namespace dualcons {
namespace {

constexpr std::size_t kD = kFeatureDim;

double dot(std::span<const double> a, const FeatureRow& row) {
  double s = 0.0;
  for (std::size_t i = 0; i < kD; ++i) s += a[i] * row[i];
  return s;
}

// log(sigmoid(x)) without overflow.
double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double score(const PolicyParams& params, const FeatureRow& row) {
  double s = dot(params.weights(), row);
  const int hidden = params.hidden_units();
  if (hidden > 0) {
    const auto u = params.hidden_weights();
    const auto c = params.hidden_bias();
    const auto v = params.hidden_output();
    for (int h = 0; h < hidden; ++h) {
      const double z = dot(u.subspan(static_cast<std::size_t>(h) * kD, kD), row) + c[static_cast<std::size_t>(h)];
      s += v[static_cast<std::size_t>(h)] * std::tanh(z);
    }
  }
  return s;
}

// grad += coeff * d(score)/d(theta) for one option row.
void add_score_gradient(const PolicyParams& params, const FeatureRow& row, double coeff,
                        ParamVector& grad) {
  if (coeff == 0.0) return;
  for (std::size_t i = 0; i < kD; ++i) grad[i] += coeff * row[i];
  const int hidden = params.hidden_units();
  if (hidden == 0) return;
  const auto u = params.hidden_weights();
  const auto c = params.hidden_bias();
  const auto v = params.hidden_output();
  const std::size_t u_offset = kD + 1;
  const std::size_t c_offset = u_offset + static_cast<std::size_t>(hidden) * kD;
  const std::size_t v_offset = c_offset + static_cast<std::size_t>(hidden);
  for (int h = 0; h < hidden; ++h) {
    const auto hs = static_cast<std::size_t>(h);
    const double t = std::tanh(dot(u.subspan(hs * kD, kD), row) + c[hs]);
    const double back = coeff * v[hs] * (1.0 - t * t);
    for (std::size_t i = 0; i < kD; ++i) grad[u_offset + hs * kD + i] += back * row[i];
    grad[c_offset + hs] += back;
    grad[v_offset + hs] += coeff * t;
  }
}

std::vector<double> log_softmax(const std::vector<double>& scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double s : scores) total += std::exp(s - top);
  const double log_z = top + std::log(total);
  std::vector<double> out(scores.size());
  for (std::size_t k = 0; k < scores.size(); ++k) out[k] = scores[k] - log_z;
  return out;
}

void check_answer(const OptionFeatures& features, AnswerIndex answer) {
  if (answer.index < 0 || answer.index >= features.num_options()) {
    throw InvalidArgument("completion answer outside option bounds");
  }
}

}  // namespace

PolicyParams::PolicyParams(int hidden_units)
    : hidden_units_(hidden_units), values_(size_for(hidden_units), 0.0) {
  if (hidden_units < 0) throw InvalidArgument("hidden_units must be non-negative");
}

std::size_t PolicyParams::size_for(int hidden_units) {
  const auto h = static_cast<std::size_t>(std::max(hidden_units, 0));
  return kD + 1 + h * kD + 2 * h;
}

std::span<double> PolicyParams::hidden_weights() {
  return {values_.data() + kD + 1, static_cast<std::size_t>(hidden_units_) * kD};
}
std::span<const double> PolicyParams::hidden_weights() const {
  return {values_.data() + kD + 1, static_cast<std::size_t>(hidden_units_) * kD};
}
std::span<double> PolicyParams::hidden_bias() {
  return {values_.data() + kD + 1 + static_cast<std::size_t>(hidden_units_) * kD,
          static_cast<std::size_t>(hidden_units_)};
}
std::span<const double> PolicyParams::hidden_bias() const {
  return {values_.data() + kD + 1 + static_cast<std::size_t>(hidden_units_) * kD,
          static_cast<std::size_t>(hidden_units_)};
}
std::span<double> PolicyParams::hidden_output() {
  return {values_.data() + kD + 1 + static_cast<std::size_t>(hidden_units_) * (kD + 1),
          static_cast<std::size_t>(hidden_units_)};
}
std::span<const double> PolicyParams::hidden_output() const {
  return {values_.data() + kD + 1 + static_cast<std::size_t>(hidden_units_) * (kD + 1),
          static_cast<std::size_t>(hidden_units_)};
}

bool PolicyParams::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

std::vector<double> option_scores(const PolicyParams& params, const OptionFeatures& features) {
  std::vector<double> scores;
  scores.reserve(features.rows.size());
  for (const auto& row : features.rows) {
    const double s = score(params, row);
    if (!std::isfinite(s)) throw NumericalError("non-finite option score");
    scores.push_back(s);
  }
  return scores;
}

std::vector<double> answer_distribution(const PolicyParams& params, const OptionFeatures& features) {
  auto logp = log_softmax(option_scores(params, features));
  for (double& x : logp) x = std::exp(x);
  return logp;
}

std::vector<double> answer_distribution(const PolicyParams& params, const Scene& scene,
                                        const Query& query) {
  return answer_distribution(params, extract_features(scene, query));
}

double format_probability(const PolicyParams& params) { return sigmoid(params.format_logit()); }

std::vector<Completion> sample_completions(const PolicyParams& params,
                                           const OptionFeatures& features, int n, Rng& rng) {
  if (n < 1) throw InvalidArgument("sample_completions: n must be >= 1");
  const auto logp = log_softmax(option_scores(params, features));
  std::vector<double> probs(logp.size());
  for (std::size_t k = 0; k < logp.size(); ++k) probs[k] = std::exp(logp[k]);
  const double b = params.format_logit();
  const double p_format = sigmoid(b);
  std::vector<Completion> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Completion completion;
    const auto k = rng.categorical(probs);
    completion.answer = AnswerIndex{static_cast<int>(k)};
    completion.formatted = rng.bernoulli(p_format);
    completion.log_prob = logp[k] + (completion.formatted ? log_sigmoid(b) : log_sigmoid(-b));
    out.push_back(completion);
  }
  return out;
}

AnswerIndex greedy_answer(const PolicyParams& params, const OptionFeatures& features) {
  const auto scores = option_scores(params, features);
  // max_element returns the first maximum, which is the lowest-index tie rule.
  return AnswerIndex{static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin())};
}

AnswerIndex greedy_answer(const PolicyParams& params, const Scene& scene, const Query& query) {
  return greedy_answer(params, extract_features(scene, query));
}

double log_prob(const PolicyParams& params, const OptionFeatures& features,
                const Completion& completion) {
  check_answer(features, completion.answer);
  const auto logp = log_softmax(option_scores(params, features));
  const double b = params.format_logit();
  return logp[static_cast<std::size_t>(completion.answer.index)] +
         (completion.formatted ? log_sigmoid(b) : log_sigmoid(-b));
}

ParamVector grad_log_prob(const PolicyParams& params, const OptionFeatures& features,
                          const Completion& completion) {
  check_answer(features, completion.answer);
  const auto probs = answer_distribution(params, features);
  ParamVector grad(params.size(), 0.0);
  for (int k = 0; k < features.num_options(); ++k) {
    const double indicator = k == completion.answer.index ? 1.0 : 0.0;
    add_score_gradient(params, features.rows[static_cast<std::size_t>(k)],
                       indicator - probs[static_cast<std::size_t>(k)], grad);
  }
  grad[kD] = (completion.formatted ? 1.0 : 0.0) - format_probability(params);
  return grad;
}

KlResult kl_to_reference(const PolicyParams& params, const PolicyParams& reference,
                         const OptionFeatures& features) {
  const auto logp = log_softmax(option_scores(params, features));
  const auto logq = log_softmax(option_scores(reference, features));
  KlResult result;
  result.gradient.assign(params.size(), 0.0);
  std::vector<double> ratio(logp.size());
  double categorical = 0.0;
  for (std::size_t k = 0; k < logp.size(); ++k) {
    ratio[k] = logp[k] - logq[k];
    categorical += std::exp(logp[k]) * ratio[k];
  }
  for (std::size_t k = 0; k < logp.size(); ++k) {
    add_score_gradient(params, features.rows[k], std::exp(logp[k]) * (ratio[k] - categorical),
                       result.gradient);
  }
  const double b = params.format_logit();
  const double b_ref = reference.format_logit();
  const double p = sigmoid(b);
  const double bernoulli = p * (log_sigmoid(b) - log_sigmoid(b_ref)) +
                           (1.0 - p) * (log_sigmoid(-b) - log_sigmoid(-b_ref));
  result.gradient[kD] += p * (1.0 - p) * (b - b_ref);
  // Rounding can push an exact zero slightly negative.
  result.value = std::max(0.0, categorical) + std::max(0.0, bernoulli);
  return result;
}

PolicyParams biased_init(Rng& rng, double bias_strength, int hidden_units) {
  if (!(bias_strength >= 0.0)) throw InvalidArgument("bias_strength must be >= 0");
  PolicyParams params(hidden_units);
  auto w = params.weights();
  for (double& x : w) x = 0.1 * (rng.uniform01() - 0.5);
  for (double& x : params.hidden_weights()) x = 0.2 * (rng.uniform01() - 0.5);
  for (double& x : params.hidden_output()) x = 0.02 * (rng.uniform01() - 0.5);
  const auto content = [](Direction d) {
    return static_cast<std::size_t>(feature::kContent +
                                    content_feature_index(OptionContent::direction(d)));
  };
  w[content(Direction::kLeft)] += bias_strength;
  w[content(Direction::kAbove)] += bias_strength;
  w[feature::kLeftField] += bias_strength;
  w[feature::kTopField] += bias_strength;
  w[feature::kPosition] += 0.5 * bias_strength;
  return params;
}

PolicyParams oracle_params(double strength, int hidden_units) {
  PolicyParams params(hidden_units);
  auto w = params.weights();
  for (int i = feature::kEvidenceRelH; i <= feature::kEvidenceColor; ++i) {
    w[static_cast<std::size_t>(i)] = strength;
  }
  // Distances and offsets are fractions of the grid; scale them up so the
  // smallest non-zero separation still dominates.
  w[feature::kEvidenceRelH] *= 10.0;
  w[feature::kEvidenceRelV] *= 10.0;
  w[feature::kEvidenceQuadH] *= 10.0;
  w[feature::kEvidenceQuadV] *= 10.0;
  w[feature::kEvidenceNearest] *= 10.0;
  params.format_logit() = strength;
  return params;
}

}  // namespace dualcons
