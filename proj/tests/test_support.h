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

// Shared helpers for the unit and acceptance tests. The oracles here are
// written independently of the library so they can check it.

#ifndef DUALCONS_TESTS_TEST_SUPPORT_H_
#define DUALCONS_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "dualcons/policy.h"
#include "dualcons/rng.h"
#include "dualcons/scene.h"

namespace dualcons::testing {

// Answer content from first principles: raw coordinates, no library helpers.
inline std::optional<OptionContent> reference_truth(const Scene& scene, const Query& query) {
  auto find = [&](const Descriptor& d) -> const SceneObject* {
    const SceneObject* hit = nullptr;
    for (const auto& o : scene.objects) {
      if (o.shape != d.shape || (d.size && *d.size != o.size)) continue;
      if (hit) return nullptr;
      hit = &o;
    }
    return hit;
  };
  const SceneObject* s = query.kind == QueryKind::kCountShape ? nullptr : find(query.subject);
  switch (query.kind) {
    case QueryKind::kRelPosH: {
      const SceneObject* o = find(*query.object);
      if (!s || !o || s->x == o->x) return std::nullopt;
      return OptionContent::direction(s->x < o->x ? Direction::kLeft : Direction::kRight);
    }
    case QueryKind::kRelPosV: {
      const SceneObject* o = find(*query.object);
      if (!s || !o || s->y == o->y) return std::nullopt;
      return OptionContent::direction(s->y < o->y ? Direction::kAbove : Direction::kBelow);
    }
    case QueryKind::kQuadrant: {
      if (!s) return std::nullopt;
      const double mid = (scene.grid_size - 1) / 2.0;
      if (s->x == mid || s->y == mid) return std::nullopt;
      const bool left = s->x < mid;
      const bool top = s->y < mid;
      if (top) return OptionContent::direction(left ? Direction::kTopLeft : Direction::kTopRight);
      return OptionContent::direction(left ? Direction::kBottomLeft : Direction::kBottomRight);
    }
    case QueryKind::kNearest: {
      if (!s) return std::nullopt;
      double best = 1e18;
      std::optional<OptionContent> winner;
      int ties = 0;
      for (const auto& option : query.options) {
        const SceneObject* c = find(option.as_descriptor());
        if (!c) return std::nullopt;
        const double d = std::hypot(s->x - c->x, s->y - c->y);
        if (d < best - 1e-9) {
          best = d;
          winner = option;
          ties = 0;
        } else if (std::abs(d - best) <= 1e-9) {
          ++ties;
        }
      }
      if (ties) return std::nullopt;
      return winner;
    }
    case QueryKind::kCountShape: {
      int n = 0;
      for (const auto& o : scene.objects) n += o.shape == query.subject.shape;
      return OptionContent::count(n);
    }
    case QueryKind::kColorOf:
      if (!s) return std::nullopt;
      return OptionContent::color(s->color);
  }
  return std::nullopt;
}

// Index of the correct option, applying polarity.
inline std::optional<int> reference_answer(const Scene& scene, const Query& query) {
  const auto truth = reference_truth(scene, query);
  if (!truth) return std::nullopt;
  for (int k = 0; k < query.num_options(); ++k) {
    if (query.options[static_cast<std::size_t>(k)] == *truth) {
      return query.negated ? 1 - k : k;
    }
  }
  return std::nullopt;
}

// Central finite difference of f along every coordinate of params.
inline std::vector<double> numeric_gradient(const PolicyParams& params,
                                            const std::function<double(const PolicyParams&)>& f,
                                            double h = 1e-5) {
  std::vector<double> grad(params.size());
  for (std::size_t j = 0; j < params.size(); ++j) {
    PolicyParams plus = params;
    PolicyParams minus = params;
    plus.values()[j] += h;
    minus.values()[j] -= h;
    grad[j] = (f(plus) - f(minus)) / (2.0 * h);
  }
  return grad;
}

// max_j |a_j - b_j| / max(1, max_j |b_j|): relative to the gradient scale.
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0;
  double scale = 1e-8;
  for (std::size_t j = 0; j < a.size(); ++j) {
    diff = std::max(diff, std::abs(a[j] - b[j]));
    scale = std::max(scale, std::abs(b[j]));
  }
  return diff / std::max(1.0, scale);
}

inline PolicyParams random_params(Rng& rng, int hidden_units, double scale) {
  PolicyParams p(hidden_units);
  for (auto& v : p.values()) v = (2.0 * rng.uniform01() - 1.0) * scale;
  return p;
}

inline std::vector<Example> sample_examples(Rng& rng, const EnvConfig& env, int n) {
  std::vector<Example> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(sample_example(rng, env));
  return out;
}

inline EnvConfig single_kind_env(QueryKind kind, EnvConfig env = {}) {
  for (int k = 0; k < kNumQueryKinds; ++k) {
    env.kind_weights[static_cast<std::size_t>(k)] = k == static_cast<int>(kind) ? 1.0 : 0.0;
  }
  return env;
}

}  // namespace dualcons::testing

#endif  // DUALCONS_TESTS_TEST_SUPPORT_H_
