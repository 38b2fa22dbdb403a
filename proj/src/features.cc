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

#include "dualcons/features.h"

#include <algorithm>
#include <cmath>

#include "dualcons/errors.h"

namespace dualcons {
namespace {

const SceneObject* try_resolve(const Scene& scene, const Descriptor& descriptor) {
  if (!descriptor.size) return nullptr;
  const SceneObject* found = nullptr;
  for (const auto& object : scene.objects) {
    if (!descriptor.matches(object)) continue;
    if (found) return nullptr;
    found = &object;
  }
  return found;
}

}  // namespace

int content_feature_index(const OptionContent& content) {
  switch (content.category) {
    case OptionContent::Category::kDirection:
      return content.value;
    case OptionContent::Category::kCount:
      return kNumDirections + std::clamp(content.value, 0, kCountBuckets - 1);
    case OptionContent::Category::kColor:
      return kNumDirections + kCountBuckets + content.value;
    case OptionContent::Category::kObject:
      return kNumDirections + kCountBuckets + kNumColors + content.value;
  }
  return 0;
}

int horizontal_code(const OptionContent& content) {
  if (content.category != OptionContent::Category::kDirection) return 0;
  switch (static_cast<Direction>(content.value)) {
    case Direction::kLeft:
    case Direction::kTopLeft:
    case Direction::kBottomLeft:
      return -1;
    case Direction::kRight:
    case Direction::kTopRight:
    case Direction::kBottomRight:
      return 1;
    default:
      return 0;
  }
}

int vertical_code(const OptionContent& content) {
  if (content.category != OptionContent::Category::kDirection) return 0;
  switch (static_cast<Direction>(content.value)) {
    case Direction::kAbove:
    case Direction::kTopLeft:
    case Direction::kTopRight:
      return -1;
    case Direction::kBelow:
    case Direction::kBottomLeft:
    case Direction::kBottomRight:
      return 1;
    default:
      return 0;
  }
}

OptionFeatures extract_features(const Scene& scene, const Query& query) {
  const int c = query.num_options();
  if (c < 2 || c > kMaxOptions) throw InvalidArgument("query must have 2..4 options");
  const double grid = scene.grid_size;
  const double polarity = query.negated ? -1.0 : 1.0;
  const SceneObject* subject = try_resolve(scene, query.subject);
  const SceneObject* object = query.object ? try_resolve(scene, *query.object) : nullptr;

  // Signed offsets of the subject relative to its reference, in [-1, 1].
  double rel_dx = 0.0;
  double rel_dy = 0.0;
  if (subject && object) {
    rel_dx = (subject->x - object->x) / grid;
    rel_dy = (subject->y - object->y) / grid;
  }
  double centre_dx = 0.0;
  double centre_dy = 0.0;
  double left_field = 0.0;
  double top_field = 0.0;
  if (subject) {
    const double half = grid / 2.0;
    centre_dx = (subject->x - (grid - 1.0) / 2.0) / half;
    centre_dy = (subject->y - (grid - 1.0) / 2.0) / half;
    left_field = 2 * subject->x + 1 < scene.grid_size ? 1.0 : 0.0;
    top_field = 2 * subject->y + 1 < scene.grid_size ? 1.0 : 0.0;
  }
  int shape_count = 0;
  if (query.kind == QueryKind::kCountShape) {
    shape_count = static_cast<int>(std::count_if(
        scene.objects.begin(), scene.objects.end(),
        [&](const SceneObject& o) { return query.subject.matches(o); }));
  }
  const double diagonal = grid * std::sqrt(2.0);

  OptionFeatures out;
  out.rows.resize(static_cast<std::size_t>(c));
  for (int k = 0; k < c; ++k) {
    FeatureRow& row = out.rows[static_cast<std::size_t>(k)];
    row.fill(0.0);
    const OptionContent& content = query.options[static_cast<std::size_t>(k)];
    const int h = horizontal_code(content);
    const int v = vertical_code(content);

    row[feature::kKind + static_cast<int>(query.kind)] = 1.0;
    row[feature::kContent + content_feature_index(content)] = 1.0;
    row[feature::kPosition + k] = 1.0;

    switch (query.kind) {
      case QueryKind::kRelPosH:
        row[feature::kEvidenceRelH] = polarity * h * rel_dx;
        break;
      case QueryKind::kRelPosV:
        row[feature::kEvidenceRelV] = polarity * v * rel_dy;
        break;
      case QueryKind::kQuadrant:
        row[feature::kEvidenceQuadH] = polarity * h * centre_dx;
        row[feature::kEvidenceQuadV] = polarity * v * centre_dy;
        break;
      case QueryKind::kNearest:
        if (subject && content.category == OptionContent::Category::kObject) {
          if (const SceneObject* candidate = try_resolve(scene, content.as_descriptor())) {
            const double d = std::hypot(candidate->x - subject->x, candidate->y - subject->y);
            row[feature::kEvidenceNearest] = -polarity * d / diagonal;
          }
        }
        break;
      case QueryKind::kCountShape:
        if (content.category == OptionContent::Category::kCount && content.value == shape_count) {
          row[feature::kEvidenceCount] = polarity;
        }
        break;
      case QueryKind::kColorOf:
        if (subject && content.category == OptionContent::Category::kColor &&
            content.value == static_cast<int>(subject->color)) {
          row[feature::kEvidenceColor] = polarity;
        }
        break;
    }

    row[feature::kLeftField] = h < 0 ? left_field : 0.0;
    row[feature::kTopField] = v < 0 ? top_field : 0.0;
    if (k == 0) {
      row[feature::kVariantFirst + query.template_variant % kNumTemplateVariants] = 1.0;
      row[feature::kNegatedFirst] = query.negated ? 1.0 : 0.0;
    }
  }
  return out;
}

}  // namespace dualcons
