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

// Per-option feature extraction for the categorical policy.
//
// Every block is option-conditioned: query-level signals enter through
// products with the option's content code or position so that they can move
// probability mass between options. Blocks:
//
//   kind one-hot           query kind (constant across options)
//   content one-hot        answer content of the option
//   position one-hot       option slot 0..3
//   evidence               polarity-signed geometric/perceptual evidence that
//                          the option is the answer (the "correct rule")
//   field side             one-sided "subject is in the left/top half" flags
//                          times left-ish/top-ish option codes (the shortcut)
//   variant x slot 0       template variant one-hot, active on the first slot
//   negated x slot 0       negation flag, active on the first slot

#ifndef DUALCONS_FEATURES_H_
#define DUALCONS_FEATURES_H_

#include <array>
#include <vector>

#include "dualcons/scene.h"

namespace dualcons {

inline constexpr int kMaxOptions = 4;
inline constexpr int kCountBuckets = 10;  // counts 0..8 and "9 or more"
inline constexpr int kContentDim = kNumDirections + kCountBuckets + kNumColors + kNumSizes * kNumShapes;

namespace feature {
inline constexpr int kKind = 0;
inline constexpr int kContent = kKind + kNumQueryKinds;
inline constexpr int kPosition = kContent + kContentDim;
inline constexpr int kEvidenceRelH = kPosition + kMaxOptions;
inline constexpr int kEvidenceRelV = kEvidenceRelH + 1;
inline constexpr int kEvidenceQuadH = kEvidenceRelV + 1;
inline constexpr int kEvidenceQuadV = kEvidenceQuadH + 1;
inline constexpr int kEvidenceNearest = kEvidenceQuadV + 1;
inline constexpr int kEvidenceCount = kEvidenceNearest + 1;
inline constexpr int kEvidenceColor = kEvidenceCount + 1;
inline constexpr int kLeftField = kEvidenceColor + 1;
inline constexpr int kTopField = kLeftField + 1;
inline constexpr int kVariantFirst = kTopField + 1;
inline constexpr int kNegatedFirst = kVariantFirst + kNumTemplateVariants;
inline constexpr int kDim = kNegatedFirst + 1;
}  // namespace feature

inline constexpr int kFeatureDim = feature::kDim;

using FeatureRow = std::array<double, kFeatureDim>;

// One row per option, in option order.
struct OptionFeatures {
  std::vector<FeatureRow> rows;

  int num_options() const { return static_cast<int>(rows.size()); }
};

// Index of an option content inside the content one-hot block.
int content_feature_index(const OptionContent& content);

// -1 for left-ish contents, +1 for right-ish, 0 otherwise.
int horizontal_code(const OptionContent& content);
// -1 for top-ish contents, +1 for bottom-ish, 0 otherwise.
int vertical_code(const OptionContent& content);

// Requires references in the query to resolve in the scene.
OptionFeatures extract_features(const Scene& scene, const Query& query);

}  // namespace dualcons

#endif  // DUALCONS_FEATURES_H_
