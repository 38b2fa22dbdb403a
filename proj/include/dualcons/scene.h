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

// Symbolic spatial scenes, multiple-choice spatial questions, and the exact
// ground-truth oracle.
//
// Coordinates: x grows to the right, y grows downward, so "above" means a
// smaller y and the top-left quadrant holds small x and small y.

#ifndef DUALCONS_SCENE_H_
#define DUALCONS_SCENE_H_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dualcons/rng.h"

namespace dualcons {

enum class Shape : std::uint8_t { kCircle, kSquare, kTriangle, kStar };
inline constexpr int kNumShapes = 4;

// kGray is the grayscale sentinel; generated scenes never contain it.
enum class Color : std::uint8_t { kRed, kGreen, kBlue, kYellow, kBlack, kWhite, kGray };
inline constexpr int kNumPaletteColors = 6;
inline constexpr int kNumColors = 7;

enum class ObjectSize : std::uint8_t { kSmall, kLarge };
inline constexpr int kNumSizes = 2;

enum class QueryKind : std::uint8_t {
  kRelPosH,
  kRelPosV,
  kQuadrant,
  kNearest,
  kCountShape,
  kColorOf,
};
inline constexpr int kNumQueryKinds = 6;

enum class Direction : std::uint8_t {
  kLeft,
  kRight,
  kAbove,
  kBelow,
  kTopLeft,
  kTopRight,
  kBottomLeft,
  kBottomRight,
};
inline constexpr int kNumDirections = 8;

// Surface templates per query kind; paraphrase cycles through them.
inline constexpr int kNumTemplateVariants = 3;

struct SceneObject {
  int id = 0;
  Shape shape = Shape::kCircle;
  Color color = Color::kRed;
  int x = 0;
  int y = 0;
  ObjectSize size = ObjectSize::kSmall;

  bool operator==(const SceneObject&) const = default;
};

struct Scene {
  int grid_size = 8;
  std::vector<SceneObject> objects;

  bool operator==(const Scene&) const = default;
};

// Refers to objects by size and shape. Colors never appear in references so
// appearance perturbations leave every reference intact. A descriptor without
// a size names a shape class (used by counting questions).
struct Descriptor {
  Shape shape = Shape::kCircle;
  std::optional<ObjectSize> size;

  bool operator==(const Descriptor&) const = default;
  bool matches(const SceneObject& object) const {
    return object.shape == shape && (!size || *size == object.size);
  }
};

// Answer content of one option.
struct OptionContent {
  enum class Category : std::uint8_t { kDirection, kCount, kColor, kObject };

  Category category = Category::kDirection;
  int value = 0;

  static OptionContent direction(Direction d) {
    return {Category::kDirection, static_cast<int>(d)};
  }
  static OptionContent count(int n) { return {Category::kCount, n}; }
  static OptionContent color(Color c) { return {Category::kColor, static_cast<int>(c)}; }
  static OptionContent object(ObjectSize size, Shape shape) {
    return {Category::kObject, static_cast<int>(size) * kNumShapes + static_cast<int>(shape)};
  }

  Descriptor as_descriptor() const;

  auto operator<=>(const OptionContent&) const = default;
};

struct Query {
  QueryKind kind = QueryKind::kRelPosH;
  Descriptor subject;
  std::optional<Descriptor> object;
  std::vector<OptionContent> options;
  int template_variant = 0;
  bool negated = false;

  int num_options() const { return static_cast<int>(options.size()); }
  bool operator==(const Query&) const = default;
};

struct AnswerIndex {
  int index = 0;

  auto operator<=>(const AnswerIndex&) const = default;
};

struct Example {
  Scene scene;
  Query query;
  AnswerIndex answer;

  bool operator==(const Example&) const = default;
};

struct EnvConfig {
  int grid_size = 8;
  int min_objects = 3;
  int max_objects = 6;
  // Sampling weights over QueryKind, in enum order.
  std::array<double, kNumQueryKinds> kind_weights = {0.55, 0.1, 0.2, 0.05, 0.05, 0.05};
  // Probability of a two-option question for kinds that allow 2 or 4.
  double binary_prob = 0.5;
  // Probability that a binary question is posed in negated form.
  double negation_prob = 0.1;
  // Probability that the subject of a horizontal (vertical) relation is the
  // left (upper) object of the pair. 0.5 is unbiased; larger values plant the
  // spurious "subject is on the left" regularity.
  double horizontal_skew = 0.9;
  double vertical_skew = 0.9;
  int max_attempts = 64;

  bool operator==(const EnvConfig&) const = default;
};

// Throws InvalidArgument when the config cannot produce valid scenes.
void validate(const EnvConfig& config);

Scene generate_scene(Rng& rng, const EnvConfig& config);

// Draws a tie-free query for the scene. Throws Unsatisfiable after
// config.max_attempts rejected draws.
Query generate_query(Rng& rng, const Scene& scene, const EnvConfig& config);

// Redraws scenes until a query can be posed.
Example sample_example(Rng& rng, const EnvConfig& config);

// Content of the true answer before negation is taken into account.
OptionContent true_content(const Scene& scene, const Query& query);

// The exact oracle a*(v, q). Throws OracleError on ties, on missing or
// ambiguous references, or when the options do not contain exactly one copy
// of the true content.
AnswerIndex ground_truth(const Scene& scene, const Query& query);

// Finds the unique object matching a sized descriptor; throws OracleError.
const SceneObject& resolve(const Scene& scene, const Descriptor& descriptor);

std::string to_string(Shape shape);
std::string to_string(Color color);
std::string to_string(ObjectSize size);
std::string to_string(QueryKind kind);
std::string to_string(Direction direction);
std::string to_string(const Descriptor& descriptor);
std::string to_string(const OptionContent& content);

QueryKind parse_query_kind(const std::string& name);
OptionContent parse_option_content(const std::string& text);

// Surface question text for the query's kind, variant and polarity.
std::string render_question(const Query& query);

}  // namespace dualcons

#endif  // DUALCONS_SCENE_H_
