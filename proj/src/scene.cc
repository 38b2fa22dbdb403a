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

#include "dualcons/scene.h"

#include <algorithm>
#include <array>
#include <numeric>

#include "dualcons/errors.h"

namespace dualcons {
namespace {

constexpr std::array<const char*, kNumShapes> kShapeNames = {"circle", "square", "triangle",
                                                             "star"};
constexpr std::array<const char*, kNumColors> kColorNames = {"red",   "green", "blue", "yellow",
                                                             "black", "white", "gray"};
constexpr std::array<const char*, kNumSizes> kSizeNames = {"small", "large"};
constexpr std::array<const char*, kNumQueryKinds> kKindNames = {
    "rel_pos_h", "rel_pos_v", "quadrant", "nearest", "count_shape", "color_of"};
constexpr std::array<const char*, kNumDirections> kDirectionNames = {
    "left",     "right",     "above",       "below",
    "top_left", "top_right", "bottom_left", "bottom_right"};

int squared_distance(const SceneObject& a, const SceneObject& b) {
  const int dx = a.x - b.x;
  const int dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Objects whose sized descriptor occurs exactly once in the scene.
std::vector<const SceneObject*> uniquely_described(const Scene& scene) {
  std::vector<const SceneObject*> out;
  for (const auto& object : scene.objects) {
    const Descriptor d{object.shape, object.size};
    const auto n = std::count_if(scene.objects.begin(), scene.objects.end(),
                                 [&](const SceneObject& o) { return d.matches(o); });
    if (n == 1) out.push_back(&object);
  }
  return out;
}

Descriptor describe(const SceneObject& object) { return {object.shape, object.size}; }

// Horizontal half of a coordinate: -1 left, +1 right, 0 on the centre line.
int half_sign(int coordinate, int grid_size) {
  const int twice = 2 * coordinate + 1;
  if (twice < grid_size) return -1;
  if (twice > grid_size) return 1;
  return 0;
}

Direction quadrant_of(int hx, int hy) {
  if (hy < 0) return hx < 0 ? Direction::kTopLeft : Direction::kTopRight;
  return hx < 0 ? Direction::kBottomLeft : Direction::kBottomRight;
}

int draw_num_options(Rng& rng, const EnvConfig& config) {
  return rng.bernoulli(config.binary_prob) ? 2 : 4;
}

void finish_query(Rng& rng, const EnvConfig& config, Query& query) {
  rng.shuffle(std::span<OptionContent>(query.options));
  query.template_variant = static_cast<int>(rng.index(kNumTemplateVariants));
  query.negated = query.num_options() == 2 && rng.bernoulli(config.negation_prob);
}

std::optional<Query> build_relation(Rng& rng, const Scene& scene, const EnvConfig& config,
                                    bool horizontal) {
  const auto unique = uniquely_described(scene);
  std::vector<std::pair<const SceneObject*, const SceneObject*>> pairs;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    for (std::size_t j = i + 1; j < unique.size(); ++j) {
      const int a = horizontal ? unique[i]->x : unique[i]->y;
      const int b = horizontal ? unique[j]->x : unique[j]->y;
      if (a != b) pairs.emplace_back(unique[i], unique[j]);
    }
  }
  if (pairs.empty()) return std::nullopt;
  auto [first, second] = pairs[rng.index(pairs.size())];
  const int a = horizontal ? first->x : first->y;
  const int b = horizontal ? second->x : second->y;
  const SceneObject* lower = a < b ? first : second;
  const SceneObject* upper = a < b ? second : first;
  const double skew = horizontal ? config.horizontal_skew : config.vertical_skew;
  const bool subject_is_lower = rng.bernoulli(skew);
  Query query;
  query.kind = horizontal ? QueryKind::kRelPosH : QueryKind::kRelPosV;
  query.subject = describe(subject_is_lower ? *lower : *upper);
  query.object = describe(subject_is_lower ? *upper : *lower);
  if (horizontal) {
    query.options = {OptionContent::direction(Direction::kLeft),
                     OptionContent::direction(Direction::kRight)};
  } else {
    query.options = {OptionContent::direction(Direction::kAbove),
                     OptionContent::direction(Direction::kBelow)};
  }
  finish_query(rng, config, query);
  return query;
}

std::optional<Query> build_quadrant(Rng& rng, const Scene& scene, const EnvConfig& config) {
  std::vector<const SceneObject*> eligible;
  for (const auto* object : uniquely_described(scene)) {
    if (half_sign(object->x, scene.grid_size) != 0 && half_sign(object->y, scene.grid_size) != 0) {
      eligible.push_back(object);
    }
  }
  if (eligible.empty()) return std::nullopt;
  const SceneObject& subject = *eligible[rng.index(eligible.size())];
  const Direction truth =
      quadrant_of(half_sign(subject.x, scene.grid_size), half_sign(subject.y, scene.grid_size));
  Query query;
  query.kind = QueryKind::kQuadrant;
  query.subject = describe(subject);
  std::vector<OptionContent> others;
  for (Direction d : {Direction::kTopLeft, Direction::kTopRight, Direction::kBottomLeft,
                      Direction::kBottomRight}) {
    if (d != truth) others.push_back(OptionContent::direction(d));
  }
  rng.shuffle(std::span<OptionContent>(others));
  const int num_options = draw_num_options(rng, config);
  query.options.push_back(OptionContent::direction(truth));
  query.options.insert(query.options.end(), others.begin(), others.begin() + (num_options - 1));
  finish_query(rng, config, query);
  return query;
}

std::optional<Query> build_nearest(Rng& rng, const Scene& scene, const EnvConfig& config) {
  const auto unique = uniquely_described(scene);
  if (unique.size() < 3) return std::nullopt;
  const SceneObject& subject = *unique[rng.index(unique.size())];
  std::vector<const SceneObject*> candidates;
  for (const auto* object : unique) {
    if (object != &subject) candidates.push_back(object);
  }
  rng.shuffle(std::span<const SceneObject*>(candidates));
  const int num_options =
      std::min(draw_num_options(rng, config), static_cast<int>(candidates.size()));
  candidates.resize(num_options);
  // Reject distance ties among the listed candidates.
  std::vector<int> distances;
  for (const auto* c : candidates) distances.push_back(squared_distance(subject, *c));
  const int best = *std::min_element(distances.begin(), distances.end());
  if (std::count(distances.begin(), distances.end(), best) != 1) return std::nullopt;
  Query query;
  query.kind = QueryKind::kNearest;
  query.subject = describe(subject);
  for (const auto* c : candidates) query.options.push_back(OptionContent::object(c->size, c->shape));
  finish_query(rng, config, query);
  return query;
}

std::optional<Query> build_count(Rng& rng, const Scene& scene, const EnvConfig& config) {
  const auto shape = static_cast<Shape>(rng.index(kNumShapes));
  const int truth = static_cast<int>(std::count_if(
      scene.objects.begin(), scene.objects.end(),
      [&](const SceneObject& o) { return o.shape == shape; }));
  const int num_options = draw_num_options(rng, config);
  const int max_label = std::max(config.max_objects, num_options);
  std::vector<OptionContent> distractors;
  for (int n = 0; n <= max_label; ++n) {
    if (n != truth) distractors.push_back(OptionContent::count(n));
  }
  rng.shuffle(std::span<OptionContent>(distractors));
  Query query;
  query.kind = QueryKind::kCountShape;
  query.subject = Descriptor{shape, std::nullopt};
  query.options.push_back(OptionContent::count(truth));
  query.options.insert(query.options.end(), distractors.begin(),
                       distractors.begin() + (num_options - 1));
  finish_query(rng, config, query);
  return query;
}

std::optional<Query> build_color(Rng& rng, const Scene& scene, const EnvConfig& config) {
  const auto unique = uniquely_described(scene);
  std::vector<const SceneObject*> eligible;
  for (const auto* object : unique) {
    if (object->color != Color::kGray) eligible.push_back(object);
  }
  if (eligible.empty()) return std::nullopt;
  const SceneObject& subject = *eligible[rng.index(eligible.size())];
  std::vector<OptionContent> distractors;
  for (int c = 0; c < kNumPaletteColors; ++c) {
    if (static_cast<Color>(c) != subject.color) {
      distractors.push_back(OptionContent::color(static_cast<Color>(c)));
    }
  }
  rng.shuffle(std::span<OptionContent>(distractors));
  const int num_options = draw_num_options(rng, config);
  Query query;
  query.kind = QueryKind::kColorOf;
  query.subject = describe(subject);
  query.options.push_back(OptionContent::color(subject.color));
  query.options.insert(query.options.end(), distractors.begin(),
                       distractors.begin() + (num_options - 1));
  finish_query(rng, config, query);
  return query;
}

}  // namespace

Descriptor OptionContent::as_descriptor() const {
  if (category != Category::kObject) throw InvalidArgument("option content is not an object");
  return Descriptor{static_cast<Shape>(value % kNumShapes),
                    static_cast<ObjectSize>(value / kNumShapes)};
}

void validate(const EnvConfig& config) {
  if (config.grid_size < 2) throw InvalidArgument("env.grid_size must be at least 2");
  const int cells = config.grid_size * config.grid_size;
  if (config.min_objects < 2 || config.min_objects > config.max_objects) {
    throw InvalidArgument("env.min_objects must be in [2, env.max_objects]");
  }
  if (config.max_objects > cells) {
    throw InvalidArgument("env.max_objects exceeds grid_size^2 (" + std::to_string(cells) +
                          "): objects cannot occupy distinct cells");
  }
  double total = 0.0;
  for (double w : config.kind_weights) {
    if (!(w >= 0.0)) throw InvalidArgument("env.kind_weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument("env.kind_weights must not all be zero");
  auto probability = [](double p, const char* field) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidArgument(std::string(field) + " must be in [0, 1]");
    }
  };
  probability(config.binary_prob, "env.binary_prob");
  probability(config.negation_prob, "env.negation_prob");
  probability(config.horizontal_skew, "env.horizontal_skew");
  probability(config.vertical_skew, "env.vertical_skew");
  if (config.max_attempts < 1) throw InvalidArgument("env.max_attempts must be >= 1");
}

Scene generate_scene(Rng& rng, const EnvConfig& config) {
  validate(config);
  const int grid = config.grid_size;
  const int count = static_cast<int>(rng.uniform_int(config.min_objects, config.max_objects));
  // Partial Fisher-Yates over cell indices gives distinct cells.
  std::vector<int> cells(static_cast<std::size_t>(grid * grid));
  std::iota(cells.begin(), cells.end(), 0);
  Scene scene;
  scene.grid_size = grid;
  for (int i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.index(cells.size() - static_cast<std::size_t>(i));
    std::swap(cells[static_cast<std::size_t>(i)], cells[j]);
    SceneObject object;
    object.id = i;
    object.x = cells[static_cast<std::size_t>(i)] % grid;
    object.y = cells[static_cast<std::size_t>(i)] / grid;
    object.shape = static_cast<Shape>(rng.index(kNumShapes));
    object.color = static_cast<Color>(rng.index(kNumPaletteColors));
    object.size = static_cast<ObjectSize>(rng.index(kNumSizes));
    scene.objects.push_back(object);
  }
  return scene;
}

Query generate_query(Rng& rng, const Scene& scene, const EnvConfig& config) {
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    const auto kind = static_cast<QueryKind>(rng.categorical(config.kind_weights));
    std::optional<Query> query;
    switch (kind) {
      case QueryKind::kRelPosH:
        query = build_relation(rng, scene, config, /*horizontal=*/true);
        break;
      case QueryKind::kRelPosV:
        query = build_relation(rng, scene, config, /*horizontal=*/false);
        break;
      case QueryKind::kQuadrant:
        query = build_quadrant(rng, scene, config);
        break;
      case QueryKind::kNearest:
        query = build_nearest(rng, scene, config);
        break;
      case QueryKind::kCountShape:
        query = build_count(rng, scene, config);
        break;
      case QueryKind::kColorOf:
        query = build_color(rng, scene, config);
        break;
    }
    if (query) return *std::move(query);
  }
  throw Unsatisfiable("no tie-free query found after " + std::to_string(config.max_attempts) +
                      " attempts");
}

Example sample_example(Rng& rng, const EnvConfig& config) {
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    Scene scene = generate_scene(rng, config);
    try {
      Query query = generate_query(rng, scene, config);
      const AnswerIndex answer = ground_truth(scene, query);
      return Example{std::move(scene), std::move(query), answer};
    } catch (const Unsatisfiable&) {
      continue;
    }
  }
  throw Unsatisfiable("no scene admitted a query after " + std::to_string(config.max_attempts) +
                      " scenes");
}

const SceneObject& resolve(const Scene& scene, const Descriptor& descriptor) {
  if (!descriptor.size) throw OracleError("descriptor without size cannot name one object");
  const SceneObject* found = nullptr;
  for (const auto& object : scene.objects) {
    if (!descriptor.matches(object)) continue;
    if (found) throw OracleError("ambiguous reference: " + to_string(descriptor));
    found = &object;
  }
  if (!found) throw OracleError("missing reference: " + to_string(descriptor));
  return *found;
}

OptionContent true_content(const Scene& scene, const Query& query) {
  switch (query.kind) {
    case QueryKind::kRelPosH:
    case QueryKind::kRelPosV: {
      if (!query.object) throw OracleError("relation query without object reference");
      const auto& s = resolve(scene, query.subject);
      const auto& o = resolve(scene, *query.object);
      const bool horizontal = query.kind == QueryKind::kRelPosH;
      const int a = horizontal ? s.x : s.y;
      const int b = horizontal ? o.x : o.y;
      if (a == b) throw OracleError("coordinate tie in relation query");
      if (horizontal) return OptionContent::direction(a < b ? Direction::kLeft : Direction::kRight);
      return OptionContent::direction(a < b ? Direction::kAbove : Direction::kBelow);
    }
    case QueryKind::kQuadrant: {
      const auto& s = resolve(scene, query.subject);
      const int hx = half_sign(s.x, scene.grid_size);
      const int hy = half_sign(s.y, scene.grid_size);
      if (hx == 0 || hy == 0) throw OracleError("subject lies on a centre line");
      return OptionContent::direction(quadrant_of(hx, hy));
    }
    case QueryKind::kNearest: {
      const auto& s = resolve(scene, query.subject);
      int best = -1;
      int best_distance = 0;
      bool tie = false;
      for (std::size_t k = 0; k < query.options.size(); ++k) {
        const auto& candidate = resolve(scene, query.options[k].as_descriptor());
        if (&candidate == &s) throw OracleError("nearest option names the subject itself");
        const int d = squared_distance(s, candidate);
        if (best < 0 || d < best_distance) {
          best = static_cast<int>(k);
          best_distance = d;
          tie = false;
        } else if (d == best_distance) {
          tie = true;
        }
      }
      if (best < 0) throw OracleError("nearest query without options");
      if (tie) throw OracleError("distance tie in nearest query");
      return query.options[static_cast<std::size_t>(best)];
    }
    case QueryKind::kCountShape: {
      const auto n = std::count_if(scene.objects.begin(), scene.objects.end(),
                                   [&](const SceneObject& o) { return query.subject.matches(o); });
      return OptionContent::count(static_cast<int>(n));
    }
    case QueryKind::kColorOf:
      return OptionContent::color(resolve(scene, query.subject).color);
  }
  throw OracleError("unknown query kind");
}

AnswerIndex ground_truth(const Scene& scene, const Query& query) {
  const OptionContent truth = true_content(scene, query);
  int found = -1;
  for (int k = 0; k < query.num_options(); ++k) {
    if (query.options[static_cast<std::size_t>(k)] != truth) continue;
    if (found >= 0) throw OracleError("true content listed twice");
    found = k;
  }
  if (found < 0) throw OracleError("true content " + to_string(truth) + " not among options");
  if (query.negated) {
    if (query.num_options() != 2) throw OracleError("negated query must be binary");
    return AnswerIndex{1 - found};
  }
  return AnswerIndex{found};
}

std::string to_string(Shape shape) { return kShapeNames[static_cast<std::size_t>(shape)]; }
std::string to_string(Color color) { return kColorNames[static_cast<std::size_t>(color)]; }
std::string to_string(ObjectSize size) { return kSizeNames[static_cast<std::size_t>(size)]; }
std::string to_string(QueryKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }
std::string to_string(Direction direction) {
  return kDirectionNames[static_cast<std::size_t>(direction)];
}

std::string to_string(const Descriptor& descriptor) {
  if (!descriptor.size) return to_string(descriptor.shape);
  return to_string(*descriptor.size) + " " + to_string(descriptor.shape);
}

std::string to_string(const OptionContent& content) {
  switch (content.category) {
    case OptionContent::Category::kDirection:
      return to_string(static_cast<Direction>(content.value));
    case OptionContent::Category::kCount:
      return std::to_string(content.value);
    case OptionContent::Category::kColor:
      return to_string(static_cast<Color>(content.value));
    case OptionContent::Category::kObject:
      return to_string(content.as_descriptor());
  }
  return "?";
}

QueryKind parse_query_kind(const std::string& name) {
  for (int k = 0; k < kNumQueryKinds; ++k) {
    if (name == kKindNames[static_cast<std::size_t>(k)]) return static_cast<QueryKind>(k);
  }
  throw FormatError("unknown query kind '" + name + "'");
}

OptionContent parse_option_content(const std::string& text) {
  for (int d = 0; d < kNumDirections; ++d) {
    if (text == kDirectionNames[static_cast<std::size_t>(d)]) {
      return OptionContent::direction(static_cast<Direction>(d));
    }
  }
  for (int c = 0; c < kNumColors; ++c) {
    if (text == kColorNames[static_cast<std::size_t>(c)]) {
      return OptionContent::color(static_cast<Color>(c));
    }
  }
  if (!text.empty() && std::all_of(text.begin(), text.end(), [](char ch) {
        return ch >= '0' && ch <= '9';
      })) {
    return OptionContent::count(std::stoi(text));
  }
  const auto space = text.find(' ');
  if (space != std::string::npos) {
    const std::string size = text.substr(0, space);
    const std::string shape = text.substr(space + 1);
    for (int z = 0; z < kNumSizes; ++z) {
      for (int s = 0; s < kNumShapes; ++s) {
        if (size == kSizeNames[static_cast<std::size_t>(z)] &&
            shape == kShapeNames[static_cast<std::size_t>(s)]) {
          return OptionContent::object(static_cast<ObjectSize>(z), static_cast<Shape>(s));
        }
      }
    }
  }
  throw FormatError("unrecognised option content '" + text + "'");
}

std::string render_question(const Query& query) {
  const std::string s = "the " + to_string(query.subject);
  const std::string o = query.object ? "the " + to_string(*query.object) : std::string();
  const std::string n = query.negated ? " NOT" : "";
  std::string text;
  switch (query.kind) {
    case QueryKind::kRelPosH:
      switch (query.template_variant % 3) {
        case 0: text = "Is " + s + n + " to the left or to the right of " + o + "?"; break;
        case 1: text = "Relative to " + o + ", which side is " + s + n + " on?"; break;
        default: text = "Which horizontal direction does" + n + " lead from " + o + " to " + s + "?";
      }
      break;
    case QueryKind::kRelPosV:
      switch (query.template_variant % 3) {
        case 0: text = "Is " + s + n + " above or below " + o + "?"; break;
        case 1: text = "Relative to " + o + ", is " + s + n + " higher or lower?"; break;
        default: text = "Which vertical direction does" + n + " lead from " + o + " to " + s + "?";
      }
      break;
    case QueryKind::kQuadrant:
      switch (query.template_variant % 3) {
        case 0: text = "Which quadrant is " + s + n + " in?"; break;
        case 1: text = "In which corner region of the grid is " + s + n + " located?"; break;
        default: text = "Where does " + s + n + " sit: which quarter of the image?";
      }
      break;
    case QueryKind::kNearest:
      switch (query.template_variant % 3) {
        case 0: text = "Which object is" + n + " nearest to " + s + "?"; break;
        case 1: text = "Of the listed objects, which is" + n + " closest to " + s + "?"; break;
        default: text = "Which item lies" + n + " at the smallest distance from " + s + "?";
      }
      break;
    case QueryKind::kCountShape:
      switch (query.template_variant % 3) {
        case 0: text = "How many " + to_string(query.subject.shape) + "s are" + n + " there?"; break;
        case 1: text = "Count the " + to_string(query.subject.shape) + "s. Which number is" + n + " right?"; break;
        default: text = "What is" + n + " the number of " + to_string(query.subject.shape) + "s?";
      }
      break;
    case QueryKind::kColorOf:
      switch (query.template_variant % 3) {
        case 0: text = "What color is" + n + " " + s + "?"; break;
        case 1: text = "Which color does" + n + " describe " + s + "?"; break;
        default: text = "Name the color that is" + n + " used for " + s + ".";
      }
      break;
  }
  text += " Options:";
  for (int k = 0; k < query.num_options(); ++k) {
    text += " (" + std::string(1, static_cast<char>('A' + k)) + ") " +
            to_string(query.options[static_cast<std::size_t>(k)]);
  }
  return text;
}

}  // namespace dualcons
