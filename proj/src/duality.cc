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

#include "dualcons/duality.h"

#include <algorithm>
#include <array>
#include <set>

#include "dualcons/errors.h"

namespace dualcons {
namespace {

constexpr std::array<const char*, kNumPrimitives> kPrimitiveNames = {
    "hflip",          "vflip",        "rot180",   "color_invert", "grayscale",
    "option_reverse", "option_cycle", "negation", "paraphrase"};

constexpr const char* kComposeSeparator = "∘";

MappingKind primitive_mapping_kind(Primitive p) {
  switch (p) {
    case Primitive::kHFlip:
    case Primitive::kVFlip:
    case Primitive::kRot180:
      return MappingKind::kContentMap;
    case Primitive::kOptionReverse:
    case Primitive::kOptionCycle:
      return MappingKind::kPositionPermutation;
    case Primitive::kNegation:
      return MappingKind::kComplement;
    case Primitive::kColorInvert:
    case Primitive::kGrayscale:
    case Primitive::kParaphrase:
      return MappingKind::kIdentity;
  }
  return MappingKind::kIdentity;
}

OptionContent map_content(Primitive p, const OptionContent& content) {
  if (content.category != OptionContent::Category::kDirection) return content;
  const auto d = static_cast<Direction>(content.value);
  switch (p) {
    case Primitive::kHFlip:
      return OptionContent::direction(reflect_horizontal(d));
    case Primitive::kVFlip:
      return OptionContent::direction(reflect_vertical(d));
    case Primitive::kRot180:
      return OptionContent::direction(reflect_horizontal(reflect_vertical(d)));
    default:
      return content;
  }
}

// A reflection maps answers through option contents, so the option set must
// be closed under it.
bool options_closed_under(Primitive p, const Query& query) {
  for (const auto& option : query.options) {
    if (std::find(query.options.begin(), query.options.end(), map_content(p, option)) ==
        query.options.end()) {
      return false;
    }
  }
  return true;
}

bool primitive_applicable(Primitive p, const Query& query) {
  switch (p) {
    case Primitive::kColorInvert:
    case Primitive::kGrayscale:
      return query.kind != QueryKind::kColorOf;
    case Primitive::kNegation:
      return query.num_options() == 2;
    case Primitive::kOptionReverse:
    case Primitive::kOptionCycle:
      return query.num_options() >= 2;
    case Primitive::kHFlip:
    case Primitive::kVFlip:
    case Primitive::kRot180:
      return options_closed_under(p, query);
    default:
      return true;
  }
}

void transform_scene(Primitive p, Scene& scene) {
  const int last = scene.grid_size - 1;
  for (auto& object : scene.objects) {
    switch (p) {
      case Primitive::kHFlip:
        object.x = last - object.x;
        break;
      case Primitive::kVFlip:
        object.y = last - object.y;
        break;
      case Primitive::kRot180:
        object.x = last - object.x;
        object.y = last - object.y;
        break;
      case Primitive::kColorInvert:
        object.color = invert_color(object.color);
        break;
      case Primitive::kGrayscale:
        object.color = Color::kGray;
        break;
      default:
        return;
    }
  }
}

void transform_query(Primitive p, Query& query) {
  switch (p) {
    case Primitive::kOptionReverse:
      std::reverse(query.options.begin(), query.options.end());
      break;
    case Primitive::kOptionCycle:
      // Position i receives original option i + 1.
      std::rotate(query.options.begin(), query.options.begin() + 1, query.options.end());
      break;
    case Primitive::kNegation:
      query.negated = !query.negated;
      break;
    case Primitive::kParaphrase:
      query.template_variant = (query.template_variant + 1) % kNumTemplateVariants;
      break;
    default:
      break;
  }
}

int find_content(const Query& query, const OptionContent& content) {
  for (int k = 0; k < query.num_options(); ++k) {
    if (query.options[static_cast<std::size_t>(k)] == content) return k;
  }
  return -1;
}

// Maps one answer through one step whose transform took q_in to q_out.
AnswerIndex map_step(Primitive mapping, const Query& q_in, const Query& q_out, AnswerIndex a) {
  const int c = q_in.num_options();
  if (a.index < 0 || a.index >= c) throw DomainError("answer index out of option bounds");
  switch (primitive_mapping_kind(mapping)) {
    case MappingKind::kPositionPermutation:
      if (q_out.num_options() != c) throw DomainError("permutation changed option count");
      if (mapping == Primitive::kOptionReverse) return AnswerIndex{c - 1 - a.index};
      return AnswerIndex{(a.index - 1 + c) % c};
    case MappingKind::kComplement:
      if (c != 2) throw DomainError("complement mapping needs a binary question");
      return AnswerIndex{1 - a.index};
    case MappingKind::kContentMap:
    case MappingKind::kIdentity:
    case MappingKind::kComposite: {
      const OptionContent mapped = map_content(mapping, q_in.options[static_cast<std::size_t>(a.index)]);
      const int k = find_content(q_out, mapped);
      if (k < 0) {
        throw DomainError("mapped content " + to_string(mapped) + " absent from dual options");
      }
      return AnswerIndex{k};
    }
  }
  throw DomainError("unknown mapping kind");
}

}  // namespace

std::string to_string(Primitive primitive) {
  return kPrimitiveNames[static_cast<std::size_t>(primitive)];
}

std::string to_string(MappingKind kind) {
  switch (kind) {
    case MappingKind::kIdentity: return "identity";
    case MappingKind::kContentMap: return "content_map";
    case MappingKind::kPositionPermutation: return "position_permutation";
    case MappingKind::kComplement: return "complement";
    case MappingKind::kComposite: return "composite";
  }
  return "?";
}

Primitive parse_primitive(const std::string& name) {
  for (int p = 0; p < kNumPrimitives; ++p) {
    if (name == kPrimitiveNames[static_cast<std::size_t>(p)]) return static_cast<Primitive>(p);
  }
  throw FormatError("unknown transform '" + name + "'");
}

Direction reflect_horizontal(Direction d) {
  switch (d) {
    case Direction::kLeft: return Direction::kRight;
    case Direction::kRight: return Direction::kLeft;
    case Direction::kTopLeft: return Direction::kTopRight;
    case Direction::kTopRight: return Direction::kTopLeft;
    case Direction::kBottomLeft: return Direction::kBottomRight;
    case Direction::kBottomRight: return Direction::kBottomLeft;
    default: return d;
  }
}

Direction reflect_vertical(Direction d) {
  switch (d) {
    case Direction::kAbove: return Direction::kBelow;
    case Direction::kBelow: return Direction::kAbove;
    case Direction::kTopLeft: return Direction::kBottomLeft;
    case Direction::kBottomLeft: return Direction::kTopLeft;
    case Direction::kTopRight: return Direction::kBottomRight;
    case Direction::kBottomRight: return Direction::kTopRight;
    default: return d;
  }
}

Color invert_color(Color c) {
  switch (c) {
    case Color::kRed: return Color::kGreen;
    case Color::kGreen: return Color::kRed;
    case Color::kBlue: return Color::kYellow;
    case Color::kYellow: return Color::kBlue;
    case Color::kBlack: return Color::kWhite;
    case Color::kWhite: return Color::kBlack;
    case Color::kGray: return Color::kGray;
  }
  return c;
}

DualityOp DualityOp::primitive(Primitive p) { return DualityOp(to_string(p), {Step{p, p}}); }

DualityOp DualityOp::from_steps(std::string id, std::vector<Step> steps) {
  if (steps.empty()) throw InvalidArgument("duality op needs at least one step");
  return DualityOp(std::move(id), std::move(steps));
}

std::vector<Primitive> DualityOp::transform_chain() const {
  std::vector<Primitive> chain;
  for (const auto& step : steps_) chain.push_back(step.transform);
  return chain;
}

MappingKind DualityOp::mapping_kind() const {
  std::set<MappingKind> kinds;
  for (const auto& step : steps_) {
    const MappingKind k = primitive_mapping_kind(step.mapping);
    if (k != MappingKind::kIdentity) kinds.insert(k);
  }
  if (kinds.empty()) return MappingKind::kIdentity;
  if (kinds.size() == 1) return *kinds.begin();
  return MappingKind::kComposite;
}

std::string DualityOp::domain_tag() const {
  bool non_color = false;
  bool binary = false;
  bool closed = false;
  for (const auto& step : steps_) {
    non_color |= step.transform == Primitive::kColorInvert || step.transform == Primitive::kGrayscale;
    binary |= step.transform == Primitive::kNegation;
    closed |= step.transform == Primitive::kHFlip || step.transform == Primitive::kVFlip ||
              step.transform == Primitive::kRot180;
  }
  std::string tag;
  auto add = [&tag](bool on, const char* name) {
    if (!on) return;
    if (!tag.empty()) tag += "+";
    tag += name;
  };
  add(non_color, "non_color");
  add(binary, "binary");
  add(closed, "closed_options");
  return tag.empty() ? "all" : tag;
}

bool DualityOp::applicable(const Scene& scene, const Query& query) const {
  (void)scene;  // every current restriction is on the query
  Query current = query;
  for (const auto& step : steps_) {
    if (!primitive_applicable(step.transform, current)) return false;
    transform_query(step.transform, current);
  }
  return true;
}

std::pair<Scene, Query> DualityOp::apply(const Scene& scene, const Query& query) const {
  std::pair<Scene, Query> out{scene, query};
  for (const auto& step : steps_) {
    if (!primitive_applicable(step.transform, out.second)) {
      throw DomainError(id_ + " applied outside its domain (" + to_string(out.second.kind) + ", " +
                        std::to_string(out.second.num_options()) + " options)");
    }
    transform_scene(step.transform, out.first);
    transform_query(step.transform, out.second);
  }
  return out;
}

Query DualityOp::apply_to_query(const Query& query) const {
  Query out = query;
  for (const auto& step : steps_) {
    if (!primitive_applicable(step.transform, out)) {
      throw DomainError(id_ + " applied outside its domain");
    }
    transform_query(step.transform, out);
  }
  return out;
}

AnswerIndex DualityOp::map_answer(const Query& original_query, const Query& dual_query,
                                  AnswerIndex answer) const {
  Query current = original_query;
  for (const auto& step : steps_) {
    if (!primitive_applicable(step.transform, current)) {
      throw DomainError(id_ + " applied outside its domain");
    }
    Query next = current;
    transform_query(step.transform, next);
    answer = map_step(step.mapping, current, next, answer);
    current = std::move(next);
  }
  if (current != dual_query) throw DomainError("dual query is not the image of the original under " + id_);
  return answer;
}

std::vector<DualityOp> builtin_pool() {
  std::vector<DualityOp> ops;
  for (int p = 0; p < kNumPrimitives; ++p) ops.push_back(DualityOp::primitive(static_cast<Primitive>(p)));
  return ops;
}

DualityOp builtin(const std::string& id) { return DualityOp::primitive(parse_primitive(id)); }

DualityOp compose(const DualityOp& first, const DualityOp& second) {
  std::vector<Step> steps(second.steps().begin(), second.steps().end());
  steps.insert(steps.end(), first.steps().begin(), first.steps().end());
  return DualityOp::from_steps(first.id() + kComposeSeparator + second.id(), std::move(steps));
}

AxiomReport verify_axiom_on(const DualityOp& op, std::span<const Example> examples, int max_samples) {
  constexpr std::size_t kKeptViolations = 16;
  AxiomReport report;
  report.op_id = op.id();
  for (const auto& example : examples) {
    if (max_samples >= 0 && report.samples_tested >= max_samples) break;
    if (!op.applicable(example.scene, example.query)) continue;
    ++report.samples_tested;
    const AnswerIndex original = ground_truth(example.scene, example.query);
    auto [scene, query] = op.apply(example.scene, example.query);
    bool ok = true;
    AnswerIndex expected{-1};
    AnswerIndex mapped{-1};
    try {
      expected = ground_truth(scene, query);
      mapped = op.map_answer(example.query, query, original);
      ok = expected == mapped;
    } catch (const OracleError&) {
      ok = false;
    } catch (const DomainError&) {
      ok = false;
    }
    if (!ok) {
      ++report.violation_count;
      if (report.violations.size() < kKeptViolations) {
        report.violations.push_back({example, query, expected, mapped});
      }
    }
  }
  return report;
}

AxiomReport verify_axiom(const DualityOp& op, int n_samples, Rng& rng, const EnvConfig& env) {
  if (n_samples < 1) throw InvalidArgument("verify_axiom: n_samples must be >= 1");
  const long budget = 50L * n_samples + 1000;
  std::vector<Example> in_domain;
  in_domain.reserve(static_cast<std::size_t>(n_samples));
  for (long attempt = 0; attempt < budget && static_cast<int>(in_domain.size()) < n_samples; ++attempt) {
    Example example = sample_example(rng, env);
    if (op.applicable(example.scene, example.query)) in_domain.push_back(std::move(example));
  }
  if (static_cast<int>(in_domain.size()) < n_samples) {
    throw Unsatisfiable("verify_axiom: only " + std::to_string(in_domain.size()) +
                        " in-domain samples for " + op.id());
  }
  return verify_axiom_on(op, in_domain);
}

bool behaviorally_equal(const DualityOp& a, const DualityOp& b, std::span<const Example> probe) {
  for (const auto& example : probe) {
    const bool in_a = a.applicable(example.scene, example.query);
    if (in_a != b.applicable(example.scene, example.query)) return false;
    if (!in_a) continue;
    const auto image_a = a.apply(example.scene, example.query);
    const auto image_b = b.apply(example.scene, example.query);
    if (image_a != image_b) return false;
    for (int k = 0; k < example.query.num_options(); ++k) {
      if (a.map_answer(example.query, image_a.second, AnswerIndex{k}) !=
          b.map_answer(example.query, image_b.second, AnswerIndex{k})) {
        return false;
      }
    }
  }
  return true;
}

bool behaves_as_identity(const DualityOp& op, std::span<const Example> probe) {
  for (const auto& example : probe) {
    if (!op.applicable(example.scene, example.query)) continue;
    const auto image = op.apply(example.scene, example.query);
    if (image.first != example.scene || image.second != example.query) return false;
    for (int k = 0; k < example.query.num_options(); ++k) {
      if (op.map_answer(example.query, image.second, AnswerIndex{k}) != AnswerIndex{k}) return false;
    }
  }
  return true;
}

std::vector<DualityOp> depth2_candidates(std::span<const Example> probe) {
  const auto builtins = builtin_pool();
  std::vector<DualityOp> accepted;
  for (const auto& first : builtins) {
    for (const auto& second : builtins) {
      DualityOp candidate = compose(first, second);
      const bool any_in_domain = std::any_of(probe.begin(), probe.end(), [&](const Example& e) {
        return candidate.applicable(e.scene, e.query);
      });
      if (!any_in_domain || behaves_as_identity(candidate, probe)) continue;
      auto same = [&](const DualityOp& other) { return behaviorally_equal(candidate, other, probe); };
      if (std::any_of(builtins.begin(), builtins.end(), same)) continue;
      if (std::any_of(accepted.begin(), accepted.end(), same)) continue;
      accepted.push_back(std::move(candidate));
    }
  }
  return accepted;
}

}  // namespace dualcons
