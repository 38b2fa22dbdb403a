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

// Duality operations: an input transform, the answer mapping it induces, and
// the applicability domain on which ground truth commutes with the pair.

#ifndef DUALCONS_DUALITY_H_
#define DUALCONS_DUALITY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dualcons/rng.h"
#include "dualcons/scene.h"

namespace dualcons {

enum class Primitive : std::uint8_t {
  kHFlip,
  kVFlip,
  kRot180,
  kColorInvert,
  kGrayscale,
  kOptionReverse,
  kOptionCycle,
  kNegation,
  kParaphrase,
};
inline constexpr int kNumPrimitives = 9;

enum class MappingKind : std::uint8_t {
  kIdentity,
  kContentMap,           // semantic relabelling, e.g. left <-> right
  kPositionPermutation,  // option reorder; answer index goes through pi^-1
  kComplement,           // binary negation: the other option
  kComposite,            // chain mixing several of the above
};

std::string to_string(Primitive primitive);
std::string to_string(MappingKind kind);
Primitive parse_primitive(const std::string& name);

// Content-level answer maps of the geometric primitives.
Direction reflect_horizontal(Direction d);
Direction reflect_vertical(Direction d);
Color invert_color(Color c);

// One link of a chain. For every built-in the mapping primitive equals the
// transform primitive; tests build mismatched steps to model broken ops.
struct Step {
  Primitive transform;
  Primitive mapping;

  bool operator==(const Step&) const = default;
};

class DualityOp {
 public:
  static DualityOp primitive(Primitive p);
  // Builds an op from explicit steps (application order).
  static DualityOp from_steps(std::string id, std::vector<Step> steps);

  const std::string& id() const { return id_; }
  // Steps in application order: steps()[0] acts first.
  std::span<const Step> steps() const { return steps_; }
  std::vector<Primitive> transform_chain() const;
  MappingKind mapping_kind() const;
  // Conjunction of per-step restrictions, e.g. "all", "non_color", "binary".
  std::string domain_tag() const;

  bool applicable(const Scene& scene, const Query& query) const;
  // Throws DomainError outside the domain.
  std::pair<Scene, Query> apply(const Scene& scene, const Query& query) const;
  // The query part of T only; visual steps leave queries untouched.
  Query apply_to_query(const Query& query) const;
  // Maps an answer on the original query to an answer on the dual query.
  // Throws DomainError when mapped content is absent from the dual options
  // or when dual_query is not the image of original_query.
  AnswerIndex map_answer(const Query& original_query, const Query& dual_query,
                         AnswerIndex answer) const;

  bool operator==(const DualityOp& other) const { return id_ == other.id_ && steps_ == other.steps_; }

 private:
  DualityOp(std::string id, std::vector<Step> steps) : id_(std::move(id)), steps_(std::move(steps)) {}

  std::string id_;
  std::vector<Step> steps_;
};

// hflip, vflip, rot180, color_invert, grayscale, option_reverse,
// option_cycle, negation, paraphrase.
std::vector<DualityOp> builtin_pool();
DualityOp builtin(const std::string& id);

// compose(first, second) applies `second` and then `first`; the id reads
// "first∘second".
DualityOp compose(const DualityOp& first, const DualityOp& second);

struct AxiomViolation {
  Example original;
  Query dual_query;
  AnswerIndex expected;  // ground truth on the dual input
  AnswerIndex mapped;    // map_answer of the original ground truth
};

struct AxiomReport {
  std::string op_id;
  int samples_tested = 0;
  int violation_count = 0;
  std::vector<AxiomViolation> violations;  // first few counterexamples

  bool passed() const { return samples_tested > 0 && violation_count == 0; }
};

// Samples in-domain examples from the environment and checks
// ground_truth(T(v, q)) == map_answer(ground_truth(v, q)). Throws
// Unsatisfiable if the attempt budget runs out before n_samples are found.
AxiomReport verify_axiom(const DualityOp& op, int n_samples, Rng& rng, const EnvConfig& env);

// Same check over a fixed set of examples; out-of-domain examples are skipped.
AxiomReport verify_axiom_on(const DualityOp& op, std::span<const Example> examples,
                            int max_samples = -1);

// True when both ops agree on applicability, transformed input and answer
// mapping for every example in the probe.
bool behaviorally_equal(const DualityOp& a, const DualityOp& b, std::span<const Example> probe);

// True when the op leaves every in-domain probe input and answer unchanged.
bool behaves_as_identity(const DualityOp& op, std::span<const Example> probe);

// Depth-2 compositions of the built-ins, in a fixed enumeration order, with
// identity-like chains and behavioural duplicates (of built-ins or of earlier
// entries) removed.
std::vector<DualityOp> depth2_candidates(std::span<const Example> probe);

}  // namespace dualcons

#endif  // DUALCONS_DUALITY_H_
