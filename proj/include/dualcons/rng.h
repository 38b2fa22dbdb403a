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

#ifndef DUALCONS_RNG_H_
#define DUALCONS_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>

namespace dualcons {

// Seeded random source. The engine output is fixed by the standard; the
// distributions are implemented here so that streams are identical across
// standard library implementations.
class Rng {
 public:
  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [lo, hi] (inclusive).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Uniform index in [0, n).
  std::size_t index(std::size_t n);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  bool bernoulli(double p);

  // Index drawn proportionally to non-negative weights.
  std::size_t categorical(std::span<const double> weights);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

  std::string serialize() const;
  static Rng deserialize(const std::string& state);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a base seed and a salt.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace dualcons

#endif  // DUALCONS_RNG_H_
