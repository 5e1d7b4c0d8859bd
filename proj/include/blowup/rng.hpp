// Copyright 2026 The Blowup Authors
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

#ifndef BLOWUP_RNG_HPP
#define BLOWUP_RNG_HPP

#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include "blowup/rational.hpp"

namespace blowup {

/// Stream tags for the documented seed split schedule. Every random decision
/// in the library draws from `Rng(seed).split(tag)` for one of these tags (or
/// a further split of it), so reruns with the same root seed are bit-exact.
enum class SeedStream : std::uint64_t {
  kGenerator = 1,  // host pairs, random trees, restriction sets
  kSelection = 2,  // pairwise-condition sampling inside the selection step
  kMis = 3,        // Luby rounds in batched mode
  kAudit = 4,      // sampled audit subsets
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded, splittable generator. The engine is mt19937_64, whose output
/// sequence is fixed by the standard; bounded draws use our own rejection
/// sampling so results do not depend on the library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent child stream; does not advance this generator.
  Rng split(std::uint64_t stream) const { return Rng(mix64(seed_ ^ mix64(stream + 0x5851f42d4c957f2dULL))); }
  Rng split(SeedStream stream) const { return split(static_cast<std::uint64_t>(stream)); }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// True with probability exactly p (p in [0,1]).
  bool bernoulli(const Rational& p) {
    return static_cast<std::int64_t>(below(static_cast<std::uint64_t>(p.denominator()))) < p.numerator();
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace blowup

#endif  // BLOWUP_RNG_HPP
