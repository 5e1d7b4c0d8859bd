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

// Maximum bipartite matching and systems of distinct representatives for
// the final completion step, with Hall-condition diagnostics.

#ifndef BLOWUP_MATCHING_HPP
#define BLOWUP_MATCHING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "blowup/graph.hpp"
#include "blowup/rational.hpp"

namespace blowup {

inline constexpr std::int32_t kUnmatched = -1;

/// Left vertex i may take right vertex j iff adjacency[i] contains j. Left and
/// right keep the original (pattern / host) ids for reporting.
struct CandidacyGraph {
  std::vector<VertexId> left;
  std::vector<VertexId> right;
  std::vector<VertexSet> adjacency;  // Universe::kLocal over right.size()

  /// Right side = union of all sets; left i ↔ sets[i].
  static CandidacyGraph from_sets(std::span<const VertexSet> sets);
  /// Explicit right side `right` (host ids); entries of sets outside it are dropped.
  static CandidacyGraph from_sets(std::span<const VertexSet> sets, const VertexSet& right);

  std::size_t left_size() const noexcept { return left.size(); }
  std::size_t right_size() const noexcept { return right.size(); }
  std::size_t edge_count() const;
};

struct MatchingResult {
  std::vector<std::int32_t> mate_left;   // right index or kUnmatched
  std::vector<std::int32_t> mate_right;  // left index or kUnmatched
  std::size_t size = 0;
  /// Every vertex on both sides matched.
  bool perfect = false;
  /// Left indices S with |N(S)| < |S|; present iff some left vertex is unmatched.
  std::optional<std::vector<std::uint32_t>> hall_witness;
  std::size_t phases = 0;  // BFS layering rounds

  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs() const;
};

/// Hopcroft–Karp. Deterministic: adjacency is scanned in index order.
MatchingResult max_matching(const CandidacyGraph& g);

/// Hopcroft–Karp continued from an initial matching (mate per left vertex,
/// kUnmatched for free ones).
MatchingResult max_matching(const CandidacyGraph& g, std::span<const std::int32_t> initial_mate_left);

/// True iff `m` is a valid matching of g (edges exist, mates consistent).
bool is_valid_matching(const CandidacyGraph& g, const MatchingResult& m);

/// |N(S)| for left indices S.
std::size_t neighbourhood_size(const CandidacyGraph& g, std::span<const std::uint32_t> s);

struct SdrResult {
  /// representatives[i] ∈ sets[i], pairwise distinct; present iff one exists.
  std::optional<std::vector<VertexId>> representatives;
  /// Indices of sets whose union is smaller than their number.
  std::optional<std::vector<std::uint32_t>> hall_witness;
  MatchingResult matching;
};

SdrResult sdr(std::span<const VertexSet> sets);

/// Checks of the three Hall-type conditions on sets H_x (x ∈ X) over the
/// remaining host vertices Y, M = |X|:
///   min set:  |H_x| > d3 M for all x
///   union:    |∪_{x∈S} H_x| >= (1 - d3) M for sampled S with |S| >= d3 M
///   coverage: every y ∈ Y lies in >= d3 M of the sets
struct HallAudit {
  std::size_t m = 0;
  bool min_set_ok = true;
  std::size_t min_set_size = 0;
  double min_set_threshold = 0.0;
  bool union_ok = true;
  std::size_t union_samples = 0;
  std::size_t union_failures = 0;
  double union_min_margin = 0.0;  // min over samples of |∪| - (1 - d3) M
  bool coverage_ok = true;
  std::size_t min_coverage = 0;
  double coverage_threshold = 0.0;
};

HallAudit hall_audit(std::span<const VertexSet> sets, const VertexSet& remaining, const Rational& d3,
                     std::uint64_t seed, std::size_t samples = 200);

}  // namespace blowup

#endif  // BLOWUP_MATCHING_HPP
