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


// Round-based batched embedding: each round picks a set of unembedded pattern
// vertices pairwise at distance >= 4 with a maximal independent set, gives
// them distinct images at once, and applies the updates in any order. The
// last vertices are placed sequentially. Phase 2 is completed from a greedy
// maximal matching by flipping short alternating paths.

#ifndef BLOWUP_BATCH_HPP
#define BLOWUP_BATCH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "blowup/embedder.hpp"
#include "blowup/graph.hpp"
#include "blowup/instance.hpp"
#include "blowup/matching.hpp"
#include "blowup/rational.hpp"

namespace blowup {

/// Auxiliary graph on pattern vertices: x ~ y when 1 <= dist_H(x, y) <= 3 or
/// both are unavailable (embedded, or buffers kept for Phase 2).
struct MisInstance {
  Graph aux;
  VertexSet unavailable;  // Universe::kPattern
};

MisInstance build_mis_instance(const Instance& inst, const EmbeddingState& state);

struct MisResult {
  VertexSet set;
  std::size_t iterations = 0;  // Luby rounds
};

/// Luby's algorithm run round by round: every live vertex draws a random
/// priority and joins when it beats all live neighbours; joiners and their
/// neighbours leave. Deterministic per seed.
MisResult luby_mis(const Graph& g, std::uint64_t seed);

struct BatchSelection {
  std::vector<VertexId> vertices;  // in order S
  std::size_t target = 0;          // max(1, floor(alpha n'))
  std::size_t mis_size = 0;
  std::size_t mis_iterations = 0;
};

/// Up to max(1, floor(alpha n')) unembedded non-buffer vertices pairwise at
/// distance >= 4, the earliest in order S among an MIS of the auxiliary graph.
BatchSelection batch_select(const Instance& inst, const EmbeddingState& state, const Rational& alpha,
                            std::uint64_t seed);

struct BatchRound {
  std::size_t t = 0;           // time before the round
  std::size_t unembedded = 0;  // n'
  std::size_t target = 0;
  std::size_t mis_size = 0;
  std::size_t mis_iterations = 0;
  std::size_t batch = 0;     // vertices offered to the round
  std::size_t embedded = 0;  // representatives found
  std::size_t retries = 0;   // halvings after a failed SDR
};

struct RoundLog {
  std::vector<BatchRound> rounds;
  std::size_t tail_threshold = 0;
  std::size_t tail_size = 0;         // unembedded vertices when the sequential tail began
  std::size_t sequential_steps = 0;  // forced and tail steps placed one at a time
  std::size_t phase2_rounds = 0;     // path-flipping rounds, one per cluster
  std::size_t phase2_paths = 0;
  std::size_t phase2_fallbacks = 0;
  std::size_t total_rounds() const { return rounds.size() + sequential_steps + phase2_rounds; }
};

/// Embeds `batch` at once. Each vertex's qualifying candidates come from the
/// selection step; distinct representatives are taken greedily in order of
/// preference, falling back to a maximum matching. When none exists the first
/// half of the batch is retried. Returns false with report.failure set
/// ("batch-failure" or the selection failure of a single vertex).
bool batch_embed_round(const Instance& inst, EmbeddingState& state, std::vector<VertexId> batch, RunReport& report,
                       BatchRound& round, const EmbedOptions& options = {});

/// Applies the images of a batch in the given order.
void apply_batch(const Instance& inst, EmbeddingState& state, std::span<const std::pair<VertexId, VertexId>> images);

/// Default tail threshold: ceil((log2 n)^5), capped at n.
std::size_t default_tail_threshold(std::size_t n);

struct BatchedRun {
  RunReport report;
  RoundLog log;
  EmbeddingState state;  // at the end of the run, or at the failing time
};

/// Batched Phase 1 while more than `tail_threshold` vertices are unembedded,
/// then the sequential Phase 1, then Phase 2 completed by parallel_phase2.
/// With tail_threshold >= n the run is the sequential one, Phase 2 included,
/// and returns the same embedding as run().
BatchedRun run_batched(const Instance& inst, const Rational& alpha, std::optional<std::size_t> tail_threshold = {},
                       std::optional<std::uint64_t> mis_seed = {}, const EmbedOptions& options = {});

struct ParallelMatching {
  MatchingResult matching;
  std::size_t greedy_size = 0;
  std::size_t pairs = 0;          // unmatched left vertices paired with unmatched right vertices
  std::size_t paths_flipped = 0;  // alternating paths of length 3 or 5
  std::size_t fallback_augmentations = 0;
  bool used_fallback = false;
};

/// Greedy maximal matching in a seeded left order, then vertex-disjoint
/// alternating paths of length at most 5 between paired free vertices, each
/// flipped; pairs without such a path are completed by augmenting paths.
ParallelMatching parallel_phase2(const CandidacyGraph& g, std::uint64_t seed);

}  // namespace blowup

#endif  // BLOWUP_BATCH_HPP
