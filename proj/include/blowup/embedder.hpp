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

// Two-phase deterministic embedding of a bounded-degree pattern H into a
// super-regular blow-up host G.
//
// Phase 1 embeds the pattern vertices one at a time in the order S. Every
// unembedded y carries a candidate set C(y) (host vertices adjacent to the
// images of all embedded neighbours of y) and a host set Hs(y) = C(y) minus
// occupied vertices. A new image is picked by the selection step, which keeps
// the degree of the chosen vertex into every affected C/Hs set inside a
// density window. Periodic sweeps pull forward pattern vertices whose host
// set became small, and once the neighbourhoods of the buffer vertices are
// embedded, host vertices covered by too few buffer candidate sets are
// claimed early. Phase 2 places the buffer vertices with a system of distinct
// representatives per cluster.

#ifndef BLOWUP_EMBEDDER_HPP
#define BLOWUP_EMBEDDER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "blowup/errors.hpp"
#include "blowup/graph.hpp"
#include "blowup/instance.hpp"
#include "blowup/matching.hpp"

namespace blowup {

inline constexpr VertexId kNoImage = std::numeric_limits<VertexId>::max();

struct EmbeddingState {
  std::size_t t = 0;
  /// order[0, t) are embedded in embedding order; order[t, n) is the
  /// remaining sequence.
  std::vector<VertexId> order;
  std::vector<VertexId> phi;  // kNoImage when unembedded
  std::vector<VertexSet> candidates;  // C(y); frozen once y is embedded
  std::vector<VertexSet> host_sets;   // Hs(y); frozen once y is embedded
  std::vector<std::vector<VertexId>> buffers;  // B_i
  std::vector<bool> is_buffer;
  VertexSet occupied;

  /// Pattern vertices pulled forward by the host-exceptional sweep, and the
  /// per-cluster pool of exceptional host vertices they must consume.
  std::vector<bool> forced;
  std::vector<VertexSet> exceptional_pool;
  bool host_sweep_done = false;

  std::size_t m = 0;
  std::size_t t0 = 0;
  std::size_t t1 = 1;
  std::size_t pattern_sweep_mark = 0;  // t / T1 at the last pattern sweep
  std::optional<std::size_t> big_t;  // T, set when Phase 1 ends
  std::uint64_t selection_seed = 0;

  bool embedded(VertexId x) const { return phi[x] != kNoImage; }
  std::size_t unembedded_count() const { return order.size() - t; }
  std::size_t unembedded_non_buffer_count() const;

  friend bool operator==(const EmbeddingState&, const EmbeddingState&) = default;
};

struct EmbedOptions {
  /// Pairwise window: evaluated over all same-cluster unembedded vertices up
  /// to this many, otherwise over a seeded sample of this size.
  std::size_t pairwise_exact_limit = 64;
  /// Run audit_state at every pattern sweep and at time T.
  bool audit = true;
  /// Check the state invariants after every step; a violation aborts the run
  /// with failure kind "invariant-violation".
  bool check_invariants = false;
  /// Keep one StepRecord per embedded vertex in the report.
  bool record_steps = false;
  /// Fail preprocessing instead of reducing the buffer count.
  bool strict_buffers = false;
  /// Called after every Phase 1 embedding with the state the image was
  /// selected in (for a batch round, the state before the round) and the
  /// state right after the update. Setting it makes the embedder copy states.
  std::function<void(const EmbeddingState& before, const EmbeddingState& after, VertexId x, VertexId v)> on_step;
};

struct FailureHistogram {
  std::size_t candidates = 0;
  std::size_t fail_host_window = 0;
  std::size_t fail_candidate_window = 0;
  std::size_t fail_pairwise = 0;
};

struct Failure {
  std::string kind;  // selection-exhausted, empty-host-set, sweep-failure, preprocessing-failure,
                     // phase2-hall-violation, batch-failure, invariant-violation, verification-failure
  std::size_t t = 0;
  std::optional<VertexId> vertex;
  std::string message;
  FailureHistogram histogram;
};

struct SelectionResult {
  std::optional<VertexId> image;
  FailureHistogram histogram;
  std::size_t qualifying = 0;
  /// Every qualifying candidate, best first under the tie-breaking rule.
  std::vector<VertexId> ranked;
  bool forced = false;
  bool sampled = false;
  /// Smallest slack (passes - required) of the pairwise condition over the
  /// affected neighbours; meaningful when some neighbour was checked.
  std::int64_t pairwise_slack = std::numeric_limits<std::int64_t>::max();
};

struct StepRecord {
  std::size_t t = 0;  // time after the step
  VertexId x = 0;
  VertexId v = 0;
  bool forced = false;
  std::size_t qualifying = 0;
};

struct SweepRecord {
  std::size_t t = 0;
  std::vector<std::size_t> per_cluster;  // exceptional pattern vertices found
  std::size_t total = 0;
  double bound = 0.0;  // (d3)^2 N per cluster
  bool within_bound = true;
};

struct HostSweepRecord {
  std::size_t t = 0;
  std::vector<std::size_t> exceptional;  // |E_i|
  double threshold_fraction = 0.0;       // coverage threshold d2 |B_i| (clamped at 1)
  double bound = 0.0;                    // eps2 N
  bool within_bound = true;
  std::vector<VertexId> pulled;  // the set E
  std::size_t relaxed = 0;       // members of E closer than 4 to E or to embedded vertices
};

struct ClusterAudit {
  std::uint32_t cluster = 0;
  std::size_t unembedded = 0;   // |S|
  bool applicable = false;      // |S| >= d3^2 N
  double ut_density = 0.0;      // d(U_t)
  std::size_t min_degree = 0;   // min over v of deg_{U_t}(v)
  std::size_t below_relative = 0;  // v with deg < (1 - eps2) d(U_t) |S|
  std::size_t below_absolute = 0;  // v with deg < (delta^Delta / 2) |S|
  double exceptional_bound = 0.0;  // eps2 N
  bool degree_profile_ok = true;
  std::size_t sample_trials = 0;
  std::size_t sample_failures = 0;  // x with |A ∩ C(x)| < (|A|/2N)|C(x)|, summed over trials
  double sample_bound = 0.0;        // d3^2 N per trial
  bool sample_ok = true;
};

struct AuditRecord {
  std::size_t t = 0;
  std::size_t min_host_set = 0;  // over unembedded y
  std::optional<VertexId> min_host_set_vertex;
  double host_set_threshold = 0.0;  // d2 N
  bool host_set_ok = true;
  std::vector<ClusterAudit> clusters;
};

struct Phase2Cluster {
  std::uint32_t cluster = 0;
  std::size_t m = 0;
  std::size_t matching_size = 0;
  std::size_t phases = 0;
  bool perfect = false;
  HallAudit hall;
  std::vector<std::uint32_t> hall_witness;  // pattern vertices, when not perfect
};

struct RunReport {
  bool success = false;
  std::optional<Failure> failure;
  std::vector<VertexId> embedding;  // total on success

  // Phase 1
  std::size_t steps = 0;
  std::size_t candidates_scanned = 0;
  std::size_t forced_steps = 0;
  std::size_t sampled_steps = 0;
  std::int64_t min_pairwise_slack = std::numeric_limits<std::int64_t>::max();
  std::vector<SweepRecord> sweeps;
  std::optional<HostSweepRecord> host_sweep;
  std::size_t big_t = 0;
  std::size_t t0 = 0;
  std::size_t t1 = 0;
  std::size_t buffers = 0;
  /// Smallest |Hs(y)| over unembedded y seen after any step, and when.
  std::size_t min_host_set = std::numeric_limits<std::size_t>::max();
  std::size_t min_host_set_t = 0;
  std::vector<StepRecord> steps_log;

  // Phase 2
  std::vector<Phase2Cluster> phase2;

  std::vector<AuditRecord> audits;
  std::vector<std::string> clamped;
  std::vector<std::string> warnings;

  double phase1_seconds = 0.0;
  double phase2_seconds = 0.0;
};

/// Buffers, order S, initial C/Hs sets, thresholds. Records clamped
/// thresholds into `report` when given. When fewer than ceil(d1 N) buffers
/// fit in some cluster, throws PreprocessingFailure if `strict_buffers`,
/// otherwise keeps the achievable buffers and flags the clamp.
EmbeddingState preprocess(const Instance& inst, RunReport* report = nullptr, bool strict_buffers = false);

/// The selection step for x (the next vertex of S). Does not modify state.
SelectionResult select_image(const Instance& inst, const EmbeddingState& state, VertexId x,
                             const EmbedOptions& options = {});

/// Embeds x at v and updates every C/Hs set; x is moved to position t of the
/// order if it is not already there. Advances t.
void update_after_embedding(const Instance& inst, EmbeddingState& state, VertexId x, VertexId v);

/// Pulls unembedded y with |Hs(y)| <= d1^2 n to the front of the remaining
/// order, stably.
SweepRecord sweep_exceptional_pattern(const Instance& inst, EmbeddingState& state);

/// Claims host vertices covered by fewer than d2 |B_i| buffer candidate sets.
/// Throws SweepFailure when too few untouched pattern vertices exist.
HostSweepRecord sweep_exceptional_host(const Instance& inst, EmbeddingState& state);

class SweepFailure : public Error {
 public:
  using Error::Error;
};

/// Read-only audit of the quantities the correctness argument tracks.
AuditRecord audit_state(const Instance& inst, const EmbeddingState& state, std::uint64_t seed);

/// Phase 1 to completion. On failure, report.failure is set and the state is
/// left at the failing time.
EmbeddingState run_phase1(const Instance& inst, RunReport& report, const EmbedOptions& options = {});

/// One Phase 1 step for the vertex at position t: selection, update and
/// bookkeeping. Returns false with report.failure set when selection fails.
bool embed_step(const Instance& inst, EmbeddingState& state, RunReport& report, const EmbedOptions& options = {});

/// Runs the pattern sweep when t crossed a multiple of T1 since the last one, and
/// the host sweep once t >= T0. Returns false with report.failure set on a sweep
/// failure.
bool run_due_sweeps(const Instance& inst, EmbeddingState& state, RunReport& report, const EmbedOptions& options = {});

/// Sequential Phase 1 from the current state until no unembedded non-buffer
/// vertex remains; sets T.
void continue_phase1(const Instance& inst, EmbeddingState& state, RunReport& report, const EmbedOptions& options = {});

/// Phase 2 over the state left by Phase 1: per-cluster SDR of the host sets.
/// Fills report.phase2; returns false (and sets report.failure) on a Hall
/// violation.
bool run_phase2(const Instance& inst, EmbeddingState& state, RunReport& report);

/// Both phases plus final verification. The state at the end of the run
/// (at the failing time on failure) is stored in `final_state` when given.
RunReport run(const Instance& inst, const EmbedOptions& options = {}, EmbeddingState* final_state = nullptr);

struct Violation {
  std::string kind;  // totality, injectivity, assignment, edge, restriction
  std::string message;
};

struct EmbeddingVerdict {
  bool ok = true;
  std::vector<Violation> violations;
};

EmbeddingVerdict verify_embedding(const Instance& inst, std::span<const VertexId> phi);

/// Cheap structural invariants of a state: Hs ⊆ C ⊆ cluster, Hs ∩ occupied
/// = ∅, phi injective and edge-preserving, order a permutation consistent
/// with phi. Returns the first violation found.
std::optional<std::string> check_state(const Instance& inst, const EmbeddingState& state);

/// Every embedded vertex adjacent to at most one buffer, and buffers pairwise
/// at distance >= 4.
std::optional<std::string> check_buffers(const Instance& inst, const EmbeddingState& state);

}  // namespace blowup

#endif  // BLOWUP_EMBEDDER_HPP
