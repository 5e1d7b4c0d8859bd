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


#include "blowup/batch.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "blowup/errors.hpp"
#include "blowup/rng.hpp"

namespace blowup {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Greedy in batch order, each vertex taking its most preferred free
// candidate; Hopcroft–Karp when the greedy pass gets stuck.
std::optional<std::vector<VertexId>> distinct_images(const std::vector<SelectionResult>& sel, std::size_t count,
                                                     std::size_t host_order) {
  std::vector<VertexId> images;
  VertexSet taken(Universe::kHost, host_order);
  for (std::size_t i = 0; i < count; ++i) {
    auto it = std::find_if(sel[i].ranked.begin(), sel[i].ranked.end(), [&](VertexId v) { return !taken.contains(v); });
    if (it == sel[i].ranked.end()) break;
    taken.insert(*it);
    images.push_back(*it);
  }
  if (images.size() == count) return images;

  std::vector<VertexSet> sets;
  for (std::size_t i = 0; i < count; ++i) {
    sets.push_back(VertexSet::of(Universe::kHost, host_order, sel[i].ranked));
  }
  CandidacyGraph g = CandidacyGraph::from_sets(sets);
  MatchingResult m = max_matching(g);
  if (m.size < count) return std::nullopt;
  images.clear();
  for (std::size_t i = 0; i < count; ++i) images.push_back(g.right[static_cast<std::size_t>(m.mate_left[i])]);
  return images;
}

}  // namespace

MisInstance build_mis_instance(const Instance& inst, const EmbeddingState& state) {
  const auto& h = inst.pattern.graph;
  const std::size_t n = h.order();
  MisInstance out;
  out.unavailable = h.empty_set();
  for (VertexId x = 0; x < n; ++x) {
    if (state.embedded(x) || state.is_buffer[x]) out.unavailable.insert(x);
  }
  GraphBuilder b(Universe::kPattern, n);
  for (VertexId x = 0; x < n; ++x) {
    ball(h, x, 3).for_each([&](VertexId y) {
      if (y > x) b.add_edge(x, y);
    });
  }
  const auto unavailable = out.unavailable.members();
  for (std::size_t i = 0; i < unavailable.size(); ++i) {
    for (std::size_t j = i + 1; j < unavailable.size(); ++j) b.add_edge(unavailable[i], unavailable[j]);
  }
  out.aux = std::move(b).build();
  return out;
}

MisResult luby_mis(const Graph& g, std::uint64_t seed) {
  const std::size_t n = g.order();
  MisResult out;
  out.set = g.empty_set();
  VertexSet live = g.all_vertices();
  std::vector<std::uint64_t> priority(n, 0);
  while (!live.empty()) {
    Rng rng = Rng(seed).split(out.iterations);
    ++out.iterations;
    live.for_each([&](VertexId v) { priority[v] = rng.next(); });
    VertexSet joined = g.empty_set();
    live.for_each([&](VertexId v) {
      bool best = true;
      (g.neighbors(v) & live).for_each([&](VertexId u) {
        if (priority[u] < priority[v] || (priority[u] == priority[v] && u < v)) best = false;
      });
      if (best) joined.insert(v);
    });
    out.set |= joined;
    VertexSet removed = joined;
    joined.for_each([&](VertexId v) { removed |= g.neighbors(v); });
    live -= removed;
  }
  return out;
}

BatchSelection batch_select(const Instance& inst, const EmbeddingState& state, const Rational& alpha,
                            std::uint64_t seed) {
  BatchSelection out;
  const auto n_prime = static_cast<std::int64_t>(state.unembedded_count());
  out.target = static_cast<std::size_t>(std::max<std::int64_t>(1, floor_times(alpha, n_prime)));
  MisInstance mis = build_mis_instance(inst, state);
  MisResult r = luby_mis(mis.aux, seed);
  out.mis_iterations = r.iterations;
  VertexSet usable = r.set - mis.unavailable;
  out.mis_size = usable.count();
  for (std::size_t i = state.t; i < state.order.size() && out.vertices.size() < out.target; ++i) {
    if (usable.contains(state.order[i])) out.vertices.push_back(state.order[i]);
  }
  return out;
}

void apply_batch(const Instance& inst, EmbeddingState& state, std::span<const std::pair<VertexId, VertexId>> images) {
  for (auto [x, v] : images) update_after_embedding(inst, state, x, v);
}

bool batch_embed_round(const Instance& inst, EmbeddingState& state, std::vector<VertexId> batch, RunReport& report,
                       BatchRound& round, const EmbedOptions& options) {
  round.batch = batch.size();
  if (batch.empty()) return true;
  std::vector<SelectionResult> sel;
  sel.reserve(batch.size());
  for (VertexId x : batch) {
    sel.push_back(select_image(inst, state, x, options));
    report.candidates_scanned += sel.back().histogram.candidates;
  }

  std::size_t count = batch.size();
  std::optional<std::vector<VertexId>> images;
  while (!(images = distinct_images(sel, count, inst.n()))) {
    if (count == 1) {
      const auto& s = sel.front();
      const std::string kind = s.histogram.candidates == 0 ? "empty-host-set" : "selection-exhausted";
      report.failure = Failure{kind, state.t, batch.front(),
                               "no candidate for pattern vertex " + std::to_string(batch.front()) +
                                   " in a batch round (after " + std::to_string(round.retries) + " halvings)",
                               s.histogram};
      return false;
    }
    count = (count + 1) / 2;
    ++round.retries;
  }

  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (std::size_t i = 0; i < count; ++i) pairs.emplace_back(batch[i], (*images)[i]);
  if (options.on_step) {
    const EmbeddingState selected_in = state;
    for (auto [x, v] : pairs) {
      update_after_embedding(inst, state, x, v);
      options.on_step(selected_in, state, x, v);
    }
  } else {
    apply_batch(inst, state, pairs);
  }
  round.embedded = count;
  report.steps += count;
  for (std::size_t i = 0; i < count; ++i) {
    report.sampled_steps += sel[i].sampled ? 1 : 0;
    if (options.record_steps) report.steps_log.push_back({state.t, batch[i], (*images)[i], false, sel[i].qualifying});
  }
  for (std::size_t i = state.t; i < state.order.size(); ++i) {
    auto size = state.host_sets[state.order[i]].count();
    if (size < report.min_host_set) {
      report.min_host_set = size;
      report.min_host_set_t = state.t;
    }
  }
  if (options.check_invariants) {
    if (auto problem = check_state(inst, state)) {
      report.failure = Failure{"invariant-violation", state.t, std::nullopt, *problem, {}};
      return false;
    }
  }
  return true;
}

std::size_t default_tail_threshold(std::size_t n) {
  if (n <= 1) return n;
  const double t = std::ceil(std::pow(std::log2(static_cast<double>(n)), 5.0));
  return t >= static_cast<double>(n) ? n : static_cast<std::size_t>(t);
}

ParallelMatching parallel_phase2(const CandidacyGraph& g, std::uint64_t seed) {
  ParallelMatching out;
  const std::size_t nl = g.left_size();
  const std::size_t nr = g.right_size();
  std::vector<std::int32_t> mate_left(nl, kUnmatched);
  std::vector<std::int32_t> mate_right(nr, kUnmatched);

  std::vector<std::uint32_t> order(nl);
  for (std::uint32_t i = 0; i < nl; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(std::span<std::uint32_t>(order));
  for (auto u : order) {
    for (VertexId v : g.adjacency[u].members()) {
      if (mate_right[v] == kUnmatched) {
        mate_left[u] = static_cast<std::int32_t>(v);
        mate_right[v] = static_cast<std::int32_t>(u);
        ++out.greedy_size;
        break;
      }
    }
  }

  std::vector<std::uint32_t> free_left;
  std::vector<VertexId> free_right;
  for (std::uint32_t u = 0; u < nl; ++u) {
    if (mate_left[u] == kUnmatched) free_left.push_back(u);
  }
  for (VertexId v = 0; v < nr; ++v) {
    if (mate_right[v] == kUnmatched) free_right.push_back(v);
  }
  out.pairs = std::min(free_left.size(), free_right.size());

  // Vertex-disjoint paths x - v1 = x1 - v (length 3) or
  // x - v1 = x1 - v2 = x2 - v (length 5), "=" a matching edge.
  std::vector<bool> used_left(nl, false);
  std::vector<bool> used_right(nr, false);
  std::vector<std::vector<std::pair<std::uint32_t, VertexId>>> flips;
  bool incomplete = false;
  for (std::size_t k = 0; k < out.pairs; ++k) {
    const std::uint32_t x = free_left[k];
    const VertexId v = free_right[k];
    std::vector<std::pair<std::uint32_t, VertexId>> path;
    auto fresh_mate = [&](VertexId w) -> std::int32_t {
      if (used_right[w] || mate_right[w] == kUnmatched) return kUnmatched;
      auto m = mate_right[w];
      return used_left[static_cast<std::size_t>(m)] ? kUnmatched : m;
    };
    g.adjacency[x].for_each([&](VertexId v1) {
      if (!path.empty()) return;
      auto x1 = fresh_mate(v1);
      if (x1 != kUnmatched && g.adjacency[static_cast<std::size_t>(x1)].contains(v)) {
        path = {{x, v1}, {static_cast<std::uint32_t>(x1), v}};
      }
    });
    if (path.empty()) {
      g.adjacency[x].for_each([&](VertexId v1) {
        if (!path.empty()) return;
        auto x1 = fresh_mate(v1);
        if (x1 == kUnmatched) return;
        g.adjacency[static_cast<std::size_t>(x1)].for_each([&](VertexId v2) {
          if (!path.empty() || v2 == v1) return;
          auto x2 = fresh_mate(v2);
          if (x2 != kUnmatched && x2 != x1 && g.adjacency[static_cast<std::size_t>(x2)].contains(v)) {
            path = {{x, v1}, {static_cast<std::uint32_t>(x1), v2}, {static_cast<std::uint32_t>(x2), v}};
          }
        });
      });
    }
    if (path.empty()) {
      incomplete = true;
      continue;
    }
    used_left[x] = true;
    used_right[v] = true;
    for (auto [a, b] : path) {
      used_left[a] = true;
      used_right[b] = true;
      if (mate_left[a] != kUnmatched) used_right[static_cast<std::size_t>(mate_left[a])] = true;
    }
    flips.push_back(std::move(path));
  }
  for (const auto& path : flips) {
    for (auto [a, b] : path) {
      mate_left[a] = static_cast<std::int32_t>(b);
      mate_right[b] = static_cast<std::int32_t>(a);
    }
  }
  out.paths_flipped = flips.size();

  std::size_t size = 0;
  for (auto m : mate_left) size += m != kUnmatched ? 1 : 0;
  if (incomplete || size < nl) {
    out.used_fallback = true;
    out.matching = max_matching(g, mate_left);
    out.fallback_augmentations = out.matching.size - size;
  } else {
    out.matching = max_matching(g, mate_left);
  }
  return out;
}

namespace {

void finish(const Instance& inst, const EmbeddingState& state, BatchedRun& out) {
  auto verdict = verify_embedding(inst, state.phi);
  if (!verdict.ok) {
    out.report.failure = Failure{"verification-failure", state.t, std::nullopt,
                                 verdict.violations.front().kind + ": " + verdict.violations.front().message, {}};
    return;
  }
  out.report.success = true;
  out.report.embedding = state.phi;
}

}  // namespace

BatchedRun run_batched(const Instance& inst, const Rational& alpha, std::optional<std::size_t> tail_threshold,
                       std::optional<std::uint64_t> mis_seed, const EmbedOptions& options) {
  BatchedRun out;
  RunReport& report = out.report;
  RoundLog& log = out.log;
  EmbeddingState& state = out.state;
  const auto start = Clock::now();
  try {
    state = preprocess(inst, &report, options.strict_buffers);
  } catch (const PreprocessingFailure& e) {
    report.failure = Failure{"preprocessing-failure", 0, std::nullopt, e.what(), {}};
    return out;
  }
  log.tail_threshold = tail_threshold.value_or(default_tail_threshold(inst.n()));
  const std::uint64_t seed = mis_seed.value_or(Rng(inst.seed).split(SeedStream::kMis).seed());

  bool ok = run_due_sweeps(inst, state, report, options);
  while (ok && state.unembedded_non_buffer_count() > 0) {
    while (ok && state.unembedded_non_buffer_count() > 0 && state.forced[state.order[state.t]]) {
      ok = embed_step(inst, state, report, options) && run_due_sweeps(inst, state, report, options);
      ++log.sequential_steps;
    }
    if (!ok || state.unembedded_non_buffer_count() == 0 || state.unembedded_count() <= log.tail_threshold) break;

    BatchRound round;
    round.t = state.t;
    round.unembedded = state.unembedded_count();
    BatchSelection sel = batch_select(inst, state, alpha, Rng(seed).split(log.rounds.size()).seed());
    round.target = sel.target;
    round.mis_size = sel.mis_size;
    round.mis_iterations = sel.mis_iterations;
    ok = batch_embed_round(inst, state, std::move(sel.vertices), report, round, options);
    log.rounds.push_back(round);
    if (ok && round.embedded == 0) {
      report.failure = Failure{"batch-failure", state.t, std::nullopt, "batch selection found no vertex", {}};
      ok = false;
    }
    ok = ok && run_due_sweeps(inst, state, report, options);
  }
  report.phase1_seconds = seconds_since(start);
  if (report.failure) return out;

  log.tail_size = state.unembedded_count();
  const std::size_t steps_before = report.steps;
  continue_phase1(inst, state, report, options);
  log.sequential_steps += report.steps - steps_before;
  if (report.failure) return out;

  // With no batching at all the run is the sequential one, Phase 2 included.
  if (log.tail_threshold >= inst.n()) {
    if (!run_phase2(inst, state, report)) return out;
    finish(inst, state, out);
    return out;
  }

  const auto phase2_start = Clock::now();
  const Rng audit_rng = Rng(inst.seed).split(SeedStream::kAudit).split(0xFFFF);
  const Rng match_rng = Rng(seed).split(0xFFFF);
  for (std::uint32_t c = 0; c < inst.r(); ++c) {
    std::vector<VertexId> left;
    for (std::size_t i = state.t; i < state.order.size(); ++i) {
      if (inst.pattern.assignment[state.order[i]] == c) left.push_back(state.order[i]);
    }
    const VertexSet remaining = inst.host.cluster(c) - state.occupied;
    std::vector<VertexSet> sets;
    for (VertexId x : left) sets.push_back(state.host_sets[x]);

    Phase2Cluster p2;
    p2.cluster = c;
    p2.m = left.size();
    p2.hall = hall_audit(sets, remaining, inst.params.d3, audit_rng.split(c).seed());
    if (!p2.hall.min_set_ok) report.warnings.push_back("phase 2 cluster " + std::to_string(c) + ": min-set condition fails");
    if (!p2.hall.union_ok) report.warnings.push_back("phase 2 cluster " + std::to_string(c) + ": union condition fails");
    if (!p2.hall.coverage_ok) report.warnings.push_back("phase 2 cluster " + std::to_string(c) + ": coverage condition fails");

    CandidacyGraph cg = CandidacyGraph::from_sets(sets, remaining);
    ParallelMatching pm = parallel_phase2(cg, match_rng.split(c).seed());
    ++log.phase2_rounds;
    log.phase2_paths += pm.paths_flipped;
    log.phase2_fallbacks += pm.used_fallback ? 1 : 0;
    p2.matching_size = pm.matching.size;
    p2.phases = pm.matching.phases;
    p2.perfect = pm.matching.perfect;
    if (pm.matching.size < left.size()) {
      if (pm.matching.hall_witness) {
        for (auto i : *pm.matching.hall_witness) p2.hall_witness.push_back(left[i]);
      }
      report.failure = Failure{"phase2-hall-violation", state.t, std::nullopt,
                               "no system of distinct representatives in cluster " + std::to_string(c) + " (" +
                                   std::to_string(pm.matching.size) + " of " + std::to_string(left.size()) + " matched)",
                               {}};
      report.phase2.push_back(std::move(p2));
      report.phase2_seconds = seconds_since(phase2_start);
      return out;
    }
    for (std::size_t i = 0; i < left.size(); ++i) {
      update_after_embedding(inst, state, left[i], cg.right[static_cast<std::size_t>(pm.matching.mate_left[i])]);
    }
    report.phase2.push_back(std::move(p2));
  }
  report.phase2_seconds = seconds_since(phase2_start);
  finish(inst, state, out);
  return out;
}

}  // namespace blowup
