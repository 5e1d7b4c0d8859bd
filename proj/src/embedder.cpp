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

#include "blowup/embedder.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "blowup/rng.hpp"
#include "blowup/window.hpp"

namespace blowup {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::int64_t as_i64(std::size_t v) { return static_cast<std::int64_t>(v); }

/// max(1, floor(gamma * count)), noting in `clamped` when the floor bound.
std::size_t floored_count(const Rational& gamma, std::size_t count, const char* name,
                          std::vector<std::string>* clamped) {
  auto raw = floor_times(gamma, as_i64(count));
  if (raw < 1) {
    if (clamped != nullptr) clamped->push_back(name);
    return 1;
  }
  return static_cast<std::size_t>(raw);
}

/// Vertices within distance 3 of any vertex in `sources`.
VertexSet radius3_zone(const Graph& g, const VertexSet& sources) {
  VertexSet reached = sources;
  VertexSet frontier = sources;
  for (int step = 0; step < 3 && !frontier.empty(); ++step) {
    VertexSet next = g.empty_set();
    frontier.for_each([&](VertexId u) { next |= g.neighbors(u); });
    next -= reached;
    reached |= next;
    frontier = std::move(next);
  }
  return reached;
}

std::vector<bool> restricted_mask(const Instance& inst) {
  std::vector<bool> mask(inst.pattern.order(), false);
  for (const auto& r : inst.restrictions) mask[r.vertex] = true;
  return mask;
}

void stable_front(EmbeddingState& state, const std::vector<bool>& pull) {
  auto begin = state.order.begin() + static_cast<std::ptrdiff_t>(state.t);
  std::stable_partition(begin, state.order.end(), [&](VertexId y) { return pull[y]; });
}

}  // namespace

std::size_t EmbeddingState::unembedded_non_buffer_count() const {
  std::size_t c = 0;
  for (std::size_t i = t; i < order.size(); ++i) c += is_buffer[order[i]] ? 0 : 1;
  return c;
}

// ---------------------------------------------------------------------------
// Preprocessing

EmbeddingState preprocess(const Instance& inst, RunReport* report, bool strict_buffers) {
  const auto& h = inst.pattern.graph;
  const auto& params = inst.params;
  const std::size_t n = inst.n();
  const std::size_t r = inst.r();
  const std::size_t big_n = inst.n_per_cluster();
  std::vector<std::string>* clamped = report != nullptr ? &report->clamped : nullptr;

  EmbeddingState s;
  s.phi.assign(n, kNoImage);
  s.is_buffer.assign(n, false);
  s.forced.assign(n, false);
  s.occupied = VertexSet(Universe::kHost, n);
  s.exceptional_pool.assign(r, VertexSet(Universe::kHost, n));
  s.selection_seed = Rng(inst.seed).split(SeedStream::kSelection).seed();

  // Buffer count per cluster: ceil(d1 N), at least one.
  auto per_cluster = static_cast<std::size_t>(std::max<std::int64_t>(1, ceil_times(params.d1, as_i64(big_n))));
  if (params.d1 * as_i64(big_n) < 1 && clamped != nullptr) clamped->push_back("buffer-count");
  per_cluster = std::min(per_cluster, big_n);

  // Greedy in vertex order within each class, clusters taking turns; a chosen
  // buffer forbids its radius-3 ball.
  const auto restricted = restricted_mask(inst);
  s.buffers.assign(r, {});
  std::vector<std::vector<VertexId>> classes(r);
  for (std::uint32_t i = 0; i < r; ++i) classes[i] = inst.pattern.cluster_class(i);
  std::vector<std::size_t> cursor(r, 0);
  VertexSet forbidden = h.empty_set();
  for (bool progress = true; progress;) {
    progress = false;
    for (std::uint32_t i = 0; i < r; ++i) {
      if (s.buffers[i].size() >= per_cluster) continue;
      auto& k = cursor[i];
      while (k < classes[i].size() && (forbidden.contains(classes[i][k]) || restricted[classes[i][k]])) ++k;
      if (k == classes[i].size()) continue;
      VertexId x = classes[i][k++];
      s.buffers[i].push_back(x);
      s.is_buffer[x] = true;
      forbidden |= ball(h, x, 3);
      progress = true;
    }
  }
  bool short_of_buffers = false;
  std::string counts;
  for (std::size_t i = 0; i < r; ++i) {
    counts += (i ? "," : "") + std::to_string(s.buffers[i].size());
    short_of_buffers = short_of_buffers || s.buffers[i].size() < per_cluster;
  }
  if (short_of_buffers) {
    if (strict_buffers) {
      throw PreprocessingFailure("only " + counts + " of " + std::to_string(per_cluster) +
                                 " buffer vertices per cluster at pairwise distance >= 4 are achievable");
    }
    if (report != nullptr) {
      report->clamped.push_back("buffer-count");
      report->warnings.push_back("buffer count reduced from " + std::to_string(per_cluster) +
                                 " per cluster to the achievable " + counts);
    }
  }
  for (const auto& b : s.buffers) s.m += b.size();

  // S = N(b_1), ..., N(b_m), restricted vertices, the rest, buffers.
  std::vector<bool> placed(n, false);
  for (const auto& cluster_buffers : s.buffers) {
    for (VertexId b : cluster_buffers) {
      h.neighbors(b).for_each([&](VertexId y) {
        if (!placed[y]) {
          placed[y] = true;
          s.order.push_back(y);
        }
      });
    }
  }
  s.t0 = s.order.size();
  for (const auto& res : inst.restrictions) {
    if (!placed[res.vertex]) {
      placed[res.vertex] = true;
      s.order.push_back(res.vertex);
    }
  }
  for (VertexId x = 0; x < n; ++x) {
    if (!placed[x] && !s.is_buffer[x]) {
      placed[x] = true;
      s.order.push_back(x);
    }
  }
  for (const auto& cluster_buffers : s.buffers) {
    for (VertexId b : cluster_buffers) s.order.push_back(b);
  }

  s.candidates.reserve(n);
  for (VertexId x = 0; x < n; ++x) s.candidates.push_back(inst.host.cluster(inst.pattern.assignment[x]));
  for (const auto& res : inst.restrictions) s.candidates[res.vertex] = res.allowed;
  s.host_sets = s.candidates;

  s.t1 = floored_count(params.d2, n, "T1", clamped);
  floored_count(params.d1 * params.d1, n, "pattern-exceptional-threshold", clamped);
  if (params.d2 * as_i64(per_cluster) < 1 && clamped != nullptr) clamped->push_back("host-coverage-threshold");

  if (report != nullptr) {
    report->t0 = s.t0;
    report->t1 = s.t1;
    report->buffers = s.m;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Selection

SelectionResult select_image(const Instance& inst, const EmbeddingState& state, VertexId x,
                             const EmbedOptions& options) {
  const auto& h = inst.pattern.graph;
  const auto& g = inst.host.graph;
  const auto& psi = inst.pattern.assignment;
  SelectionResult result;

  VertexSet pool = state.host_sets[x];
  const auto& ex_pool = state.exceptional_pool[psi[x]];
  if (state.forced[x] && !ex_pool.empty()) {
    pool &= ex_pool;
    result.forced = true;
  }
  result.histogram.candidates = pool.count();
  if (pool.empty()) return result;

  struct Neighbour {
    VertexId y;
    DensityWindow window;
    std::size_t host_size;
    std::size_t cand_size;
    std::vector<VertexSet> pair_sets;  // C(y) ∩ C(y') for the checked y'
    std::vector<std::size_t> pair_sizes;
    std::size_t required;              // passes needed among pair_sets
  };
  std::vector<Neighbour> affected;
  const Rational keep = Rational(1) - inst.params.eps1;
  h.neighbors(x).for_each([&](VertexId y) {
    if (state.embedded(y)) return;
    Neighbour nb{y, DensityWindow::around(inst.host.clusters.density(psi[x], psi[y]), inst.params.eps),
                 state.host_sets[y].count(), state.candidates[y].count(), {}, {}, 0};
    std::vector<VertexId> same;
    for (std::size_t i = state.t; i < state.order.size(); ++i) {
      VertexId z = state.order[i];
      if (z != x && psi[z] == psi[y]) same.push_back(z);
    }
    if (same.size() > options.pairwise_exact_limit) {
      Rng rng = Rng(state.selection_seed).split(state.t).split(y);
      for (std::size_t i = 0; i < options.pairwise_exact_limit; ++i) {
        std::swap(same[i], same[i + rng.below(same.size() - i)]);
      }
      same.resize(options.pairwise_exact_limit);
      result.sampled = true;
    }
    for (VertexId z : same) {
      nb.pair_sets.push_back(state.candidates[y] & state.candidates[z]);
      nb.pair_sizes.push_back(nb.pair_sets.back().count());
    }
    nb.required = static_cast<std::size_t>(std::max<std::int64_t>(0, ceil_times(keep, as_i64(same.size()))));
    affected.push_back(std::move(nb));
  });

  struct Scored {
    std::size_t score;
    std::int64_t slack;
    VertexId v;
  };
  std::vector<Scored> scored;
  pool.for_each([&](VertexId v) {
    const auto& nv = g.neighbors(v);
    std::size_t score = std::numeric_limits<std::size_t>::max();
    std::int64_t slack = std::numeric_limits<std::int64_t>::max();
    for (const auto& nb : affected) {
      std::size_t into_host = intersection_count(nv, state.host_sets[nb.y]);
      if (!nb.window.contains(into_host, nb.host_size)) {
        ++result.histogram.fail_host_window;
        return;
      }
      if (!nb.window.contains(intersection_count(nv, state.candidates[nb.y]), nb.cand_size)) {
        ++result.histogram.fail_candidate_window;
        return;
      }
      const std::size_t allowed_fail = nb.pair_sets.size() - nb.required;
      std::size_t fails = 0;
      for (std::size_t k = 0; k < nb.pair_sets.size(); ++k) {
        if (!nb.window.contains(intersection_count(nv, nb.pair_sets[k]), nb.pair_sizes[k]) && ++fails > allowed_fail) {
          ++result.histogram.fail_pairwise;
          return;
        }
      }
      slack = std::min(slack, static_cast<std::int64_t>(allowed_fail - fails));
      score = std::min(score, into_host);
    }
    scored.push_back({score, slack, v});
  });
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) { return a.score > b.score; });
  result.qualifying = scored.size();
  for (const auto& c : scored) result.ranked.push_back(c.v);
  if (!scored.empty()) {
    result.image = scored.front().v;
    result.pairwise_slack = scored.front().slack;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Updating

void update_after_embedding(const Instance& inst, EmbeddingState& state, VertexId x, VertexId v) {
  if (state.embedded(x)) throw ContractViolation("vertex " + std::to_string(x) + " is already embedded");
  if (state.occupied.contains(v)) throw ContractViolation("host vertex " + std::to_string(v) + " is occupied");
  auto it = std::find(state.order.begin() + static_cast<std::ptrdiff_t>(state.t), state.order.end(), x);
  if (it == state.order.end()) throw ContractViolation("vertex not in the remaining order");
  std::rotate(state.order.begin() + static_cast<std::ptrdiff_t>(state.t), it, it + 1);

  const auto& h = inst.pattern.graph;
  const auto& nv = inst.host.graph.neighbors(v);
  state.phi[x] = v;
  state.occupied.insert(v);
  for (auto& pool : state.exceptional_pool) pool.erase(v);
  for (std::size_t i = state.t + 1; i < state.order.size(); ++i) {
    VertexId y = state.order[i];
    if (h.adjacent(x, y)) {
      state.candidates[y] &= nv;
      state.host_sets[y] &= nv;
    } else {
      state.host_sets[y].erase(v);
    }
  }
  ++state.t;
}

// ---------------------------------------------------------------------------
// Sweeps

SweepRecord sweep_exceptional_pattern(const Instance& inst, EmbeddingState& state) {
  const auto& params = inst.params;
  const std::size_t n = inst.n();
  const std::size_t threshold = floored_count(params.d1 * params.d1, n, "", nullptr);

  SweepRecord rec;
  rec.t = state.t;
  rec.per_cluster.assign(inst.r(), 0);
  std::vector<bool> pull(n, false);
  for (std::size_t i = state.t; i < state.order.size(); ++i) {
    VertexId y = state.order[i];
    if (state.host_sets[y].count() <= threshold) {
      pull[y] = true;
      ++rec.per_cluster[inst.pattern.assignment[y]];
      ++rec.total;
    }
  }
  stable_front(state, pull);

  const std::size_t bound = floored_count(params.d3 * params.d3, inst.n_per_cluster(), "", nullptr);
  rec.bound = static_cast<double>(bound);
  rec.within_bound = std::all_of(rec.per_cluster.begin(), rec.per_cluster.end(),
                                 [&](std::size_t c) { return c <= bound; });
  return rec;
}

HostSweepRecord sweep_exceptional_host(const Instance& inst, EmbeddingState& state) {
  const auto& h = inst.pattern.graph;
  const auto& params = inst.params;
  const std::size_t r = inst.r();
  const std::size_t n = inst.n();
  HostSweepRecord rec;
  rec.t = state.t;
  rec.exceptional.assign(r, 0);
  state.host_sweep_done = true;

  std::vector<VertexSet> exceptional(r, VertexSet(Universe::kHost, n));
  for (std::uint32_t i = 0; i < r; ++i) {
    std::vector<VertexId> live;
    for (VertexId b : state.buffers[i]) {
      if (!state.embedded(b)) live.push_back(b);
    }
    Rational threshold = params.d2 * as_i64(live.size());
    if (live.empty()) continue;
    if (threshold < 1) threshold = 1;
    rec.threshold_fraction = to_double(threshold);
    (inst.host.cluster(i) - state.occupied).for_each([&](VertexId v) {
      std::size_t cover = 0;
      for (VertexId b : live) cover += state.candidates[b].contains(v) ? 1 : 0;
      if (Rational(as_i64(cover)) < threshold) exceptional[i].insert(v);
    });
    rec.exceptional[i] = exceptional[i].count();
  }

  // Pick |E_i| pattern vertices per cluster whose host set is untouched:
  // first pairwise at distance >= 4 and at distance >= 4 from everything
  // embedded so far, then, for any shortfall, merely non-adjacent to each
  // other and to every embedded vertex.
  VertexSet embedded_set = h.empty_set();
  for (std::size_t i = 0; i < state.t; ++i) embedded_set.insert(state.order[i]);
  const auto restricted = restricted_mask(inst);
  std::vector<std::size_t> chosen(r, 0);
  std::vector<bool> pull(n, false);
  VertexSet picked = h.empty_set();
  auto pick = [&](int radius, bool relaxed) {
    VertexSet zone = radius == 3 ? radius3_zone(h, embedded_set | picked) : embedded_set | picked;
    if (radius == 1) {
      (embedded_set | picked).for_each([&](VertexId u) { zone |= h.neighbors(u); });
    }
    for (VertexId x = 0; x < n; ++x) {
      auto c = inst.pattern.assignment[x];
      if (chosen[c] >= rec.exceptional[c]) continue;
      if (state.embedded(x) || state.is_buffer[x] || restricted[x] || zone.contains(x)) continue;
      pull[x] = true;
      state.forced[x] = true;
      rec.pulled.push_back(x);
      picked.insert(x);
      ++chosen[c];
      rec.relaxed += relaxed ? 1 : 0;
      zone |= radius == 3 ? ball(h, x, 3) : ball(h, x, 1);
    }
  };
  pick(3, false);
  pick(1, true);
  for (std::uint32_t i = 0; i < r; ++i) {
    if (chosen[i] < rec.exceptional[i]) {
      throw SweepFailure("cluster " + std::to_string(i) + " has " + std::to_string(rec.exceptional[i]) +
                         " exceptional host vertices but only " + std::to_string(chosen[i]) +
                         " pattern vertices with an untouched host set are available");
    }
    state.exceptional_pool[i] = exceptional[i];
  }
  stable_front(state, pull);

  const Rational bound = params.eps2 * as_i64(inst.n_per_cluster());
  rec.bound = to_double(bound);
  rec.within_bound = std::all_of(rec.exceptional.begin(), rec.exceptional.end(),
                                 [&](std::size_t e) { return Rational(as_i64(e)) < std::max(bound, Rational(1)); });
  return rec;
}

// ---------------------------------------------------------------------------
// Audits

AuditRecord audit_state(const Instance& inst, const EmbeddingState& state, std::uint64_t seed) {
  const auto& params = inst.params;
  const std::size_t big_n = inst.n_per_cluster();
  const auto& psi = inst.pattern.assignment;
  AuditRecord rec;
  rec.t = state.t;
  rec.host_set_threshold = to_double(params.d2 * as_i64(big_n));
  rec.min_host_set = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = state.t; i < state.order.size(); ++i) {
    VertexId y = state.order[i];
    auto size = state.host_sets[y].count();
    if (size < rec.min_host_set) {
      rec.min_host_set = size;
      rec.min_host_set_vertex = y;
    }
  }
  if (!rec.min_host_set_vertex) rec.min_host_set = 0;
  rec.host_set_ok = !rec.min_host_set_vertex || Rational(as_i64(rec.min_host_set)) > params.d2 * as_i64(big_n);

  Rng rng(seed);
  const double delta_pow = std::pow(to_double(params.delta), static_cast<double>(params.max_degree)) / 2.0;
  const auto exceptional_bound = std::max<std::int64_t>(1, floor_times(params.eps2, as_i64(big_n)));
  const auto sample_bound = std::max<std::int64_t>(1, floor_times(params.d3 * params.d3, as_i64(big_n)));
  const auto min_a = static_cast<std::size_t>(std::max<std::int64_t>(1, ceil_times(params.d3, as_i64(big_n))));
  for (std::uint32_t c = 0; c < inst.r(); ++c) {
    ClusterAudit ca;
    ca.cluster = c;
    ca.exceptional_bound = static_cast<double>(exceptional_bound);
    ca.sample_bound = static_cast<double>(sample_bound);
    std::vector<VertexId> s;
    for (std::size_t i = state.t; i < state.order.size(); ++i) {
      if (psi[state.order[i]] == c) s.push_back(state.order[i]);
    }
    ca.unembedded = s.size();
    ca.applicable = !s.empty() && Rational(as_i64(s.size())) >= params.d3 * params.d3 * as_i64(big_n);
    if (ca.applicable) {
      const VertexId base = static_cast<VertexId>(c * big_n);
      std::vector<std::size_t> deg(big_n, 0);
      std::size_t edges = 0;
      for (VertexId x : s) {
        state.candidates[x].for_each([&](VertexId v) { ++deg[v - base]; });
        edges += state.candidates[x].count();
      }
      ca.ut_density = static_cast<double>(edges) / static_cast<double>(s.size() * big_n);
      ca.min_degree = *std::min_element(deg.begin(), deg.end());
      // deg < (1 - eps2) d(U_t) |S|  <=>  deg N < (1 - eps2) e(U_t)
      const Rational rel = (Rational(1) - params.eps2) * as_i64(edges);
      for (std::size_t k = 0; k < big_n; ++k) {
        if (Rational(as_i64(deg[k] * big_n)) < rel) ++ca.below_relative;
        if (static_cast<double>(deg[k]) < delta_pow * static_cast<double>(s.size())) ++ca.below_absolute;
      }
      ca.degree_profile_ok = static_cast<std::int64_t>(ca.below_relative) <= exceptional_bound;

      if (Rational(as_i64(s.size())) >= params.d3 * as_i64(big_n)) {
        std::vector<VertexId> hosts(big_n);
        std::iota(hosts.begin(), hosts.end(), base);
        for (int trial = 0; trial < 8; ++trial) {
          std::size_t size = min_a + rng.below(big_n - min_a + 1);
          rng.shuffle(std::span<VertexId>(hosts));
          VertexSet a = VertexSet::of(Universe::kHost, inst.n(), std::span<const VertexId>(hosts.data(), size));
          std::size_t failures = 0;
          for (VertexId x : s) {
            // |A ∩ C(x)| >= (|A| / 2N) |C(x)|
            if (2 * big_n * intersection_count(a, state.candidates[x]) < size * state.candidates[x].count()) {
              ++failures;
            }
          }
          ++ca.sample_trials;
          ca.sample_failures += failures;
          if (static_cast<std::int64_t>(failures) > sample_bound) ca.sample_ok = false;
        }
      }
    }
    rec.clusters.push_back(ca);
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Invariant checks

std::optional<std::string> check_state(const Instance& inst, const EmbeddingState& state) {
  const std::size_t n = inst.n();
  const auto& psi = inst.pattern.assignment;
  if (state.order.size() != n || state.t > n) return "order has the wrong length";
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    VertexId x = state.order[i];
    if (x >= n || seen[x]) return "order is not a permutation";
    seen[x] = true;
    if ((i < state.t) != state.embedded(x)) return "vertex " + std::to_string(x) + " embedded state disagrees with order";
  }
  VertexSet images(Universe::kHost, n);
  for (std::size_t i = 0; i < state.t; ++i) {
    VertexId x = state.order[i];
    VertexId v = state.phi[x];
    if (v >= n) return "image out of range";
    if (images.contains(v)) return "phi is not injective at host vertex " + std::to_string(v);
    images.insert(v);
    if (inst.host.cluster_of(v) != psi[x]) return "phi(" + std::to_string(x) + ") leaves its cluster";
  }
  if (images != state.occupied) return "occupied set differs from the image of phi";
  for (auto [x, y] : inst.pattern.graph.edges()) {
    if (state.embedded(x) && state.embedded(y) && !inst.host.graph.adjacent(state.phi[x], state.phi[y])) {
      return "edge {" + std::to_string(x) + "," + std::to_string(y) + "} not preserved";
    }
  }
  for (std::size_t i = state.t; i < n; ++i) {
    VertexId y = state.order[i];
    const VertexSet cluster = inst.host.cluster(psi[y]);
    if (!state.host_sets[y].is_subset_of(state.candidates[y])) return "Hs(" + std::to_string(y) + ") not inside C";
    if (!state.candidates[y].is_subset_of(cluster)) return "C(" + std::to_string(y) + ") leaves its cluster";
    if (state.host_sets[y].intersects(state.occupied)) return "Hs(" + std::to_string(y) + ") meets occupied vertices";
  }
  return std::nullopt;
}

std::optional<std::string> check_buffers(const Instance& inst, const EmbeddingState& state) {
  const auto& h = inst.pattern.graph;
  for (const auto& cluster_buffers : state.buffers) {
    for (VertexId b : cluster_buffers) {
      auto near = ball(h, b, 3);
      near.erase(b);
      for (const auto& others : state.buffers) {
        for (VertexId b2 : others) {
          if (b2 != b && near.contains(b2)) {
            return "buffers " + std::to_string(b) + " and " + std::to_string(b2) + " are closer than 4";
          }
        }
      }
    }
  }
  for (VertexId x = 0; x < h.order(); ++x) {
    std::size_t adjacent_buffers = 0;
    h.neighbors(x).for_each([&](VertexId y) { adjacent_buffers += state.is_buffer[y] ? 1 : 0; });
    if (adjacent_buffers > 1) return "vertex " + std::to_string(x) + " is adjacent to two buffers";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Driver

namespace {

void fail_at(const EmbeddingState& state, RunReport& report, std::string kind, std::optional<VertexId> x,
             std::string message, FailureHistogram hist = {}) {
  report.failure = Failure{std::move(kind), state.t, x, std::move(message), hist};
}

void track_min_host_set(const EmbeddingState& state, RunReport& report) {
  for (std::size_t i = state.t; i < state.order.size(); ++i) {
    auto size = state.host_sets[state.order[i]].count();
    if (size < report.min_host_set) {
      report.min_host_set = size;
      report.min_host_set_t = state.t;
    }
  }
}

}  // namespace

bool embed_step(const Instance& inst, EmbeddingState& state, RunReport& report, const EmbedOptions& options) {
  const VertexId x = state.order[state.t];
  SelectionResult sel = select_image(inst, state, x, options);
  report.candidates_scanned += sel.histogram.candidates;
  if (!sel.image) {
    if (sel.histogram.candidates == 0) {
      fail_at(state, report, "empty-host-set", x, "no unoccupied candidate left for pattern vertex " + std::to_string(x),
              sel.histogram);
    } else {
      fail_at(state, report, "selection-exhausted", x,
              "no candidate for pattern vertex " + std::to_string(x) + " satisfies the degree windows", sel.histogram);
    }
    return false;
  }
  const VertexId v = *sel.image;
  std::optional<EmbeddingState> before;
  if (options.on_step) before = state;
  update_after_embedding(inst, state, x, v);
  ++report.steps;
  report.forced_steps += sel.forced ? 1 : 0;
  report.sampled_steps += sel.sampled ? 1 : 0;
  report.min_pairwise_slack = std::min(report.min_pairwise_slack, sel.pairwise_slack);
  if (options.record_steps) report.steps_log.push_back({state.t, x, v, sel.forced, sel.qualifying});
  track_min_host_set(state, report);
  if (options.check_invariants) {
    if (auto problem = check_state(inst, state)) {
      fail_at(state, report, "invariant-violation", x, *problem);
      return false;
    }
  }
  if (options.on_step) options.on_step(*before, state, x, v);
  return true;
}

bool run_due_sweeps(const Instance& inst, EmbeddingState& state, RunReport& report, const EmbedOptions& options) {
  if (state.t / state.t1 > state.pattern_sweep_mark) {
    state.pattern_sweep_mark = state.t / state.t1;
    auto rec = sweep_exceptional_pattern(inst, state);
    if (!rec.within_bound) {
      report.warnings.push_back("pattern sweep at t=" + std::to_string(rec.t) + ": exceptional count above d3^2*N");
    }
    if (rec.total > 0) {
      if (options.audit) {
        report.audits.push_back(audit_state(inst, state, Rng(inst.seed).split(SeedStream::kAudit).split(state.t).seed()));
      }
      report.sweeps.push_back(std::move(rec));
    }
  }
  if (!state.host_sweep_done && state.t >= state.t0) {
    try {
      auto rec = sweep_exceptional_host(inst, state);
      if (!rec.within_bound) report.warnings.push_back("host sweep at t=" + std::to_string(rec.t) + ": |E_i| reached eps2*N");
      report.host_sweep = std::move(rec);
    } catch (const SweepFailure& e) {
      fail_at(state, report, "sweep-failure", std::nullopt, e.what());
      return false;
    }
  }
  return true;
}

void continue_phase1(const Instance& inst, EmbeddingState& state, RunReport& report, const EmbedOptions& options) {
  const auto start = Clock::now();
  if (run_due_sweeps(inst, state, report, options)) {
    while (state.unembedded_non_buffer_count() > 0) {
      if (!embed_step(inst, state, report, options)) break;
      if (!run_due_sweeps(inst, state, report, options)) break;
    }
  }
  if (!report.failure) {
    state.big_t = state.t;
    report.big_t = state.t;
    if (options.audit) {
      auto rec = audit_state(inst, state, Rng(inst.seed).split(SeedStream::kAudit).split(state.t).seed());
      if (!rec.host_set_ok) {
        report.warnings.push_back("at T=" + std::to_string(state.t) + ": min |Hs| = " +
                                  std::to_string(rec.min_host_set) + " <= d2*N");
      }
      report.audits.push_back(std::move(rec));
    }
  }
  report.phase1_seconds += seconds_since(start);
}

EmbeddingState run_phase1(const Instance& inst, RunReport& report, const EmbedOptions& options) {
  const auto start = Clock::now();
  EmbeddingState state;
  try {
    state = preprocess(inst, &report, options.strict_buffers);
  } catch (const PreprocessingFailure& e) {
    report.failure = Failure{"preprocessing-failure", 0, std::nullopt, e.what(), {}};
    report.phase1_seconds = seconds_since(start);
    return state;
  }
  report.phase1_seconds = seconds_since(start);
  continue_phase1(inst, state, report, options);
  return state;
}

bool run_phase2(const Instance& inst, EmbeddingState& state, RunReport& report) {
  const auto start = Clock::now();
  const Rng audit_rng = Rng(inst.seed).split(SeedStream::kAudit).split(0xFFFF);
  bool ok = true;
  for (std::uint32_t c = 0; c < inst.r() && ok; ++c) {
    std::vector<VertexId> left;
    for (std::size_t i = state.t; i < state.order.size(); ++i) {
      if (inst.pattern.assignment[state.order[i]] == c) left.push_back(state.order[i]);
    }
    const VertexSet remaining = inst.host.cluster(c) - state.occupied;
    std::vector<VertexSet> sets;
    sets.reserve(left.size());
    for (VertexId x : left) sets.push_back(state.host_sets[x]);

    Phase2Cluster p2;
    p2.cluster = c;
    p2.m = left.size();
    p2.hall = hall_audit(sets, remaining, inst.params.d3, audit_rng.split(c).seed());
    if (!p2.hall.min_set_ok) report.warnings.push_back("phase 2 cluster " + std::to_string(c) + ": min-set condition fails");
    if (!p2.hall.union_ok) report.warnings.push_back("phase 2 cluster " + std::to_string(c) + ": union condition fails");
    if (!p2.hall.coverage_ok) report.warnings.push_back("phase 2 cluster " + std::to_string(c) + ": coverage condition fails");

    CandidacyGraph cg = CandidacyGraph::from_sets(sets, remaining);
    MatchingResult m = max_matching(cg);
    p2.matching_size = m.size;
    p2.phases = m.phases;
    p2.perfect = m.perfect;
    if (!m.perfect) {
      if (m.hall_witness) {
        for (auto i : *m.hall_witness) p2.hall_witness.push_back(left[i]);
      }
      report.failure = Failure{"phase2-hall-violation", state.t, std::nullopt,
                               "no system of distinct representatives in cluster " + std::to_string(c) + " (" +
                                   std::to_string(m.size) + " of " + std::to_string(left.size()) + " matched)",
                               {}};
      ok = false;
    } else {
      for (std::size_t i = 0; i < left.size(); ++i) {
        update_after_embedding(inst, state, left[i], cg.right[static_cast<std::size_t>(m.mate_left[i])]);
      }
    }
    report.phase2.push_back(std::move(p2));
  }
  report.phase2_seconds = seconds_since(start);
  return ok;
}

RunReport run(const Instance& inst, const EmbedOptions& options, EmbeddingState* final_state) {
  RunReport report;
  EmbeddingState state = run_phase1(inst, report, options);
  if (!report.failure && run_phase2(inst, state, report)) {
    auto verdict = verify_embedding(inst, state.phi);
    if (!verdict.ok) {
      report.failure = Failure{"verification-failure", state.t, std::nullopt,
                               verdict.violations.front().kind + ": " + verdict.violations.front().message, {}};
    } else {
      report.success = true;
      report.embedding = state.phi;
    }
  }
  if (final_state != nullptr) *final_state = std::move(state);
  return report;
}

// ---------------------------------------------------------------------------
// Verification

EmbeddingVerdict verify_embedding(const Instance& inst, std::span<const VertexId> phi) {
  EmbeddingVerdict out;
  auto add = [&](const char* kind, std::string message) {
    out.ok = false;
    out.violations.push_back({kind, std::move(message)});
  };
  const std::size_t n = inst.pattern.order();
  const std::size_t hosts = inst.host.order();
  if (phi.size() != n) {
    add("totality", "embedding has " + std::to_string(phi.size()) + " entries for " + std::to_string(n) + " vertices");
    return out;
  }
  std::vector<std::int64_t> owner(hosts, -1);
  for (VertexId x = 0; x < n; ++x) {
    VertexId v = phi[x];
    if (v >= hosts) {
      add("totality", "vertex " + std::to_string(x) + " has no valid image");
      continue;
    }
    if (owner[v] >= 0) {
      add("injectivity", "vertices " + std::to_string(owner[v]) + " and " + std::to_string(x) +
                             " both map to host vertex " + std::to_string(v));
    } else {
      owner[v] = x;
    }
    if (inst.host.cluster_of(v) != inst.pattern.assignment[x]) {
      add("assignment", "vertex " + std::to_string(x) + " maps to cluster " + std::to_string(inst.host.cluster_of(v)) +
                            " instead of " + std::to_string(inst.pattern.assignment[x]));
    }
  }
  for (auto [x, y] : inst.pattern.graph.edges()) {
    if (phi[x] >= hosts || phi[y] >= hosts) continue;
    if (!inst.host.graph.adjacent(phi[x], phi[y])) {
      add("edge", "edge {" + std::to_string(x) + "," + std::to_string(y) + "} maps to non-edge {" +
                      std::to_string(phi[x]) + "," + std::to_string(phi[y]) + "}");
    }
  }
  for (const auto& res : inst.restrictions) {
    if (phi[res.vertex] < hosts && !res.allowed.contains(phi[res.vertex])) {
      add("restriction", "vertex " + std::to_string(res.vertex) + " maps outside its allowed set");
    }
  }
  return out;
}

}  // namespace blowup
