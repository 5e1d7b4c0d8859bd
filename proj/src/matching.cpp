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

#include "blowup/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

#include "blowup/errors.hpp"
#include "blowup/rng.hpp"

namespace blowup {
namespace {

constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const CandidacyGraph& g)
      : g_(g),
        mate_left_(g.left_size(), kUnmatched),
        mate_right_(g.right_size(), kUnmatched),
        dist_(g.left_size(), kInf) {
    adj_.reserve(g.left_size());
    for (const auto& row : g.adjacency) adj_.push_back(row.members());
  }

  void seed_with(std::span<const std::int32_t> mate_left) {
    for (std::uint32_t u = 0; u < mate_left.size(); ++u) {
      auto v = mate_left[u];
      if (v == kUnmatched) continue;
      if (v < 0 || static_cast<std::size_t>(v) >= g_.right_size() || !g_.adjacency[u].contains(static_cast<VertexId>(v)) ||
          mate_right_[static_cast<std::size_t>(v)] != kUnmatched) {
        throw ContractViolation("initial matching is not a matching of the candidacy graph");
      }
      mate_left_[u] = v;
      mate_right_[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(u);
      ++initial_size_;
    }
  }

  MatchingResult run() {
    MatchingResult result;
    result.size = initial_size_;
    while (bfs()) {
      ++result.phases;
      std::vector<std::size_t> cursor(g_.left_size(), 0);
      for (std::uint32_t u = 0; u < g_.left_size(); ++u) {
        if (mate_left_[u] == kUnmatched && dfs(u, cursor)) ++result.size;
      }
    }
    result.mate_left = std::move(mate_left_);
    result.mate_right = std::move(mate_right_);
    return result;
  }

 private:
  // Layers left vertices by alternating distance from the free ones; true if
  // some free right vertex is reachable.
  bool bfs() {
    std::deque<std::uint32_t> queue;
    for (std::uint32_t u = 0; u < g_.left_size(); ++u) {
      if (mate_left_[u] == kUnmatched) {
        dist_[u] = 0;
        queue.push_back(u);
      } else {
        dist_[u] = kInf;
      }
    }
    bool found = false;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      for (VertexId v : adj_[u]) {
        auto w = mate_right_[v];
        if (w == kUnmatched) {
          found = true;
        } else if (dist_[static_cast<std::size_t>(w)] == kInf) {
          dist_[static_cast<std::size_t>(w)] = dist_[u] + 1;
          queue.push_back(static_cast<std::uint32_t>(w));
        }
      }
    }
    return found;
  }

  bool dfs(std::uint32_t u, std::vector<std::size_t>& cursor) {
    for (auto& i = cursor[u]; i < adj_[u].size(); ++i) {
      VertexId v = adj_[u][i];
      auto w = mate_right_[v];
      if (w == kUnmatched || (dist_[static_cast<std::size_t>(w)] == dist_[u] + 1 &&
                              dfs(static_cast<std::uint32_t>(w), cursor))) {
        mate_left_[u] = static_cast<std::int32_t>(v);
        mate_right_[v] = static_cast<std::int32_t>(u);
        ++i;
        return true;
      }
    }
    dist_[u] = kInf;
    return false;
  }

  const CandidacyGraph& g_;
  std::size_t initial_size_ = 0;
  std::vector<std::vector<VertexId>> adj_;
  std::vector<std::int32_t> mate_left_;
  std::vector<std::int32_t> mate_right_;
  std::vector<std::uint32_t> dist_;
};

// Left vertices reachable from unmatched left vertices by alternating paths.
// Their neighbourhood is exactly the reachable right side, all of it matched
// back into the set, so |N(S)| = |S| - #free < |S|.
std::vector<std::uint32_t> konig_witness(const CandidacyGraph& g, const MatchingResult& m) {
  std::vector<bool> seen_left(g.left_size(), false);
  std::vector<bool> seen_right(g.right_size(), false);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t u = 0; u < g.left_size(); ++u) {
    if (m.mate_left[u] == kUnmatched) {
      seen_left[u] = true;
      queue.push_back(u);
    }
  }
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    g.adjacency[u].for_each([&](VertexId v) {
      if (seen_right[v]) return;
      seen_right[v] = true;
      auto w = m.mate_right[v];
      if (w != kUnmatched && !seen_left[static_cast<std::size_t>(w)]) {
        seen_left[static_cast<std::size_t>(w)] = true;
        queue.push_back(static_cast<std::uint32_t>(w));
      }
    });
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t u = 0; u < g.left_size(); ++u) {
    if (seen_left[u]) out.push_back(u);
  }
  return out;
}

}  // namespace

CandidacyGraph CandidacyGraph::from_sets(std::span<const VertexSet> sets) {
  if (sets.empty()) return {};
  VertexSet all(sets.front().universe(), sets.front().universe_size());
  for (const auto& s : sets) all |= s;
  return from_sets(sets, all);
}

CandidacyGraph CandidacyGraph::from_sets(std::span<const VertexSet> sets, const VertexSet& right) {
  CandidacyGraph g;
  g.right = right.members();
  std::vector<VertexId> local(right.universe_size(), 0);
  for (std::size_t j = 0; j < g.right.size(); ++j) local[g.right[j]] = static_cast<VertexId>(j);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    g.left.push_back(static_cast<VertexId>(i));
    VertexSet row(Universe::kLocal, g.right.size());
    (sets[i] & right).for_each([&](VertexId v) { row.insert(local[v]); });
    g.adjacency.push_back(std::move(row));
  }
  return g;
}

std::size_t CandidacyGraph::edge_count() const {
  std::size_t e = 0;
  for (const auto& row : adjacency) e += row.count();
  return e;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> MatchingResult::pairs() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t u = 0; u < mate_left.size(); ++u) {
    if (mate_left[u] != kUnmatched) out.emplace_back(u, static_cast<std::uint32_t>(mate_left[u]));
  }
  return out;
}

MatchingResult max_matching(const CandidacyGraph& g) { return max_matching(g, {}); }

MatchingResult max_matching(const CandidacyGraph& g, std::span<const std::int32_t> initial_mate_left) {
  if (g.adjacency.size() != g.left.size()) throw ContractViolation("candidacy graph adjacency/left size mismatch");
  for (const auto& row : g.adjacency) {
    if (row.universe_size() != g.right.size()) throw ContractViolation("candidacy row over the wrong right side");
  }
  if (!initial_mate_left.empty() && initial_mate_left.size() != g.left_size()) {
    throw ContractViolation("initial matching has the wrong length");
  }
  HopcroftKarp hk(g);
  hk.seed_with(initial_mate_left);
  MatchingResult m = hk.run();
  m.perfect = m.size == g.left_size() && m.size == g.right_size();
  if (m.size < g.left_size()) m.hall_witness = konig_witness(g, m);
  return m;
}

bool is_valid_matching(const CandidacyGraph& g, const MatchingResult& m) {
  if (m.mate_left.size() != g.left_size() || m.mate_right.size() != g.right_size()) return false;
  std::size_t count = 0;
  for (std::uint32_t u = 0; u < g.left_size(); ++u) {
    auto v = m.mate_left[u];
    if (v == kUnmatched) continue;
    if (v < 0 || static_cast<std::size_t>(v) >= g.right_size()) return false;
    if (!g.adjacency[u].contains(static_cast<VertexId>(v))) return false;
    if (m.mate_right[static_cast<std::size_t>(v)] != static_cast<std::int32_t>(u)) return false;
    ++count;
  }
  for (std::uint32_t v = 0; v < g.right_size(); ++v) {
    auto u = m.mate_right[v];
    if (u != kUnmatched && m.mate_left[static_cast<std::size_t>(u)] != static_cast<std::int32_t>(v)) return false;
  }
  return count == m.size;
}

std::size_t neighbourhood_size(const CandidacyGraph& g, std::span<const std::uint32_t> s) {
  VertexSet un(Universe::kLocal, g.right_size());
  for (auto u : s) un |= g.adjacency.at(u);
  return un.count();
}

SdrResult sdr(std::span<const VertexSet> sets) {
  SdrResult out;
  CandidacyGraph g = CandidacyGraph::from_sets(sets);
  out.matching = max_matching(g);
  if (out.matching.size == sets.size()) {
    std::vector<VertexId> reps(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) reps[i] = g.right[static_cast<std::size_t>(out.matching.mate_left[i])];
    out.representatives = std::move(reps);
  } else {
    out.hall_witness = out.matching.hall_witness;
  }
  return out;
}

HallAudit hall_audit(std::span<const VertexSet> sets, const VertexSet& remaining, const Rational& d3,
                     std::uint64_t seed, std::size_t samples) {
  HallAudit a;
  a.m = sets.size();
  const auto m = static_cast<std::int64_t>(a.m);
  const Rational threshold = d3 * m;  // d3 M
  a.min_set_threshold = to_double(threshold);
  a.coverage_threshold = a.min_set_threshold;
  if (sets.empty()) return a;

  a.min_set_size = std::numeric_limits<std::size_t>::max();
  for (const auto& s : sets) {
    a.min_set_size = std::min(a.min_set_size, s.count());
    if (!(Rational(static_cast<std::int64_t>(s.count())) > threshold)) a.min_set_ok = false;
  }

  // Union condition: random subsets of every admissible size.
  const auto min_size = static_cast<std::size_t>(std::max<std::int64_t>(1, ceil_times(d3, m)));
  const Rational need = (Rational(1) - d3) * m;
  Rng rng(seed);
  std::vector<std::uint32_t> idx(sets.size());
  std::iota(idx.begin(), idx.end(), 0);
  a.union_min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples && min_size <= sets.size(); ++s) {
    std::size_t k = min_size + rng.below(sets.size() - min_size + 1);
    rng.shuffle(std::span<std::uint32_t>(idx));
    VertexSet un = sets.front();
    un.clear();
    for (std::size_t i = 0; i < k; ++i) un |= sets[idx[i]];
    ++a.union_samples;
    const auto got = static_cast<std::int64_t>(un.count());
    a.union_min_margin = std::min(a.union_min_margin, static_cast<double>(got) - to_double(need));
    if (Rational(got) < need) {
      ++a.union_failures;
      a.union_ok = false;
    }
  }
  if (a.union_samples == 0) a.union_min_margin = 0.0;

  a.min_coverage = std::numeric_limits<std::size_t>::max();
  remaining.for_each([&](VertexId y) {
    std::size_t cover = 0;
    for (const auto& s : sets) cover += s.contains(y) ? 1 : 0;
    a.min_coverage = std::min(a.min_coverage, cover);
    if (Rational(static_cast<std::int64_t>(cover)) < threshold) a.coverage_ok = false;
  });
  if (remaining.empty()) a.min_coverage = 0;
  return a;
}

}  // namespace blowup
