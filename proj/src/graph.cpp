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

#include "blowup/graph.hpp"

#include <algorithm>
#include <deque>

#include "blowup/errors.hpp"

namespace blowup {
namespace {

std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

const char* to_string(Universe u) {
  switch (u) {
    case Universe::kPattern:
      return "pattern";
    case Universe::kHost:
      return "host";
    case Universe::kLocal:
      return "local";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// VertexSet

VertexSet::VertexSet(Universe universe, std::size_t size)
    : universe_(universe), size_(size), words_(word_count(size), 0) {}

VertexSet VertexSet::full(Universe universe, std::size_t size) {
  return range(universe, size, 0, static_cast<VertexId>(size));
}

VertexSet VertexSet::range(Universe universe, std::size_t size, VertexId begin, VertexId end) {
  VertexSet s(universe, size);
  if (end > size || begin > end) throw ContractViolation("VertexSet::range out of bounds");
  for (VertexId v = begin; v < end; ++v) s.words_[v / 64] |= std::uint64_t{1} << (v % 64);
  return s;
}

VertexSet VertexSet::of(Universe universe, std::size_t size, std::span<const VertexId> members) {
  VertexSet s(universe, size);
  for (VertexId v : members) s.insert(v);
  return s;
}

void VertexSet::require_member_index(VertexId v) const {
  if (v >= size_) {
    throw ContractViolation("vertex " + std::to_string(v) + " outside " + to_string(universe_) +
                            " universe of size " + std::to_string(size_));
  }
}

void VertexSet::require_compatible(const VertexSet& other, const char* op) const {
  if (universe_ != other.universe_ || size_ != other.size_) {
    throw ContractViolation(std::string(op) + ": universe mismatch (" + to_string(universe_) + "/" +
                            std::to_string(size_) + " vs " + to_string(other.universe_) + "/" +
                            std::to_string(other.size_) + ")");
  }
}

bool VertexSet::contains(VertexId v) const {
  require_member_index(v);
  return (words_[v / 64] >> (v % 64)) & 1U;
}

void VertexSet::insert(VertexId v) {
  require_member_index(v);
  words_[v / 64] |= std::uint64_t{1} << (v % 64);
}

void VertexSet::erase(VertexId v) {
  require_member_index(v);
  words_[v / 64] &= ~(std::uint64_t{1} << (v % 64));
}

void VertexSet::clear() { std::fill(words_.begin(), words_.end(), 0); }

std::size_t VertexSet::count() const noexcept {
  std::size_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool VertexSet::empty() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

VertexSet& VertexSet::operator&=(const VertexSet& other) {
  require_compatible(other, "intersection");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

VertexSet& VertexSet::operator|=(const VertexSet& other) {
  require_compatible(other, "union");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

VertexSet& VertexSet::operator-=(const VertexSet& other) {
  require_compatible(other, "difference");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

bool VertexSet::is_subset_of(const VertexSet& other) const {
  require_compatible(other, "subset");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

bool VertexSet::intersects(const VertexSet& other) const {
  require_compatible(other, "intersects");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) return true;
  }
  return false;
}

std::vector<VertexId> VertexSet::members() const {
  std::vector<VertexId> out;
  out.reserve(count());
  for_each([&](VertexId v) { out.push_back(v); });
  return out;
}

VertexId VertexSet::first() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return static_cast<VertexId>(w * 64 + std::countr_zero(words_[w]));
  }
  return static_cast<VertexId>(size_);
}

std::string VertexSet::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(words_.size() * 16);
  for (std::size_t i = words_.size(); i-- > 0;) {
    for (int shift = 60; shift >= 0; shift -= 4) out.push_back(kDigits[(words_[i] >> shift) & 0xF]);
  }
  return out;
}

VertexSet VertexSet::from_hex(Universe universe, std::size_t size, std::string_view hex) {
  VertexSet s(universe, size);
  if (hex.size() != s.words_.size() * 16) {
    throw ContractViolation("hex bitset has " + std::to_string(hex.size()) + " digits, expected " +
                            std::to_string(s.words_.size() * 16));
  }
  for (std::size_t i = 0; i < s.words_.size(); ++i) {
    std::uint64_t w = 0;
    for (char c : hex.substr((s.words_.size() - 1 - i) * 16, 16)) {
      int d;
      if (c >= '0' && c <= '9') {
        d = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        d = c - 'a' + 10;
      } else {
        throw ContractViolation("invalid hex digit in bitset");
      }
      w = (w << 4) | static_cast<std::uint64_t>(d);
    }
    s.words_[i] = w;
  }
  // Bits past `size` must be clear.
  if (size % 64 != 0 && !s.words_.empty() && (s.words_.back() >> (size % 64)) != 0) {
    throw ContractViolation("hex bitset has members outside its universe");
  }
  return s;
}

std::size_t intersection_count(const VertexSet& a, const VertexSet& b) {
  a.require_compatible(b, "intersection_count");
  auto wa = a.words();
  auto wb = b.words();
  std::size_t c = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) c += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
  return c;
}

std::size_t intersection_count(const VertexSet& a, const VertexSet& b, const VertexSet& c) {
  a.require_compatible(b, "intersection_count");
  a.require_compatible(c, "intersection_count");
  auto wa = a.words();
  auto wb = b.words();
  auto wc = c.words();
  std::size_t n = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(wa[i] & wb[i] & wc[i]));
  }
  return n;
}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(Universe universe, std::size_t order, std::span<const Edge> edges) {
  GraphBuilder builder(universe, order);
  for (auto [u, v] : edges) builder.add_edge(u, v);
  *this = std::move(builder).build();
}

const VertexSet& Graph::neighbors(VertexId v) const {
  if (v >= rows_.size()) {
    throw ContractViolation("vertex " + std::to_string(v) + " outside graph of order " +
                            std::to_string(rows_.size()));
  }
  return rows_[v];
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& row : rows_) best = std::max(best, row.count());
  return best;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (VertexId u = 0; u < rows_.size(); ++u) {
    rows_[u].for_each([&](VertexId v) {
      if (u < v) out.emplace_back(u, v);
    });
  }
  return out;
}

GraphBuilder::GraphBuilder(Universe universe, std::size_t order) {
  graph_.universe_ = universe;
  graph_.rows_.assign(order, VertexSet(universe, order));
}

void GraphBuilder::add_edge(VertexId u, VertexId v) {
  if (u >= order() || v >= order()) throw ContractViolation("edge endpoint out of range");
  if (u == v) throw ContractViolation("loops are not allowed (vertex " + std::to_string(u) + ")");
  if (graph_.rows_[u].contains(v)) return;
  graph_.rows_[u].insert(v);
  graph_.rows_[v].insert(u);
  ++graph_.edge_count_;
}

bool GraphBuilder::has_edge(VertexId u, VertexId v) const { return graph_.rows_.at(u).contains(v); }

Graph GraphBuilder::build() && { return std::move(graph_); }

std::size_t degree_into(const Graph& g, VertexId v, const VertexSet& s) {
  return intersection_count(g.neighbors(v), s);
}

std::size_t codegree(const Graph& g, VertexId u, VertexId v, const VertexSet& s) {
  return intersection_count(g.neighbors(u), g.neighbors(v), s);
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, VertexId source, std::uint32_t limit) {
  std::vector<std::uint32_t> dist(g.order(), limit + 1);
  dist.at(source) = 0;
  std::deque<VertexId> queue{source};
  while (!queue.empty()) {
    VertexId u = queue.front();
    queue.pop_front();
    if (dist[u] == limit) continue;
    g.neighbors(u).for_each([&](VertexId w) {
      if (dist[w] > dist[u] + 1) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    });
  }
  return dist;
}

VertexSet ball(const Graph& g, VertexId source, std::uint32_t radius) {
  VertexSet reached = g.empty_set();
  reached.insert(source);
  VertexSet frontier = reached;
  for (std::uint32_t step = 0; step < radius; ++step) {
    VertexSet next = g.empty_set();
    frontier.for_each([&](VertexId u) { next |= g.neighbors(u); });
    next -= reached;
    if (next.empty()) break;
    reached |= next;
    frontier = std::move(next);
  }
  return reached;
}

// ---------------------------------------------------------------------------
// BipartitePair

BipartitePair::BipartitePair(std::size_t size_a, std::size_t size_b, std::span<const Edge> edges)
    : rows_a_(size_a, VertexSet(Universe::kLocal, size_b)),
      rows_b_(size_b, VertexSet(Universe::kLocal, size_a)) {
  for (auto [a, b] : edges) {
    if (a >= size_a || b >= size_b) throw ContractViolation("pair edge out of range");
    if (rows_a_[a].contains(b)) continue;
    rows_a_[a].insert(b);
    rows_b_[b].insert(a);
    ++edge_count_;
  }
}

BipartitePair BipartitePair::from_graph(const Graph& g, const VertexSet& a, const VertexSet& b) {
  g.empty_set().require_compatible(a, "BipartitePair::from_graph");
  g.empty_set().require_compatible(b, "BipartitePair::from_graph");
  if (a.intersects(b)) throw ContractViolation("pair sides must be disjoint");
  auto a_members = a.members();
  auto b_members = b.members();
  std::vector<VertexId> b_local(g.order(), 0);
  for (std::size_t j = 0; j < b_members.size(); ++j) b_local[b_members[j]] = static_cast<VertexId>(j);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < a_members.size(); ++i) {
    (g.neighbors(a_members[i]) & b).for_each(
        [&](VertexId v) { edges.emplace_back(static_cast<VertexId>(i), b_local[v]); });
  }
  return BipartitePair(a_members.size(), b_members.size(), edges);
}

std::vector<Edge> BipartitePair::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (VertexId a = 0; a < rows_a_.size(); ++a) {
    rows_a_[a].for_each([&](VertexId b) { out.emplace_back(a, b); });
  }
  return out;
}

BipartitePair BipartitePair::swapped() const {
  BipartitePair out;
  out.rows_a_ = rows_b_;
  out.rows_b_ = rows_a_;
  out.edge_count_ = edge_count_;
  return out;
}

std::size_t BipartitePair::edges_between(const VertexSet& x, const VertexSet& y) const {
  side_a().require_compatible(x, "edges_between");
  side_b().require_compatible(y, "edges_between");
  std::size_t e = 0;
  x.for_each([&](VertexId a) { e += intersection_count(rows_a_[a], y); });
  return e;
}

Rational density(const BipartitePair& p) {
  if (p.size_a() == 0 || p.size_b() == 0) throw UndefinedDensity("density of a pair with an empty side");
  return Rational(static_cast<std::int64_t>(p.edge_count()),
                  static_cast<std::int64_t>(p.size_a() * p.size_b()));
}

Rational density(const BipartitePair& p, const VertexSet& x, const VertexSet& y) {
  std::size_t nx = x.count();
  std::size_t ny = y.count();
  if (nx == 0 || ny == 0) throw UndefinedDensity("density of a pair with an empty side");
  return Rational(static_cast<std::int64_t>(p.edges_between(x, y)), static_cast<std::int64_t>(nx * ny));
}

}  // namespace blowup
