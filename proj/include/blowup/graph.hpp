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

// Dense bit-vector graph primitives. Degree and codegree queries into a
// vertex set are word-parallel population counts over adjacency rows.

#ifndef BLOWUP_GRAPH_HPP
#define BLOWUP_GRAPH_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blowup/rational.hpp"

namespace blowup {

/// Which vertex universe a set or graph lives in. Mixing universes in one
/// operation is a ContractViolation.
enum class Universe : std::uint8_t {
  kPattern,  // vertices of the graph being embedded
  kHost,     // vertices of the host graph
  kLocal,    // side-local indices of a bipartite pair
};

const char* to_string(Universe u);

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(Universe universe, std::size_t size);

  static VertexSet full(Universe universe, std::size_t size);
  /// Members [begin, end).
  static VertexSet range(Universe universe, std::size_t size, VertexId begin, VertexId end);
  static VertexSet of(Universe universe, std::size_t size, std::span<const VertexId> members);

  Universe universe() const noexcept { return universe_; }
  std::size_t universe_size() const noexcept { return size_; }

  bool contains(VertexId v) const;
  void insert(VertexId v);
  void erase(VertexId v);
  void clear();

  std::size_t count() const noexcept;
  bool empty() const noexcept;

  VertexSet& operator&=(const VertexSet& other);
  VertexSet& operator|=(const VertexSet& other);
  /// Set difference.
  VertexSet& operator-=(const VertexSet& other);

  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

  bool is_subset_of(const VertexSet& other) const;
  bool intersects(const VertexSet& other) const;

  /// Members in increasing order.
  std::vector<VertexId> members() const;

  /// Smallest member, or universe_size() when empty.
  VertexId first() const noexcept;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        fn(static_cast<VertexId>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// Lower-case hex of the little-endian word array, 16 digits per word, most
  /// significant word first. Bit-exact inverse of from_hex.
  std::string to_hex() const;
  static VertexSet from_hex(Universe universe, std::size_t size, std::string_view hex);

  friend bool operator==(const VertexSet& a, const VertexSet& b) = default;

  /// Throws ContractViolation unless both sets share universe and size.
  void require_compatible(const VertexSet& other, const char* op) const;

 private:
  void require_member_index(VertexId v) const;

  Universe universe_ = Universe::kLocal;
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// |a ∩ b|.
std::size_t intersection_count(const VertexSet& a, const VertexSet& b);
/// |a ∩ b ∩ c|.
std::size_t intersection_count(const VertexSet& a, const VertexSet& b, const VertexSet& c);

/// Simple undirected graph with one adjacency bit-row per vertex.
/// Immutable once built; use GraphBuilder to construct.
class Graph {
 public:
  Graph() = default;
  Graph(Universe universe, std::size_t order, std::span<const Edge> edges);

  Universe universe() const noexcept { return universe_; }
  std::size_t order() const noexcept { return rows_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  const VertexSet& neighbors(VertexId v) const;
  std::size_t degree(VertexId v) const { return neighbors(v).count(); }
  bool adjacent(VertexId u, VertexId v) const { return neighbors(u).contains(v); }
  std::size_t max_degree() const;

  /// Every edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  VertexSet empty_set() const { return VertexSet(universe_, order()); }
  VertexSet all_vertices() const { return VertexSet::full(universe_, order()); }

  friend bool operator==(const Graph& a, const Graph& b) = default;

 private:
  friend class GraphBuilder;

  Universe universe_ = Universe::kLocal;
  std::vector<VertexSet> rows_;
  std::size_t edge_count_ = 0;
};

class GraphBuilder {
 public:
  GraphBuilder(Universe universe, std::size_t order);

  /// Adds {u,v}; loops are rejected and repeated edges ignored.
  void add_edge(VertexId u, VertexId v);
  bool has_edge(VertexId u, VertexId v) const;
  std::size_t degree(VertexId v) const { return graph_.rows_.at(v).count(); }
  std::size_t order() const noexcept { return graph_.order(); }

  Graph build() &&;

 private:
  Graph graph_;
};

/// Degree of v into s: |N_G(v) ∩ s|.
std::size_t degree_into(const Graph& g, VertexId v, const VertexSet& s);

/// |N(u) ∩ N(v) ∩ s|.
std::size_t codegree(const Graph& g, VertexId u, VertexId v, const VertexSet& s);

/// Unweighted BFS distances from `source`, capped: vertices further than
/// `limit` (or unreachable) get limit + 1.
std::vector<std::uint32_t> bfs_distances(const Graph& g, VertexId source, std::uint32_t limit);

/// Vertices within distance `radius` of `source` (source included).
VertexSet ball(const Graph& g, VertexId source, std::uint32_t radius);

/// The bipartite graph formed by the cross edges between two disjoint vertex
/// sets. Stored with side-local indices: rows_a()[i] is a set over side B.
class BipartitePair {
 public:
  BipartitePair() = default;
  BipartitePair(std::size_t size_a, std::size_t size_b, std::span<const Edge> edges);

  /// Extracts the pair (A, B) from g. Local index i on each side is the i-th
  /// smallest member.
  static BipartitePair from_graph(const Graph& g, const VertexSet& a, const VertexSet& b);

  std::size_t size_a() const noexcept { return rows_a_.size(); }
  std::size_t size_b() const noexcept { return rows_b_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  const VertexSet& neighbors_of_a(VertexId a) const { return rows_a_.at(a); }
  const VertexSet& neighbors_of_b(VertexId b) const { return rows_b_.at(b); }
  bool adjacent(VertexId a, VertexId b) const { return rows_a_.at(a).contains(b); }

  std::span<const VertexSet> rows_a() const noexcept { return rows_a_; }
  std::span<const VertexSet> rows_b() const noexcept { return rows_b_; }

  /// Edges as (a, b) local index pairs.
  std::vector<Edge> edges() const;

  /// The same pair with the roles of A and B exchanged.
  BipartitePair swapped() const;

  /// e(X, Y) for local subsets X ⊆ A, Y ⊆ B.
  std::size_t edges_between(const VertexSet& x, const VertexSet& y) const;

  VertexSet side_a() const { return VertexSet::full(Universe::kLocal, size_a()); }
  VertexSet side_b() const { return VertexSet::full(Universe::kLocal, size_b()); }

  friend bool operator==(const BipartitePair& a, const BipartitePair& b) = default;

 private:
  std::vector<VertexSet> rows_a_;
  std::vector<VertexSet> rows_b_;
  std::size_t edge_count_ = 0;
};

/// d(A,B) = e(A,B) / (|A| |B|), exact. Throws UndefinedDensity on an empty side.
Rational density(const BipartitePair& p);

/// d(X,Y) within a pair for nonempty local subsets.
Rational density(const BipartitePair& p, const VertexSet& x, const VertexSet& y);

}  // namespace blowup

#endif  // BLOWUP_GRAPH_HPP
