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

// Regularity of bipartite pairs and blow-up host graphs.
//
// A pair (A,B) is eps-regular when every X ⊆ A, Y ⊆ B with |X| > eps|A| and
// |Y| > eps|B| has |d(X,Y) - d(A,B)| < eps. Deciding this exactly is
// exponential, so it is only offered for small sides; larger pairs get a
// one-sided codegree certificate.

#ifndef BLOWUP_REGULARITY_HPP
#define BLOWUP_REGULARITY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blowup/graph.hpp"
#include "blowup/rational.hpp"

namespace blowup {

inline constexpr std::size_t kDefaultExactLimit = 12;

struct IrregularityWitness {
  VertexSet x;  // local subset of side A
  VertexSet y;  // local subset of side B
  Rational deviation;  // |d(X,Y) - d(A,B)|
};

struct RegularityVerdict {
  bool regular = true;
  /// Present iff !regular: a subset pair of maximal deviation.
  std::optional<IrregularityWitness> witness;
};

/// Exhaustive decision. Throws SizeLimitError if a side exceeds `limit`
/// (hard-capped at 20), UndefinedDensity on an empty side.
RegularityVerdict is_regular_exact(const BipartitePair& p, const Rational& eps,
                                   std::size_t limit = kDefaultExactLimit);

/// Codegree certificate. With W = M - dJ (M the |A|x|B| biadjacency matrix),
///   S = sum over u,u' in A of |codeg(u,u') - d(deg u + deg u') + d^2 |B||
/// and for any X, Y: |e(X,Y) - d|X||Y|| <= sqrt(S |Y|). Hence S <= eps^5 |A|^2 |B|
/// forces every qualifying subset pair to deviate by less than eps. Passing
/// proves eps-regularity; failing is inconclusive.
struct RegularityCertificate {
  bool passed = false;
  bool conclusive = false;  // true iff passed
  Rational pair_density;
  std::uint64_t codegree_sum = 0;    // sum over ordered u,u' in A (u = u' included)
  double simple_deviation = 0.0;     // sum |codeg(u,u') - d^2 |B||
  double centered_statistic = 0.0;   // S above
  double threshold = 0.0;            // eps^5 |A|^2 |B|
  double implied_eps = 0.0;          // (S / (|A|^2 |B|))^(1/5)
};

RegularityCertificate certify_regular(const BipartitePair& p, const Rational& eps);

struct SuperRegularityReport {
  bool super_regular = false;
  bool regular = false;
  bool used_exact = false;
  std::optional<RegularityVerdict> verdict;
  std::optional<RegularityCertificate> certificate;
  std::vector<VertexId> failing_a;  // local indices with deg < delta |B|
  std::vector<VertexId> failing_b;
};

/// Regularity (exact when both sides are within `exact_limit`, certificate
/// otherwise) plus both minimum-degree conditions.
SuperRegularityReport is_super_regular(const BipartitePair& p, const Rational& eps, const Rational& delta,
                                       std::size_t exact_limit = kDefaultExactLimit);

/// Seeded pair with edge probability `delta`, then a repair pass that tops up
/// every vertex below ceil(delta n) by joining it to its lowest-degree
/// non-neighbours. Bit-exact for a fixed seed. `eps` is the regularity
/// parameter the caller intends to use; the construction does not depend on it.
BipartitePair generate_super_regular_pair(std::size_t n, const Rational& delta, const Rational& eps,
                                          std::uint64_t seed);

struct ClusterEdge {
  std::uint32_t i = 0;
  std::uint32_t j = 0;  // i < j
  Rational density{1};

  friend bool operator==(const ClusterEdge&, const ClusterEdge&) = default;
};

/// The reduced graph R on r clusters, with a density per edge.
class ClusterGraph {
 public:
  ClusterGraph() = default;
  ClusterGraph(std::size_t r, std::vector<ClusterEdge> edges);

  static ClusterGraph complete(std::size_t r);
  /// "K2", "K3", "triangle", or an edge list such as "0-1,1-2" (r inferred
  /// as max index + 1 unless `min_r` is larger).
  static ClusterGraph parse(const std::string& spec, std::size_t min_r = 0);

  std::size_t r() const noexcept { return r_; }
  std::span<const ClusterEdge> edges() const noexcept { return edges_; }
  bool has_edge(std::uint32_t i, std::uint32_t j) const;
  /// Throws ContractViolation for a non-edge.
  const Rational& density(std::uint32_t i, std::uint32_t j) const;
  void set_density(std::uint32_t i, std::uint32_t j, const Rational& d);

  friend bool operator==(const ClusterGraph&, const ClusterGraph&) = default;

 private:
  std::size_t index_of(std::uint32_t i, std::uint32_t j) const;

  std::size_t r_ = 0;
  std::vector<ClusterEdge> edges_;
};

/// G on r*N vertices; cluster i is the index range [iN, (i+1)N).
struct HostGraph {
  ClusterGraph clusters;
  std::size_t n_per_cluster = 0;
  Graph graph;

  std::size_t order() const noexcept { return graph.order(); }
  std::uint32_t cluster_of(VertexId v) const { return static_cast<std::uint32_t>(v / n_per_cluster); }
  VertexSet cluster(std::uint32_t i) const;
  BipartitePair pair(std::uint32_t i, std::uint32_t j) const;

  friend bool operator==(const HostGraph&, const HostGraph&) = default;
};

/// R(N): every cluster edge becomes K_{N,N}; recorded densities are 1.
HostGraph build_complete_blowup(const ClusterGraph& r_graph, std::size_t n);

/// Throws InvariantError ("host.*") when the host does not respect its cluster
/// structure.
void validate_host(const HostGraph& host);

}  // namespace blowup

#endif  // BLOWUP_REGULARITY_HPP
