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

#include "blowup/instance.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "blowup/errors.hpp"
#include "blowup/rng.hpp"

namespace blowup {
namespace {

PatternGraph make_pattern(std::size_t order, const std::vector<Edge>& edges, std::vector<std::uint32_t> assignment,
                          std::size_t declared_max_degree) {
  PatternGraph p;
  p.graph = Graph(Universe::kPattern, order, edges);
  p.max_degree = declared_max_degree;
  p.assignment = std::move(assignment);
  return p;
}

}  // namespace

std::vector<VertexId> PatternGraph::cluster_class(std::uint32_t i) const {
  std::vector<VertexId> out;
  for (VertexId x = 0; x < assignment.size(); ++x) {
    if (assignment[x] == i) out.push_back(x);
  }
  return out;
}

PatternGraph gen_hamiltonian_path_pattern(std::size_t n_per_cluster) {
  if (n_per_cluster == 0) throw DegenerateInstance("hamiltonian path needs N >= 1");
  const std::size_t n = 2 * n_per_cluster;
  std::vector<Edge> edges;
  std::vector<std::uint32_t> psi(n);
  for (VertexId i = 0; i < n; ++i) {
    psi[i] = i % 2;
    if (i + 1 < n) edges.emplace_back(i, i + 1);
  }
  return make_pattern(n, edges, std::move(psi), n == 2 ? 1 : 2);
}

PatternGraph gen_power_ham_cycle_pattern(std::size_t n_per_cluster, std::size_t k) {
  if (k < 1) throw DegenerateInstance("cycle power k must be at least 1");
  if (n_per_cluster < 2) throw DegenerateInstance("cycle power patterns need N >= 2");
  const std::size_t n = (k + 1) * n_per_cluster;
  std::vector<Edge> edges;
  std::vector<std::uint32_t> psi(n);
  for (VertexId i = 0; i < n; ++i) {
    psi[i] = static_cast<std::uint32_t>(i % (k + 1));
    for (std::size_t j = 1; j <= k; ++j) edges.emplace_back(i, static_cast<VertexId>((i + j) % n));
  }
  return make_pattern(n, edges, std::move(psi), 2 * k);
}

PatternGraph gen_square_ham_cycle_pattern(std::size_t n_per_cluster) {
  return gen_power_ham_cycle_pattern(n_per_cluster, 2);
}

PatternGraph gen_bounded_tree_pattern(std::size_t n_per_cluster, std::size_t max_degree, std::uint64_t seed,
                                      std::size_t max_attempts) {
  if (n_per_cluster == 0) throw DegenerateInstance("tree needs N >= 1");
  if (max_degree < 3) throw ContractViolation("tree max degree must be at least 3");
  const std::size_t n = 2 * n_per_cluster;
  Rng rng(seed);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Rng local = rng.split(attempt);
    std::vector<Edge> edges;
    std::vector<std::uint32_t> color(n, 0);
    std::vector<std::size_t> degree(n, 0);
    std::array<std::size_t, 2> class_size{1, 0};
    bool dead_end = false;
    for (VertexId v = 1; v < n && !dead_end; ++v) {
      std::uint32_t want;
      if (class_size[0] == n_per_cluster) {
        want = 1;
      } else if (class_size[1] == n_per_cluster) {
        want = 0;
      } else {
        want = static_cast<std::uint32_t>(local.below(2));
      }
      std::vector<VertexId> parents;
      for (VertexId u = 0; u < v; ++u) {
        if (color[u] != want && degree[u] < max_degree) parents.push_back(u);
      }
      if (parents.empty()) {
        dead_end = true;
        break;
      }
      VertexId parent = parents[local.below(parents.size())];
      edges.emplace_back(parent, v);
      ++degree[parent];
      ++degree[v];
      color[v] = want;
      ++class_size[want];
    }
    if (!dead_end) return make_pattern(n, edges, std::move(color), max_degree);
  }
  throw GenerationFailure("no balanced tree found after " + std::to_string(max_attempts) + " attempts; reseed");
}

PatternGraph gen_matching_pattern(std::size_t n_per_cluster) {
  if (n_per_cluster == 0) throw DegenerateInstance("matching needs N >= 1");
  const std::size_t n = 2 * n_per_cluster;
  std::vector<Edge> edges;
  std::vector<std::uint32_t> psi(n);
  for (VertexId i = 0; i < n; ++i) {
    psi[i] = i % 2;
    if (i % 2 == 0) edges.emplace_back(i, i + 1);
  }
  return make_pattern(n, edges, std::move(psi), 1);
}

std::vector<Restriction> gen_restrictions(const PatternGraph& pattern, std::size_t n_per_cluster,
                                          std::size_t per_cluster, std::size_t set_size, std::uint64_t seed) {
  if (set_size == 0 || set_size > n_per_cluster) throw ContractViolation("restriction set size out of range");
  Rng rng(seed);
  std::uint32_t r = 0;
  for (auto c : pattern.assignment) r = std::max(r, c + 1);
  const std::size_t n = pattern.order();
  std::vector<Restriction> out;
  for (std::uint32_t i = 0; i < r; ++i) {
    auto cls = pattern.cluster_class(i);
    if (per_cluster > cls.size()) throw ContractViolation("more restrictions than cluster members");
    rng.shuffle(std::span<VertexId>(cls));
    std::vector<VertexId> chosen(cls.begin(), cls.begin() + static_cast<std::ptrdiff_t>(per_cluster));
    std::sort(chosen.begin(), chosen.end());
    for (VertexId x : chosen) {
      std::vector<VertexId> hosts(n_per_cluster);
      std::iota(hosts.begin(), hosts.end(), static_cast<VertexId>(i * n_per_cluster));
      rng.shuffle(std::span<VertexId>(hosts));
      hosts.resize(set_size);
      out.push_back({x, VertexSet::of(Universe::kHost, n, hosts)});
    }
  }
  std::sort(out.begin(), out.end(), [](const Restriction& a, const Restriction& b) { return a.vertex < b.vertex; });
  return out;
}

void validate_pattern(const PatternGraph& pattern, const ClusterGraph& r_graph, std::size_t n_per_cluster) {
  const auto& g = pattern.graph;
  if (g.universe() != Universe::kPattern) throw InvariantError("pattern.universe", "pattern graph is not tagged pattern");
  if (pattern.assignment.size() != g.order()) {
    throw InvariantError("pattern.assignment-size", "assignment has " + std::to_string(pattern.assignment.size()) +
                                                        " entries for " + std::to_string(g.order()) + " vertices");
  }
  if (g.order() != r_graph.r() * n_per_cluster) {
    throw InvariantError("pattern.spanning", "pattern order " + std::to_string(g.order()) + " != r*N = " +
                                                 std::to_string(r_graph.r() * n_per_cluster));
  }
  if (g.max_degree() > pattern.max_degree) {
    throw InvariantError("pattern.max-degree", "max degree " + std::to_string(g.max_degree()) +
                                                   " exceeds declared bound " + std::to_string(pattern.max_degree));
  }
  std::vector<std::size_t> sizes(r_graph.r(), 0);
  for (VertexId x = 0; x < g.order(); ++x) {
    if (pattern.assignment[x] >= r_graph.r()) {
      throw InvariantError("pattern.assignment-range", "vertex " + std::to_string(x) + " assigned to cluster " +
                                                           std::to_string(pattern.assignment[x]));
    }
    ++sizes[pattern.assignment[x]];
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] != n_per_cluster) {
      throw InvariantError("pattern.class-size", "cluster " + std::to_string(i) + " has " + std::to_string(sizes[i]) +
                                                     " pattern vertices, expected " + std::to_string(n_per_cluster));
    }
  }
  for (auto [x, y] : g.edges()) {
    auto cx = pattern.assignment[x];
    auto cy = pattern.assignment[y];
    if (cx == cy || !r_graph.has_edge(cx, cy)) {
      throw InvariantError("pattern.assignment-edge", "edge {" + std::to_string(x) + "," + std::to_string(y) +
                                                          "} maps to clusters " + std::to_string(cx) + "," +
                                                          std::to_string(cy) + " which are not adjacent in R");
    }
  }
}

void validate_instance(const Instance& inst) {
  inst.params.validate();
  validate_host(inst.host);
  validate_pattern(inst.pattern, inst.host.clusters, inst.host.n_per_cluster);
  if (inst.pattern.max_degree > inst.params.max_degree) {
    throw InvariantError("pattern.max-degree", "pattern bound " + std::to_string(inst.pattern.max_degree) +
                                                   " exceeds cascade Delta " + std::to_string(inst.params.max_degree));
  }
  const std::size_t big_n = inst.host.n_per_cluster;
  std::vector<std::size_t> per_cluster(inst.r(), 0);
  std::vector<bool> seen(inst.pattern.order(), false);
  for (const auto& res : inst.restrictions) {
    if (res.vertex >= inst.pattern.order()) throw InvariantError("restriction.vertex", "restricted vertex out of range");
    if (seen[res.vertex]) {
      throw InvariantError("restriction.duplicate", "vertex " + std::to_string(res.vertex) + " restricted twice");
    }
    seen[res.vertex] = true;
    if (res.allowed.universe() != Universe::kHost || res.allowed.universe_size() != inst.n()) {
      throw InvariantError("restriction.universe", "allowed set is not over the host universe");
    }
    auto cluster = inst.pattern.assignment[res.vertex];
    if (!res.allowed.is_subset_of(inst.host.cluster(cluster))) {
      throw InvariantError("restriction.cluster", "allowed set of vertex " + std::to_string(res.vertex) +
                                                      " leaves its cluster");
    }
    // |C_x| >= c N
    if (Rational(static_cast<std::int64_t>(res.allowed.count())) < inst.params.c * static_cast<std::int64_t>(big_n)) {
      throw InvariantError("restriction.size", "allowed set of vertex " + std::to_string(res.vertex) + " has " +
                                                   std::to_string(res.allowed.count()) + " < c*N members");
    }
    ++per_cluster[cluster];
  }
  for (std::size_t i = 0; i < per_cluster.size(); ++i) {
    if (Rational(static_cast<std::int64_t>(per_cluster[i])) > inst.params.alpha * static_cast<std::int64_t>(big_n)) {
      throw InvariantError("restriction.count", "cluster " + std::to_string(i) + " has " +
                                                    std::to_string(per_cluster[i]) + " > alpha*N restrictions");
    }
  }
}

Instance assemble_instance(const ClusterGraph& r_graph, std::size_t n_per_cluster, const Rational& delta,
                           PatternGraph pattern, ParameterCascade params, std::vector<Restriction> restrictions,
                           std::uint64_t seed) {
  if (n_per_cluster == 0) throw InvariantError("host.cluster-size", "N must be positive");
  if (delta <= 0 || delta > 1) throw InvariantError("cascade.order", "delta must lie in (0,1]");
  Instance inst;
  inst.seed = seed;
  inst.params = std::move(params);
  inst.pattern = std::move(pattern);
  inst.restrictions = std::move(restrictions);
  // Validate the assignment against R before spending time on the host.
  validate_pattern(inst.pattern, r_graph, n_per_cluster);

  const Rng gen = Rng(seed).split(SeedStream::kGenerator);
  const std::size_t n = r_graph.r() * n_per_cluster;
  GraphBuilder builder(Universe::kHost, n);
  std::vector<ClusterEdge> recorded;
  std::size_t k = 0;
  for (const auto& e : r_graph.edges()) {
    BipartitePair pair = generate_super_regular_pair(n_per_cluster, delta, inst.params.eps, gen.split(k++).seed());
    for (auto [a, b] : pair.edges()) {
      builder.add_edge(static_cast<VertexId>(e.i * n_per_cluster + a), static_cast<VertexId>(e.j * n_per_cluster + b));
    }
    recorded.push_back({e.i, e.j, density(pair)});
  }
  inst.host = HostGraph{ClusterGraph(r_graph.r(), std::move(recorded)), n_per_cluster, std::move(builder).build()};
  validate_instance(inst);
  return inst;
}

}  // namespace blowup
