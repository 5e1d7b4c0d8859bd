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

// Pattern graphs H with their cluster assignment, and whole embedding
// instances. Every generator returns the assignment alongside H; nothing here
// searches for one.

#ifndef BLOWUP_INSTANCE_HPP
#define BLOWUP_INSTANCE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "blowup/graph.hpp"
#include "blowup/params.hpp"
#include "blowup/regularity.hpp"

namespace blowup {

struct PatternGraph {
  Graph graph;                           // Universe::kPattern
  std::size_t max_degree = 0;            // declared bound on Δ(H)
  std::vector<std::uint32_t> assignment;  // cluster of each pattern vertex

  std::size_t order() const noexcept { return graph.order(); }
  /// Pattern vertices assigned to cluster i, in increasing order.
  std::vector<VertexId> cluster_class(std::uint32_t i) const;

  friend bool operator==(const PatternGraph&, const PatternGraph&) = default;
};

/// Pattern vertex `vertex` may only be mapped into `allowed` (host universe,
/// inside its assigned cluster).
struct Restriction {
  VertexId vertex = 0;
  VertexSet allowed;

  friend bool operator==(const Restriction&, const Restriction&) = default;
};

struct Instance {
  HostGraph host;
  PatternGraph pattern;
  std::vector<Restriction> restrictions;
  ParameterCascade params;
  std::uint64_t seed = 0;

  std::size_t n() const noexcept { return host.order(); }
  std::size_t r() const noexcept { return host.clusters.r(); }
  std::size_t n_per_cluster() const noexcept { return host.n_per_cluster; }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Path on 2N vertices, assignment alternating 0,1,0,1,...
PatternGraph gen_hamiltonian_path_pattern(std::size_t n_per_cluster);

/// Square of the Hamiltonian cycle on 3N vertices with assignment i mod 3.
/// Throws DegenerateInstance for N < 2.
PatternGraph gen_square_ham_cycle_pattern(std::size_t n_per_cluster);

/// k-th power of the Hamiltonian cycle on (k+1)N vertices, assignment
/// i mod (k+1), valid for R = K_{k+1}. Throws DegenerateInstance for N < 2.
PatternGraph gen_power_ham_cycle_pattern(std::size_t n_per_cluster, std::size_t k);

/// Random tree on 2N vertices with maximum degree <= max_degree whose proper
/// 2-colouring is balanced; the colouring is the assignment. Each new vertex
/// takes a colour whose class is not yet full and attaches to a random
/// opposite-colour vertex with spare degree; a dead end restarts the attempt.
/// Throws GenerationFailure after `max_attempts` dead ends.
PatternGraph gen_bounded_tree_pattern(std::size_t n_per_cluster, std::size_t max_degree, std::uint64_t seed,
                                      std::size_t max_attempts = 1000);

/// Perfect matching {2i, 2i+1}, assignment by parity.
PatternGraph gen_matching_pattern(std::size_t n_per_cluster);

/// `per_cluster` random restricted vertices per cluster, each with a random
/// allowed set of `set_size` host vertices inside its cluster.
std::vector<Restriction> gen_restrictions(const PatternGraph& pattern, std::size_t n_per_cluster,
                                          std::size_t per_cluster, std::size_t set_size, std::uint64_t seed);

/// Throws InvariantError ("pattern.*") unless the pattern is a valid spanning
/// assignment into R(N).
void validate_pattern(const PatternGraph& pattern, const ClusterGraph& r_graph, std::size_t n_per_cluster);

/// Host, pattern, restriction and cascade checks. Throws InvariantError.
void validate_instance(const Instance& inst);

/// Generates a super-regular pair per cluster edge (complete when delta = 1),
/// records empirical densities, and validates the result.
Instance assemble_instance(const ClusterGraph& r_graph, std::size_t n_per_cluster, const Rational& delta,
                           PatternGraph pattern, ParameterCascade params, std::vector<Restriction> restrictions,
                           std::uint64_t seed);

}  // namespace blowup

#endif  // BLOWUP_INSTANCE_HPP
