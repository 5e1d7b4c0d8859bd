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


// Named workloads: pattern families with the cluster graph they need, seeded
// instance assembly, and the timing loop behind `blowup bench`.

#ifndef BLOWUP_WORKLOAD_HPP
#define BLOWUP_WORKLOAD_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blowup/instance.hpp"
#include "blowup/rational.hpp"

namespace blowup {

struct PatternSpec {
  std::string kind;   // matching, hampath, sqhamcycle, powhamcycle, tree
  std::size_t k = 0;  // power, for powhamcycle

  /// Number of clusters the pattern's assignment uses.
  std::size_t clusters() const;
  /// The cluster graph used when none is given: K2, the triangle, K_{k+1}.
  ClusterGraph default_cluster_graph() const;
};

/// "matching", "hampath", "sqhamcycle", "powhamcycle:k" or "tree". Throws
/// ContractViolation otherwise.
PatternSpec parse_pattern_spec(const std::string& text);

struct WorkloadSpec {
  PatternSpec pattern{"hampath"};
  std::optional<ClusterGraph> r_graph;  // default_cluster_graph() when empty
  std::size_t n_per_cluster = 0;
  Rational delta{1};
  std::uint64_t seed = 0;
  std::size_t tree_max_degree = 3;
  std::size_t restricted_per_cluster = 0;
  std::optional<Rational> restriction_fraction;  // allowed-set size / N; c when empty
  /// Edits the default cascade before assembly.
  std::function<void(ParameterCascade&)> adjust_params;
};

/// Pattern, default cascade, restrictions and host, all drawn from `seed`.
/// Throws ContractViolation when the cluster graph has the wrong number of
/// clusters.
Instance make_workload(const WorkloadSpec& spec);

struct BenchRow {
  std::size_t n_per_cluster = 0;
  std::size_t order = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double median_seconds = 0.0;
  double median_phase1_seconds = 0.0;
  double median_phase2_seconds = 0.0;
  std::size_t audit_warnings = 0;

  double success_rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

/// `trials` runs at one size; trial i uses seed Rng(seed).split(N).split(i).
BenchRow bench_size(const PatternSpec& pattern, const Rational& delta, std::size_t n_per_cluster, std::size_t trials,
                    std::uint64_t seed, bool batched);

double median(std::vector<double> values);

}  // namespace blowup

#endif  // BLOWUP_WORKLOAD_HPP
