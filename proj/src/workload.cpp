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


#include "blowup/workload.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "blowup/batch.hpp"
#include "blowup/embedder.hpp"
#include "blowup/errors.hpp"
#include "blowup/rng.hpp"

namespace blowup {

std::size_t PatternSpec::clusters() const {
  if (kind == "sqhamcycle") return 3;
  if (kind == "powhamcycle") return k + 1;
  return 2;
}

ClusterGraph PatternSpec::default_cluster_graph() const { return ClusterGraph::complete(clusters()); }

PatternSpec parse_pattern_spec(const std::string& text) {
  PatternSpec p;
  if (text == "matching" || text == "hampath" || text == "sqhamcycle" || text == "tree") {
    p.kind = text;
    return p;
  }
  const std::string prefix = "powhamcycle:";
  if (text.rfind(prefix, 0) != 0) throw ContractViolation("unknown pattern '" + text + "'");
  const std::string power = text.substr(prefix.size());
  if (power.empty() || !std::all_of(power.begin(), power.end(), [](char ch) { return ch >= '0' && ch <= '9'; }) ||
      power.size() > 6) {
    throw ContractViolation("powhamcycle needs a power, e.g. powhamcycle:3");
  }
  p.kind = "powhamcycle";
  p.k = std::stoul(power);
  if (p.k < 1) throw ContractViolation("powhamcycle power must be at least 1");
  return p;
}

namespace {

PatternGraph make_pattern(const WorkloadSpec& spec) {
  const std::size_t n = spec.n_per_cluster;
  const auto& kind = spec.pattern.kind;
  if (kind == "matching") return gen_matching_pattern(n);
  if (kind == "hampath") return gen_hamiltonian_path_pattern(n);
  if (kind == "sqhamcycle") return gen_square_ham_cycle_pattern(n);
  if (kind == "powhamcycle") return gen_power_ham_cycle_pattern(n, spec.pattern.k);
  if (kind == "tree") {
    return gen_bounded_tree_pattern(n, spec.tree_max_degree,
                                    Rng(spec.seed).split(SeedStream::kGenerator).split(0xA11CE).seed());
  }
  throw ContractViolation("unknown pattern '" + kind + "'");
}

}  // namespace

Instance make_workload(const WorkloadSpec& spec) {
  if (spec.n_per_cluster == 0) throw ContractViolation("N must be positive");
  ClusterGraph r_graph = spec.r_graph ? *spec.r_graph : spec.pattern.default_cluster_graph();
  if (r_graph.r() != spec.pattern.clusters()) {
    throw ContractViolation(spec.pattern.kind + " needs r = " + std::to_string(spec.pattern.clusters()) +
                            ", the cluster graph has r = " + std::to_string(r_graph.r()));
  }
  PatternGraph pattern = make_pattern(spec);
  ParameterCascade params = ParameterCascade::defaults(spec.delta, pattern.max_degree);
  if (spec.adjust_params) spec.adjust_params(params);
  std::vector<Restriction> restrictions;
  if (spec.restricted_per_cluster > 0) {
    const Rational fraction = spec.restriction_fraction.value_or(params.c);
    const auto size = static_cast<std::size_t>(ceil_times(fraction, static_cast<std::int64_t>(spec.n_per_cluster)));
    restrictions = gen_restrictions(pattern, spec.n_per_cluster, spec.restricted_per_cluster, size,
                                    Rng(spec.seed).split(SeedStream::kGenerator).split(0x5E7).seed());
  }
  return assemble_instance(r_graph, spec.n_per_cluster, spec.delta, std::move(pattern), params,
                           std::move(restrictions), spec.seed);
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : (values[m - 1] + values[m]) / 2.0;
}

BenchRow bench_size(const PatternSpec& pattern, const Rational& delta, std::size_t n_per_cluster, std::size_t trials,
                    std::uint64_t seed, bool batched) {
  BenchRow row;
  row.n_per_cluster = n_per_cluster;
  row.trials = trials;
  std::vector<double> total, phase1, phase2;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    WorkloadSpec spec;
    spec.pattern = pattern;
    spec.n_per_cluster = n_per_cluster;
    spec.delta = delta;
    spec.seed = Rng(seed).split(n_per_cluster).split(trial).seed();
    const Instance inst = make_workload(spec);
    row.order = inst.n();
    const auto start = std::chrono::steady_clock::now();
    const RunReport report =
        batched ? run_batched(inst, inst.params.alpha_batch).report : run(inst);
    total.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    phase1.push_back(report.phase1_seconds);
    phase2.push_back(report.phase2_seconds);
    row.successes += report.success ? 1 : 0;
    row.audit_warnings += report.warnings.size();
  }
  row.median_seconds = median(total);
  row.median_phase1_seconds = median(phase1);
  row.median_phase2_seconds = median(phase2);
  return row;
}

}  // namespace blowup
