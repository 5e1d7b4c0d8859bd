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


#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "blowup/embedder.hpp"
#include "blowup/errors.hpp"
#include "blowup/instance.hpp"
#include "blowup/workload.hpp"
#include "oracles.hpp"

namespace blowup {
namespace {

Instance workload(const std::string& pattern, std::size_t n, const Rational& delta, std::uint64_t seed = 1) {
  WorkloadSpec spec;
  spec.pattern = parse_pattern_spec(pattern);
  spec.n_per_cluster = n;
  spec.delta = delta;
  spec.seed = seed;
  return make_workload(spec);
}

const Instance& seeded_path() {
  static const Instance inst = workload("hampath", 200, Rational(1, 2), 7);
  return inst;
}

// C9 with cluster i mod 3 on the triangle.
Instance nine_cycle() {
  std::vector<Edge> edges;
  for (VertexId i = 0; i < 9; ++i) edges.emplace_back(i, (i + 1) % 9);
  PatternGraph p;
  p.graph = Graph(Universe::kPattern, 9, edges);
  p.max_degree = 2;
  for (std::uint32_t i = 0; i < 9; ++i) p.assignment.push_back(i % 3);
  return assemble_instance(ClusterGraph::parse("triangle"), 3, Rational(1), p, ParameterCascade::defaults(Rational(1), 2),
                           {}, 0);
}

EmbedOptions checked(oracle::StepChecker& checker) {
  EmbedOptions options;
  options.check_invariants = true;
  options.on_step = [&checker](const EmbeddingState& b, const EmbeddingState& a, VertexId x, VertexId v) {
    checker(b, a, x, v);
  };
  return options;
}

void expect_success(const Instance& inst, const RunReport& report) {
  ASSERT_TRUE(report.success) << (report.failure ? report.failure->kind + ": " + report.failure->message : "");
  const auto verdict = verify_embedding(inst, report.embedding);
  EXPECT_TRUE(verdict.ok) << (verdict.ok ? "" : verdict.violations.front().message);
}

TEST(Preprocess, MatchingPatternHasOneNeighbourPerBuffer) {
  const auto inst = workload("matching", 30, Rational(1));
  const auto s = preprocess(inst);
  EXPECT_EQ(s.t0, s.m);
  EXPECT_TRUE(oracle::buffers_far_apart(inst, s));
}

TEST(Preprocess, NineCycleCannotHoldThreeBuffers) {
  const auto inst = nine_cycle();
  EXPECT_THROW(preprocess(inst, nullptr, true), PreprocessingFailure);
  RunReport report;
  const auto s = preprocess(inst, &report, false);
  EXPECT_LE(s.m, 2u);
  EXPECT_NE(std::find(report.clamped.begin(), report.clamped.end(), "buffer-count"), report.clamped.end());
  EXPECT_TRUE(oracle::buffers_far_apart(inst, s));

  EmbedOptions strict;
  strict.strict_buffers = true;
  const auto r = run(inst, strict);
  ASSERT_TRUE(r.failure.has_value());
  EXPECT_EQ(r.failure->kind, "preprocessing-failure");
}

TEST(Preprocess, PathBuffersAreSpreadOut) {
  auto inst = seeded_path();
  auto& p = inst.params;
  p.eps = Rational(1, 100);
  p.eps1 = Rational(2, 100);
  p.eps2 = Rational(3, 100);
  p.d3 = Rational(4, 100);
  p.d2 = Rational(9, 200);
  p.d1 = Rational(1, 20);
  const auto s = preprocess(inst);
  ASSERT_EQ(s.buffers.size(), 2u);
  for (const auto& b : s.buffers) {
    EXPECT_EQ(b.size(), 10u);
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) EXPECT_GE(std::max(b[i], b[j]) - std::min(b[i], b[j]), 8u);
  }
  EXPECT_TRUE(oracle::buffers_far_apart(inst, s));
}

TEST(Preprocess, OrderIsNeighbourhoodsThenRestOfThenBuffers) {
  const auto& inst = seeded_path();
  const auto s = preprocess(inst);
  ASSERT_EQ(s.order.size(), inst.n());
  std::set<VertexId> seen(s.order.begin(), s.order.end());
  EXPECT_EQ(seen.size(), inst.n());
  std::set<VertexId> nbrs;
  for (const auto& b : s.buffers)
    for (VertexId x : b) inst.pattern.graph.neighbors(x).for_each([&](VertexId y) { nbrs.insert(y); });
  EXPECT_EQ(s.t0, nbrs.size());
  for (std::size_t i = 0; i < s.t0; ++i) EXPECT_TRUE(nbrs.count(s.order[i]));
  for (std::size_t i = s.order.size() - s.m; i < s.order.size(); ++i) EXPECT_TRUE(s.is_buffer[s.order[i]]);
  EXPECT_EQ(s.t1, static_cast<std::size_t>(floor_times(inst.params.d2, static_cast<std::int64_t>(inst.n()))));
}

TEST(Select, CompleteBlowupAcceptsEveryFreeCandidate) {
  const auto inst = workload("hampath", 20, Rational(1));
  auto s = preprocess(inst);
  for (int step = 0; step < 10; ++step) {
    const VertexId x = s.order[s.t];
    const auto sel = select_image(inst, s, x);
    EXPECT_EQ(sel.qualifying, s.host_sets[x].count());
    ASSERT_TRUE(sel.image.has_value());
    update_after_embedding(inst, s, x, *sel.image);
  }
}

TEST(Select, NoUnembeddedNeighboursPicksTheFirstCandidate) {
  const auto inst = workload("matching", 10, Rational(1, 2), 3);
  auto s = preprocess(inst);
  const VertexId x = s.order[s.t];
  const VertexId partner = x ^ 1u;
  update_after_embedding(inst, s, partner, s.host_sets[partner].first());
  const auto sel = select_image(inst, s, x);
  ASSERT_TRUE(sel.image.has_value());
  // Its neighbour is embedded, so every condition is vacuous.
  EXPECT_EQ(*sel.image, s.host_sets[x].first());
}

TEST(Select, SeededFirstStepsSatisfyEveryWindow) {
  const auto& inst = seeded_path();
  auto s = preprocess(inst);
  oracle::StepChecker checker(inst);
  for (int step = 0; step < 5; ++step) {
    const VertexId x = s.order[s.t];
    const auto sel = select_image(inst, s, x);
    ASSERT_TRUE(sel.image.has_value());
    const auto before = s;
    update_after_embedding(inst, s, x, *sel.image);
    checker(before, s, x, *sel.image);
  }
  EXPECT_TRUE(checker.clean()) << checker.problems().front();
}

TEST(Update, NonNeighboursLoseOnlyTheImage) {
  const auto& inst = seeded_path();
  auto s = preprocess(inst);
  const auto before = s;
  const VertexId x = s.order[0];
  const VertexId v = s.host_sets[x].first();
  update_after_embedding(inst, s, x, v);
  for (VertexId y = 0; y < inst.n(); ++y) {
    if (y == x) continue;
    if (inst.pattern.graph.adjacent(x, y)) {
      EXPECT_EQ(s.candidates[y], before.candidates[y] & inst.host.graph.neighbors(v));
    } else {
      EXPECT_EQ(s.candidates[y], before.candidates[y]);
      EXPECT_EQ(before.host_sets[y].count() - s.host_sets[y].count(), before.host_sets[y].contains(v) ? 1u : 0u);
    }
    EXPECT_TRUE(s.host_sets[y].is_subset_of(s.candidates[y]));
    EXPECT_FALSE(s.host_sets[y].intersects(s.occupied));
  }
  EXPECT_EQ(s.t, 1u);
  EXPECT_FALSE(check_state(inst, s).has_value());
}

TEST(Update, CompleteBlowupNeighboursKeepTheirCandidates) {
  const auto inst = workload("hampath", 10, Rational(1));
  auto s = preprocess(inst);
  const auto before = s;
  const VertexId x = s.order[0];
  update_after_embedding(inst, s, x, s.host_sets[x].first());
  inst.pattern.graph.neighbors(x).for_each([&](VertexId y) { EXPECT_EQ(s.candidates[y], before.candidates[y]); });
  EXPECT_THROW(update_after_embedding(inst, s, x, s.host_sets[x].first()), ContractViolation);
}

TEST(Sweeps, PatternSweepPullsExceptionalVerticesForward) {
  const auto inst = workload("hampath", 20, Rational(1));
  auto s = preprocess(inst);
  auto none = s;
  EXPECT_EQ(sweep_exceptional_pattern(inst, none).total, 0u);
  EXPECT_EQ(none.order, s.order);

  const VertexId a = s.order[30];
  const VertexId b = s.order[25];
  s.host_sets[a].clear();
  s.host_sets[b].clear();
  const auto rec = sweep_exceptional_pattern(inst, s);
  EXPECT_EQ(rec.total, 2u);
  EXPECT_EQ(s.order[0], b);
  EXPECT_EQ(s.order[1], a);
}

TEST(Sweeps, HostSweepIsANoOpOnCompleteBlowups) {
  const auto inst = workload("hampath", 30, Rational(1));
  auto s = preprocess(inst);
  RunReport report;
  while (s.t < s.t0) ASSERT_TRUE(embed_step(inst, s, report));
  const auto rec = sweep_exceptional_host(inst, s);
  for (auto e : rec.exceptional) EXPECT_EQ(e, 0u);
  EXPECT_TRUE(rec.pulled.empty());
}

TEST(Sweeps, HostSweepMembersLandInTheirPools) {
  // Run the seeded instance and check every forced step consumed a pool vertex.
  const auto& inst = seeded_path();
  EmbedOptions options;
  options.record_steps = true;
  EmbeddingState state;
  const auto report = run(inst, options, &state);
  expect_success(inst, report);
  ASSERT_TRUE(report.host_sweep.has_value());
  const auto& hs = *report.host_sweep;
  std::set<VertexId> pulled(hs.pulled.begin(), hs.pulled.end());
  std::set<VertexId> images;
  for (const auto& step : report.steps_log) {
    if (step.forced) {
      EXPECT_TRUE(pulled.count(step.x));
      images.insert(step.v);
    }
  }
  EXPECT_EQ(images.size(), report.forced_steps);
}

TEST(Phase1, MatchingLeavesOnlyBuffers) {
  const auto inst = workload("matching", 40, Rational(1));
  RunReport report;
  const auto s = run_phase1(inst, report);
  ASSERT_FALSE(report.failure.has_value());
  for (std::size_t i = s.t; i < s.order.size(); ++i) EXPECT_TRUE(s.is_buffer[s.order[i]]);
  EXPECT_EQ(s.unembedded_count(), s.m);
}

TEST(Audit, TimeZeroIsTrivial) {
  const auto& inst = seeded_path();
  const auto s = preprocess(inst);
  const auto a = audit_state(inst, s, 1);
  EXPECT_EQ(a.min_host_set, inst.n_per_cluster());
  EXPECT_TRUE(a.host_set_ok);
  for (const auto& c : a.clusters) EXPECT_TRUE(c.degree_profile_ok);
}

TEST(Audit, CompleteBlowupProfilePasses) {
  const auto inst = workload("hampath", 40, Rational(1));
  auto s = preprocess(inst);
  RunReport report;
  for (int i = 0; i < 30; ++i) ASSERT_TRUE(embed_step(inst, s, report));
  for (const auto& c : audit_state(inst, s, 2).clusters) {
    EXPECT_TRUE(c.degree_profile_ok);
    EXPECT_EQ(c.below_absolute, 0u);
  }
}

TEST(Run, CompleteBlowupsForEveryPattern) {
  for (const char* pattern : {"matching", "hampath", "sqhamcycle", "powhamcycle:3", "tree"}) {
    for (std::size_t n : {5u, 20u}) {
      const auto inst = workload(pattern, n, Rational(1), n);
      oracle::StepChecker checker(inst);
      const auto report = run(inst, checked(checker));
      SCOPED_TRACE(std::string(pattern) + " N=" + std::to_string(n));
      expect_success(inst, report);
      EXPECT_TRUE(checker.clean()) << checker.problems().front();
    }
  }
}

TEST(Run, MatchingIsAPerfectMatchingOfTheHost) {
  const auto inst = workload("matching", 25, Rational(1));
  const auto report = run(inst);
  expect_success(inst, report);
  std::set<VertexId> images(report.embedding.begin(), report.embedding.end());
  EXPECT_EQ(images.size(), 50u);
}

TEST(Run, SeededHalfDensityPath) {
  const auto& inst = seeded_path();
  oracle::StepChecker checker(inst);
  EmbeddingState state;
  const auto report = run(inst, checked(checker), &state);
  expect_success(inst, report);
  EXPECT_TRUE(checker.clean()) << checker.problems().front();
  EXPECT_EQ(checker.steps(), report.steps);
  EXPECT_TRUE(oracle::buffers_far_apart(inst, state));
  EXPECT_FALSE(check_buffers(inst, state).has_value());
  for (const auto& p2 : report.phase2) {
    EXPECT_TRUE(p2.perfect);
    EXPECT_TRUE(p2.hall.min_set_ok);
  }
  for (const auto& a : report.audits) EXPECT_GT(a.min_host_set, 0u);
  // Same instance, same result.
  EXPECT_EQ(run(inst).embedding, report.embedding);
}

TEST(Run, RestrictedVerticesStayInTheirSets) {
  WorkloadSpec spec;
  spec.n_per_cluster = 200;
  spec.delta = Rational(1, 2);
  spec.seed = 11;
  spec.restricted_per_cluster = 2;
  spec.restriction_fraction = Rational(3, 10);
  const auto inst = make_workload(spec);
  oracle::StepChecker checker(inst);
  const auto report = run(inst, checked(checker));
  expect_success(inst, report);
  EXPECT_TRUE(checker.clean()) << checker.problems().front();
  for (const auto& r : inst.restrictions) EXPECT_TRUE(r.allowed.contains(report.embedding[r.vertex]));
}

TEST(Verify, AcceptsAMatchingAlongTheHost) {
  const auto inst = workload("matching", 4, Rational(1));
  std::vector<VertexId> phi(8);
  for (VertexId x = 0; x < 8; ++x) phi[x] = inst.pattern.assignment[x] * 4 + x / 2;
  EXPECT_TRUE(verify_embedding(inst, phi).ok);
}

TEST(Verify, ReportsEveryKindOfViolation) {
  const auto& inst = seeded_path();
  const auto report = run(inst);
  ASSERT_TRUE(report.success);
  auto kinds = [&](const std::vector<VertexId>& phi) {
    std::set<std::string> out;
    for (const auto& v : verify_embedding(inst, phi).violations) out.insert(v.kind);
    return out;
  };
  auto phi = report.embedding;
  std::swap(phi[0], phi[1]);  // different clusters
  EXPECT_TRUE(kinds(phi).count("assignment"));

  phi = report.embedding;
  phi[2] = phi[0];
  EXPECT_TRUE(kinds(phi).count("injectivity"));

  // Move vertex 1 onto a host vertex of its cluster that is not adjacent to phi(0).
  phi = report.embedding;
  const auto free_non_neighbour = (inst.host.cluster(1) - inst.host.graph.neighbors(phi[0])).first();
  const auto holder = std::find(phi.begin(), phi.end(), free_non_neighbour) - phi.begin();
  std::swap(phi[1], phi[static_cast<std::size_t>(holder)]);
  EXPECT_TRUE(kinds(phi).count("edge"));

  phi.pop_back();
  EXPECT_TRUE(kinds(phi).count("totality"));
}

TEST(Verify, RestrictionViolations) {
  WorkloadSpec spec;
  spec.n_per_cluster = 100;
  spec.restricted_per_cluster = 1;
  spec.restriction_fraction = Rational(3, 10);
  const auto inst = make_workload(spec);
  const auto report = run(inst);
  ASSERT_TRUE(report.success);
  auto phi = report.embedding;
  const auto& r = inst.restrictions[0];
  const auto outside = (inst.host.cluster(inst.pattern.assignment[r.vertex]) - r.allowed).first();
  const auto holder = static_cast<std::size_t>(std::find(phi.begin(), phi.end(), outside) - phi.begin());
  std::swap(phi[r.vertex], phi[holder]);
  bool found = false;
  for (const auto& v : verify_embedding(inst, phi).violations) found = found || v.kind == "restriction";
  EXPECT_TRUE(found);
}

}  // namespace
}  // namespace blowup
