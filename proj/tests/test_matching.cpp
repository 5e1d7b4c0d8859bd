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

#include <set>
#include <vector>

#include "blowup/errors.hpp"
#include "blowup/matching.hpp"
#include "blowup/rng.hpp"
#include "oracles.hpp"

namespace blowup {
namespace {

std::vector<VertexSet> random_sets(std::size_t left, std::size_t right, const Rational& p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<VertexSet> sets(left, VertexSet(Universe::kHost, right));
  for (auto& s : sets)
    for (VertexId v = 0; v < right; ++v)
      if (rng.bernoulli(p)) s.insert(v);
  return sets;
}

void expect_hall_witness(const CandidacyGraph& g, const MatchingResult& m) {
  ASSERT_TRUE(m.hall_witness.has_value());
  const auto& s = *m.hall_witness;
  EXPECT_FALSE(s.empty());
  EXPECT_LT(oracle::neighbourhood_recount(g, s), s.size());
  EXPECT_EQ(neighbourhood_size(g, s), oracle::neighbourhood_recount(g, s));
}

TEST(Matching, CompleteCandidacyIsPerfect) {
  const std::size_t m = 17;
  std::vector<VertexSet> sets(m, VertexSet::full(Universe::kHost, m));
  const auto g = CandidacyGraph::from_sets(sets);
  const auto r = max_matching(g);
  EXPECT_EQ(r.size, m);
  EXPECT_TRUE(r.perfect);
  EXPECT_FALSE(r.hall_witness.has_value());
  EXPECT_TRUE(is_valid_matching(g, r));
}

TEST(Matching, SharedSingletonGivesHallWitness) {
  std::vector<VertexSet> sets(2, VertexSet::of(Universe::kHost, 5, std::vector<VertexId>{3}));
  const auto g = CandidacyGraph::from_sets(sets);
  const auto r = max_matching(g);
  EXPECT_EQ(r.size, 1u);
  EXPECT_FALSE(r.perfect);
  expect_hall_witness(g, r);
  EXPECT_EQ(r.hall_witness->size(), 2u);
}

TEST(Matching, SeededFiftyByFiftyMatchesOracle) {
  const auto g = CandidacyGraph::from_sets(random_sets(50, 50, Rational(3, 10), 1), VertexSet::full(Universe::kHost, 50));
  EXPECT_EQ(max_matching(g).size, oracle::matching_by_augmenting(g));
}

TEST(Matching, AgreesWithAugmentingPathOracle) {
  Rng picker(77);
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const std::size_t left = 1 + picker.below(60);
    const std::size_t right = 1 + picker.below(60);
    const Rational p(static_cast<std::int64_t>(1 + picker.below(20)), 100);
    const auto g = CandidacyGraph::from_sets(random_sets(left, right, p, seed), VertexSet::full(Universe::kHost, right));
    const auto r = max_matching(g);
    ASSERT_EQ(r.size, oracle::matching_by_augmenting(g)) << "seed " << seed;
    EXPECT_TRUE(is_valid_matching(g, r));
    if (r.size < left) expect_hall_witness(g, r);
    else EXPECT_FALSE(r.hall_witness.has_value());
  }
}

TEST(Matching, ContinuesFromAnInitialMatching) {
  const auto g = CandidacyGraph::from_sets(random_sets(40, 40, Rational(1, 10), 5), VertexSet::full(Universe::kHost, 40));
  std::vector<std::int32_t> initial(40, kUnmatched);
  std::set<VertexId> used;
  for (std::size_t i = 0; i < 40; ++i) {
    for (VertexId w : g.adjacency[i].members()) {
      if (used.insert(w).second) {
        initial[i] = static_cast<std::int32_t>(w);
        break;
      }
    }
  }
  const auto r = max_matching(g, initial);
  EXPECT_EQ(r.size, oracle::matching_by_augmenting(g));
  EXPECT_TRUE(is_valid_matching(g, r));

  std::vector<std::int32_t> bad(40, 0);  // everyone on right vertex 0
  EXPECT_THROW(max_matching(g, bad), ContractViolation);
}

TEST(Sdr, FullSetsAndPermutations) {
  const std::size_t m = 8;
  std::vector<VertexSet> full(m, VertexSet::full(Universe::kHost, m));
  const auto a = sdr(full);
  ASSERT_TRUE(a.representatives.has_value());
  EXPECT_EQ(std::set<VertexId>(a.representatives->begin(), a.representatives->end()).size(), m);

  const std::vector<VertexId> perm{3, 0, 7, 1, 6, 2, 5, 4};
  std::vector<VertexSet> singletons;
  for (VertexId v : perm) singletons.push_back(VertexSet::of(Universe::kHost, m, std::vector<VertexId>{v}));
  const auto b = sdr(singletons);
  ASSERT_TRUE(b.representatives.has_value());
  EXPECT_EQ(*b.representatives, perm);
}

TEST(Sdr, RepresentativesComeFromTheirSets) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto sets = random_sets(20, 25, Rational(1, 5), seed);
    const auto r = sdr(sets);
    if (r.representatives) {
      std::set<VertexId> distinct;
      for (std::size_t i = 0; i < sets.size(); ++i) {
        EXPECT_TRUE(sets[i].contains((*r.representatives)[i]));
        distinct.insert((*r.representatives)[i]);
      }
      EXPECT_EQ(distinct.size(), sets.size());
    } else {
      ASSERT_TRUE(r.hall_witness.has_value());
      VertexSet u(Universe::kHost, 25);
      for (auto i : *r.hall_witness) u |= sets[i];
      EXPECT_LT(u.count(), r.hall_witness->size());
    }
  }
}

TEST(HallAudit, FullSetsPassEverything) {
  const std::size_t m = 30;
  std::vector<VertexSet> full(m, VertexSet::full(Universe::kHost, m));
  const auto a = hall_audit(full, VertexSet::full(Universe::kHost, m), Rational(1, 10), 3);
  EXPECT_TRUE(a.min_set_ok);
  EXPECT_TRUE(a.union_ok);
  EXPECT_TRUE(a.coverage_ok);
  EXPECT_EQ(a.min_set_size, m);
  EXPECT_EQ(a.min_coverage, m);
}

TEST(HallAudit, SingletonsFailConditionFive) {
  const std::size_t m = 30;
  std::vector<VertexSet> singles;
  for (VertexId v = 0; v < m; ++v) singles.push_back(VertexSet::of(Universe::kHost, m, std::vector<VertexId>{v}));
  const auto a = hall_audit(singles, VertexSet::full(Universe::kHost, m), Rational(1, 10), 3);
  EXPECT_FALSE(a.min_set_ok);  // 1 > 3 fails
  EXPECT_FALSE(a.coverage_ok);
}

}  // namespace
}  // namespace blowup
