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

#include <filesystem>
#include <string>

#include "blowup/embedder.hpp"
#include "blowup/errors.hpp"
#include "blowup/io.hpp"
#include "blowup/rng.hpp"
#include "blowup/workload.hpp"

namespace blowup {
namespace {

Instance restricted_path(std::size_t n, std::uint64_t seed) {
  WorkloadSpec spec;
  spec.n_per_cluster = n;
  spec.delta = Rational(1, 2);
  spec.seed = seed;
  spec.restricted_per_cluster = 1;
  spec.restriction_fraction = Rational(3, 10);
  return make_workload(spec);
}

std::string invariant_of(const Json& doc) {
  try {
    instance_from_json(doc);
  } catch (const InvariantError& e) {
    return e.invariant();
  }
  return "none";
}

TEST(InstanceJson, RoundTripsExactly) {
  for (std::uint64_t seed : {1u, 2u}) {
    const auto inst = restricted_path(70, seed);
    const Json doc = instance_to_json(inst);
    EXPECT_EQ(instance_from_json(doc), inst);
    // Through text as well.
    const Json reparsed = Json::parse(doc.dump());
    EXPECT_EQ(instance_from_json(reparsed), inst);
    EXPECT_EQ(instance_to_json(instance_from_json(reparsed)).dump(), doc.dump());
  }
}

TEST(InstanceJson, TriangleAndPowers) {
  for (const char* pattern : {"sqhamcycle", "powhamcycle:3", "tree", "matching"}) {
    WorkloadSpec spec;
    spec.pattern = parse_pattern_spec(pattern);
    spec.n_per_cluster = 9;
    spec.delta = Rational(3, 4);
    spec.seed = 4;
    const auto inst = make_workload(spec);
    EXPECT_EQ(instance_from_json(instance_to_json(inst)), inst) << pattern;
  }
}

TEST(InstanceJson, MalformedDocumentsAreFormatErrors) {
  const Json good = instance_to_json(restricted_path(50, 3));
  Json doc = good;
  doc.erase("pattern");
  EXPECT_THROW(instance_from_json(doc), FormatError);
  doc = good;
  doc["format_version"] = 99;
  EXPECT_THROW(instance_from_json(doc), FormatError);
  doc = good;
  doc["cluster_edges"][0]["rows"][0] = "zz";
  EXPECT_THROW(instance_from_json(doc), FormatError);
  doc = good;
  doc["parameters"]["eps"] = "one third";
  EXPECT_THROW(instance_from_json(doc), FormatError);
  EXPECT_THROW(instance_from_json(Json::array()), FormatError);
}

TEST(InstanceJson, CorruptedAssignmentNamesTheInvariant) {
  Json doc = instance_to_json(restricted_path(50, 3));
  doc["pattern"]["assignment"][0] = 1;
  EXPECT_EQ(invariant_of(doc), "pattern.class-size");
}

TEST(ParamsJson, RoundTrips) {
  auto p = ParameterCascade::defaults(Rational(2, 3), 3);
  p.alpha_batch = Rational(1, 7);
  EXPECT_EQ(params_from_json(params_to_json(p)), p);
}

TEST(EmbeddingJson, RoundTripsAndRejectsJunk) {
  const std::vector<VertexId> phi{3, 1, 4, 1, 5};
  EXPECT_EQ(embedding_from_json(embedding_to_json(phi)), phi);
  EXPECT_THROW(embedding_from_json(Json::parse(R"({"a":1})")), FormatError);
  EXPECT_THROW(embedding_from_json(Json::parse(R"([1,-2])")), FormatError);
}

TEST(StateJson, MidRunStateRoundTripsAndAuditsAgain) {
  const auto inst = restricted_path(100, 5);
  auto s = preprocess(inst);
  RunReport report;
  for (int i = 0; i < 90; ++i) ASSERT_TRUE(embed_step(inst, s, report));
  s.forced[s.order[s.t]] = true;
  const Json doc = Json::parse(state_to_json(s, inst.params).dump());
  const auto back = state_from_json(doc, inst.n());
  EXPECT_TRUE(back == s);

  const auto a = audit_state(inst, s, 17);
  const auto b = audit_state(inst, back, 17);
  EXPECT_EQ(a.min_host_set, b.min_host_set);
  EXPECT_EQ(a.host_set_ok, b.host_set_ok);
  ASSERT_EQ(a.clusters.size(), b.clusters.size());
  for (std::size_t i = 0; i < a.clusters.size(); ++i) {
    EXPECT_EQ(a.clusters[i].min_degree, b.clusters[i].min_degree);
    EXPECT_EQ(a.clusters[i].below_relative, b.clusters[i].below_relative);
    EXPECT_EQ(a.clusters[i].sample_failures, b.clusters[i].sample_failures);
  }
}

TEST(StateJson, FinalStateOfASeededRun) {
  WorkloadSpec spec;
  spec.n_per_cluster = 200;
  spec.delta = Rational(1, 2);
  spec.seed = 7;
  const auto inst = make_workload(spec);
  EmbeddingState state;
  const auto report = run(inst, {}, &state);
  ASSERT_TRUE(report.success);
  EXPECT_TRUE(state_from_json(state_to_json(state, inst.params), inst.n()) == state);
  const Json r = report_to_json(report);
  EXPECT_TRUE(r["success"].get<bool>());
  EXPECT_EQ(r["phase2"].size(), inst.r());
}

TEST(Files, WriteThenRead) {
  const auto path = std::filesystem::temp_directory_path() / "blowup_io_test.json";
  const auto inst = restricted_path(50, 8);
  write_json_file(path, instance_to_json(inst));
  EXPECT_EQ(instance_from_json(read_json_file(path)), inst);
  std::filesystem::remove(path);
  EXPECT_THROW(read_json_file(path), FormatError);
}

}  // namespace
}  // namespace blowup
