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


// Drives the built command-line tool end to end and checks exit codes.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "blowup/instance.hpp"
#include "blowup/io.hpp"

namespace blowup {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string output;
};

Outcome run(const std::string& args) {
  const std::string cmd = "NO_COLOR=1 '" BLOWUP_CLI_PATH "' " + args + " 2>&1";
  Outcome out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) out.output += buf.data();
  const int status = pclose(pipe);
  out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("blowup_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Complete blow-up of a Hamiltonian path, embedded; returns the instance path.
  std::string embedded_path(const std::string& embedding) {
    const auto inst = path("inst.json");
    EXPECT_EQ(run("gen --pattern hampath --N 20 --delta 1 --seed 3 --out " + inst).code, 0);
    EXPECT_EQ(run("embed --in " + inst + " --out-embedding " + embedding).code, 0);
    return inst;
  }

  fs::path dir_;
};

TEST_F(Cli, GenIsDeterministic) {
  const auto a = path("a.json");
  const auto b = path("b.json");
  ASSERT_EQ(run("gen --pattern tree --N 30 --delta 1/2 --seed 9 --out " + a).code, 0);
  ASSERT_EQ(run("gen --pattern tree --N 30 --delta 1/2 --seed 9 --out " + b).code, 0);
  EXPECT_EQ(read_json_file(a).dump(), read_json_file(b).dump());
}

TEST_F(Cli, EmbedThenVerify) {
  const auto emb = path("emb.json");
  const auto inst = embedded_path(emb);
  const auto v = run("verify --in " + inst + " --embedding " + emb);
  EXPECT_EQ(v.code, 0) << v.output;
  EXPECT_NE(v.output.find("ok"), std::string::npos);
}

TEST_F(Cli, CorruptedAssignmentIsAnInvalidInstance) {
  const auto inst = path("inst.json");
  ASSERT_EQ(run("gen --pattern hampath --N 10 --delta 1 --out " + inst).code, 0);
  Json doc = read_json_file(inst);
  doc["pattern"]["assignment"][0] = 1;
  write_json_file(inst, doc);
  const auto e = run("embed --in " + inst);
  EXPECT_EQ(e.code, 2);
  EXPECT_NE(e.output.find("pattern.class-size"), std::string::npos) << e.output;
}

TEST_F(Cli, RepeatedImageIsReportedAsInjectivity) {
  const auto emb = path("emb.json");
  const auto inst = embedded_path(emb);
  Json phi = read_json_file(emb);
  phi[2] = phi[0];
  write_json_file(emb, phi);
  const auto v = run("verify --in " + inst + " --embedding " + emb);
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.output.find("injectivity:"), std::string::npos) << v.output;
}

TEST_F(Cli, SwappedImagesBreakEdges) {
  const auto emb = path("emb.json");
  const auto inst = embedded_path(emb);
  Json phi = read_json_file(emb);
  std::swap(phi[0], phi[1]);
  write_json_file(emb, phi);
  const auto v = run("verify --in " + inst + " --embedding " + emb);
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.output.find("edge:"), std::string::npos) << v.output;
}

TEST_F(Cli, CertifyOnANonEdgeIsAUsageError) {
  // Clusters 0-1-2 in a path; the pattern is N disjoint paths a-b-c.
  constexpr std::size_t kN = 8;
  std::vector<Edge> edges;
  PatternGraph pattern;
  for (std::size_t k = 0; k < kN; ++k) {
    const auto a = static_cast<VertexId>(3 * k);
    edges.emplace_back(a, a + 1);
    edges.emplace_back(a + 1, a + 2);
    pattern.assignment.insert(pattern.assignment.end(), {0, 1, 2});
  }
  pattern.graph = Graph(Universe::kPattern, 3 * kN, edges);
  pattern.max_degree = 2;
  const ClusterGraph r_graph(3, {{0, 1, Rational(1)}, {1, 2, Rational(1)}});
  const auto inst = assemble_instance(r_graph, kN, Rational(1), pattern,
                                      ParameterCascade::defaults(Rational(1), 2), {}, 1);
  const auto file = path("p3.json");
  write_json_file(file, instance_to_json(inst));
  EXPECT_EQ(run("certify --in " + file + " --pair 0 1").code, 0);
  EXPECT_EQ(run("certify --in " + file + " --pair 0 2").code, 2);
}

TEST_F(Cli, BenchOnCompleteBlowUp) {
  const auto b = run("bench --sizes 50 --delta 1 --trials 2 --pattern hampath");
  ASSERT_EQ(b.code, 0) << b.output;
  EXPECT_NE(b.output.find("N,n,pattern"), std::string::npos);
  EXPECT_NE(b.output.find("50,100,hampath,1,sequential,2,2,1"), std::string::npos) << b.output;
}

TEST_F(Cli, MissingRequiredOptionExitsWithTwo) {
  EXPECT_EQ(run("gen --pattern hampath").code, 2);
  EXPECT_EQ(run("embed --in " + path("does-not-exist.json")).code, 2);
}

}  // namespace
}  // namespace blowup
