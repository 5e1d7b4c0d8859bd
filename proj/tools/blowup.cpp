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


// blowup: generate blow-up instances, embed bounded-degree patterns into them,
// verify embeddings, certify regularity of cluster pairs and benchmark runs.
//
// Exit codes: 0 verified success, 1 algorithmic failure, 2 usage or format
// error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "CLI11.hpp"

#include "blowup/batch.hpp"
#include "blowup/embedder.hpp"
#include "blowup/errors.hpp"
#include "blowup/instance.hpp"
#include "blowup/io.hpp"
#include "blowup/params.hpp"
#include "blowup/regularity.hpp"
#include "blowup/rng.hpp"
#include "blowup/workload.hpp"

namespace {

using namespace blowup;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

bool use_color() { return std::getenv("NO_COLOR") == nullptr && isatty(STDOUT_FILENO) != 0; }

std::string paint(const std::string& text, const char* code) {
  return use_color() ? std::string("\033[") + code + "m" + text + "\033[0m" : text;
}

std::string ok_word() { return paint("ok", "32"); }
std::string fail_word() { return paint("FAIL", "31"); }

struct CascadeFlags {
  std::string eps, eps1, eps2, d3, d2, d1, c, alpha, alpha_batch;

  void add(CLI::App* app) {
    app->add_option("--eps", eps, "override eps");
    app->add_option("--eps1", eps1, "override eps'");
    app->add_option("--eps2", eps2, "override eps''");
    app->add_option("--d3", d3, "override delta'''");
    app->add_option("--d2", d2, "override delta''");
    app->add_option("--d1", d1, "override delta' (buffer fraction)");
    app->add_option("--c", c, "restriction set size fraction");
    app->add_option("--restriction-alpha", alpha, "restricted vertices per cluster fraction");
    app->add_option("--alpha-batch", alpha_batch, "batch fraction");
  }

  void apply(ParameterCascade& p) const {
    auto set = [](Rational& field, const std::string& v) {
      if (!v.empty()) field = parse_rational(v);
    };
    set(p.eps, eps);
    set(p.eps1, eps1);
    set(p.eps2, eps2);
    set(p.d3, d3);
    set(p.d2, d2);
    set(p.d1, d1);
    set(p.c, c);
    set(p.alpha, alpha);
    set(p.alpha_batch, alpha_batch);
  }
};

struct GenOptions {
  std::string r_graph;
  std::string pattern = "hampath";
  std::size_t n = 0;
  std::string delta = "1";
  std::uint64_t seed = 0;
  std::string out;
  std::size_t tree_degree = 3;
  std::size_t restricted = 0;
  std::string restriction_size;
  CascadeFlags cascade;
};

Instance build_instance(const GenOptions& o) {
  WorkloadSpec spec;
  spec.pattern = parse_pattern_spec(o.pattern);
  if (o.n == 0) throw UsageError("--N must be positive");
  spec.n_per_cluster = o.n;
  spec.delta = parse_rational(o.delta);
  if (spec.delta <= 0 || spec.delta > 1) throw UsageError("--delta must lie in (0,1]");
  if (!o.r_graph.empty()) spec.r_graph = ClusterGraph::parse(o.r_graph);
  spec.seed = o.seed;
  spec.tree_max_degree = o.tree_degree;
  spec.restricted_per_cluster = o.restricted;
  if (!o.restriction_size.empty()) spec.restriction_fraction = parse_rational(o.restriction_size);
  spec.adjust_params = [&](ParameterCascade& p) { o.cascade.apply(p); };
  return make_workload(spec);
}

int cmd_gen(const GenOptions& o) {
  Instance inst = build_instance(o);
  if (!o.out.empty()) write_json_file(o.out, instance_to_json(inst));
  RunReport scratch;
  preprocess(inst, &scratch);
  std::cout << "n=" << inst.n() << " r=" << inst.r() << " N=" << inst.n_per_cluster()
            << " e(G)=" << inst.host.graph.edge_count() << " e(H)=" << inst.pattern.graph.edge_count()
            << " Delta(H)=" << inst.pattern.graph.max_degree() << "\n";
  std::cout << "cascade: " << describe(inst.params) << "\n";
  std::cout << "buffers=" << scratch.buffers << " T0=" << scratch.t0 << " T1=" << scratch.t1 << "\n";
  std::vector<std::string> clamped = scratch.clamped;
  clamped.erase(std::unique(clamped.begin(), clamped.end()), clamped.end());
  std::cout << "clamped:";
  if (clamped.empty()) std::cout << " none";
  for (const auto& c : clamped) std::cout << " " << c;
  std::cout << "\n";
  return kExitOk;
}

struct EmbedFlags {
  std::string in;
  std::string mode = "sequential";
  std::string alpha;
  std::optional<std::size_t> tail;
  bool audit = false;
  bool check = false;
  std::string dump_state;
  std::string out_embedding;
  std::string out_report;
};

int cmd_embed(const EmbedFlags& f) {
  if (f.mode != "sequential" && f.mode != "batched") throw UsageError("--mode must be sequential or batched");
  Instance inst = instance_from_json(read_json_file(f.in));
  EmbedOptions options;
  options.audit = f.audit;
  options.check_invariants = f.check;

  RunReport report;
  EmbeddingState state;
  Json doc;
  if (f.mode == "sequential") {
    report = run(inst, options, &state);
    doc = report_to_json(report);
  } else {
    const Rational alpha = f.alpha.empty() ? inst.params.alpha_batch : parse_rational(f.alpha);
    if (alpha <= 0 || alpha > 1) throw UsageError("--alpha must lie in (0,1]");
    BatchedRun br = run_batched(inst, alpha, f.tail, std::nullopt, options);
    report = std::move(br.report);
    state = std::move(br.state);
    doc = report_to_json(report);
    doc["rounds"] = round_log_to_json(br.log);
  }
  doc["mode"] = f.mode;
  if (!f.out_report.empty()) write_json_file(f.out_report, doc);

  if (report.success) {
    if (!f.out_embedding.empty()) write_json_file(f.out_embedding, embedding_to_json(report.embedding));
    std::cout << ok_word() << ": embedded " << inst.n() << " vertices (T=" << report.big_t
              << ", phase 1 " << report.phase1_seconds << "s, phase 2 " << report.phase2_seconds << "s)\n";
    for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
    return kExitOk;
  }
  const auto& failure = *report.failure;
  std::cout << fail_word() << ": " << failure.kind << " at t=" << failure.t;
  if (failure.vertex) std::cout << " (vertex " << *failure.vertex << ")";
  std::cout << ": " << failure.message << "\n";
  if (failure.histogram.candidates > 0) {
    std::cout << "candidates=" << failure.histogram.candidates
              << " host-window=" << failure.histogram.fail_host_window
              << " candidate-window=" << failure.histogram.fail_candidate_window
              << " pairwise=" << failure.histogram.fail_pairwise << "\n";
  }
  if (!f.dump_state.empty() && !state.order.empty()) write_json_file(f.dump_state, state_to_json(state, inst.params));
  return kExitFailure;
}

int cmd_verify(const std::string& in, const std::string& embedding) {
  Instance inst = instance_from_json(read_json_file(in));
  std::vector<VertexId> phi = embedding_from_json(read_json_file(embedding));
  EmbeddingVerdict v = verify_embedding(inst, phi);
  if (v.ok) {
    std::cout << ok_word() << ": embedding verified\n";
    return kExitOk;
  }
  for (const auto& violation : v.violations) std::cout << violation.kind << ": " << violation.message << "\n";
  return kExitFailure;
}

std::string subset_string(const VertexSet& s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](VertexId v) {
    out += (first ? "" : ",") + std::to_string(v);
    first = false;
  });
  return out + "}";
}

int cmd_certify(const std::string& in, const std::vector<std::uint32_t>& pair, const std::string& eps_text,
                std::size_t exact_limit) {
  Instance inst = instance_from_json(read_json_file(in));
  if (pair.size() != 2) throw UsageError("--pair needs two cluster indices");
  auto [i, j] = std::minmax(pair[0], pair[1]);
  if (i == j || j >= inst.r() || !inst.host.clusters.has_edge(i, j)) {
    throw UsageError("(" + std::to_string(pair[0]) + "," + std::to_string(pair[1]) + ") is not a cluster edge");
  }
  const Rational eps = eps_text.empty() ? inst.params.eps : parse_rational(eps_text);
  BipartitePair p = inst.host.pair(i, j);
  SuperRegularityReport rep = is_super_regular(p, eps, inst.params.delta, exact_limit);
  std::cout << "pair (" << i << "," << j << "): |A|=" << p.size_a() << " |B|=" << p.size_b()
            << " density=" << to_string(density(p)) << " (" << to_double(density(p)) << ")\n";
  if (rep.used_exact) {
    std::cout << "exact check at eps=" << to_string(eps) << ": " << (rep.regular ? "regular" : "not regular") << "\n";
    if (rep.verdict && rep.verdict->witness) {
      const auto& w = *rep.verdict->witness;
      std::cout << "witness: X=" << subset_string(w.x) << " Y=" << subset_string(w.y)
                << " deviation=" << to_string(w.deviation) << "\n";
    }
  } else {
    const auto& c = *rep.certificate;
    std::cout << "codegree certificate at eps=" << to_string(eps) << ": "
              << (c.passed ? "regular (certified)" : "inconclusive") << "\n";
    std::cout << "statistic=" << c.centered_statistic << " threshold=" << c.threshold
              << " implied_eps=" << c.implied_eps << "\n";
  }
  std::size_t min_a = p.size_b();
  std::size_t min_b = p.size_a();
  for (const auto& row : p.rows_a()) min_a = std::min(min_a, row.count());
  for (const auto& row : p.rows_b()) min_b = std::min(min_b, row.count());
  std::cout << "min degree: A side " << min_a << ", B side " << min_b << "; delta=" << to_string(inst.params.delta)
            << " failing A=" << rep.failing_a.size() << " failing B=" << rep.failing_b.size() << "\n";
  std::cout << "super-regular: " << (rep.super_regular ? "yes" : "no") << "\n";
  return kExitOk;
}

struct BenchFlags {
  std::string sizes = "100,200,400";
  std::string delta = "1/2";
  std::string pattern = "hampath";
  std::size_t trials = 3;
  std::uint64_t seed = 0;
  std::string mode = "sequential";
};

int cmd_bench(const BenchFlags& f) {
  if (f.mode != "sequential" && f.mode != "batched") throw UsageError("--mode must be sequential or batched");
  std::vector<std::size_t> sizes;
  std::stringstream ss(f.sizes);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos || item.size() > 9) {
      throw UsageError("--sizes must be a comma-separated list of positive integers");
    }
    sizes.push_back(std::stoul(item));
    if (sizes.back() == 0) throw UsageError("--sizes must be a comma-separated list of positive integers");
  }
  if (sizes.empty() || f.trials == 0) throw UsageError("--sizes and --trials must be non-empty");
  const PatternSpec pattern = parse_pattern_spec(f.pattern);
  const Rational delta = parse_rational(f.delta);
  if (delta <= 0 || delta > 1) throw UsageError("--delta must lie in (0,1]");
  std::cout << "N,n,pattern,delta,mode,trials,successes,success_rate,median_seconds,median_phase1_seconds,"
               "median_phase2_seconds,audit_warnings\n";
  for (std::size_t n : sizes) {
    const BenchRow row = bench_size(pattern, delta, n, f.trials, f.seed, f.mode == "batched");
    std::cout << n << "," << row.order << "," << f.pattern << "," << f.delta << "," << f.mode << "," << row.trials
              << "," << row.successes << "," << row.success_rate() << "," << row.median_seconds << ","
              << row.median_phase1_seconds << "," << row.median_phase2_seconds << "," << row.audit_warnings << "\n";
    std::cout.flush();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embed bounded-degree spanning subgraphs into super-regular blow-ups"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate and write an instance");
  gen_cmd->add_option("--r-graph", gen.r_graph, "cluster graph: K2, K3, triangle or an edge list like 0-1,1-2");
  gen_cmd->add_option("--pattern", gen.pattern, "matching | hampath | sqhamcycle | powhamcycle:k | tree");
  gen_cmd->add_option("--N", gen.n, "vertices per cluster")->required();
  gen_cmd->add_option("--delta", gen.delta, "pair density, rational or decimal");
  gen_cmd->add_option("--seed", gen.seed, "instance seed");
  gen_cmd->add_option("--out", gen.out, "output instance file");
  gen_cmd->add_option("--tree-max-degree", gen.tree_degree, "maximum degree of the tree pattern");
  gen_cmd->add_option("--restricted", gen.restricted, "restricted pattern vertices per cluster");
  gen_cmd->add_option("--restriction-size", gen.restriction_size, "allowed-set size as a fraction of N");
  gen.cascade.add(gen_cmd);

  EmbedFlags embed;
  auto* embed_cmd = app.add_subcommand("embed", "embed the pattern of an instance file");
  embed_cmd->add_option("--in", embed.in, "instance file")->required();
  embed_cmd->add_option("--mode", embed.mode, "sequential | batched");
  embed_cmd->add_option("--alpha", embed.alpha, "batch fraction for batched mode");
  embed_cmd->add_option("--tail", embed.tail, "sequential tail threshold for batched mode");
  embed_cmd->add_flag("--audit", embed.audit, "record audits of the tracked quantities");
  embed_cmd->add_flag("--check-invariants", embed.check, "check state invariants after every step");
  embed_cmd->add_option("--dump-state-on-failure", embed.dump_state, "write the embedding state here on failure");
  embed_cmd->add_option("--out-embedding", embed.out_embedding, "write the embedding (JSON array)");
  embed_cmd->add_option("--out-report", embed.out_report, "write the run report (JSON)");

  std::string verify_in, verify_embedding_path;
  auto* verify_cmd = app.add_subcommand("verify", "check an embedding against an instance");
  verify_cmd->add_option("--in", verify_in, "instance file")->required();
  verify_cmd->add_option("--embedding", verify_embedding_path, "embedding file")->required();

  std::string certify_in, certify_eps;
  std::vector<std::uint32_t> certify_pair;
  std::size_t exact_limit = kDefaultExactLimit;
  auto* certify_cmd = app.add_subcommand("certify", "regularity report for one cluster pair");
  certify_cmd->add_option("--in", certify_in, "instance file")->required();
  certify_cmd->add_option("--pair", certify_pair, "cluster indices i j")->expected(2)->required();
  certify_cmd->add_option("--eps", certify_eps, "regularity parameter (default: the instance eps)");
  certify_cmd->add_option("--exact-limit", exact_limit, "largest side checked exhaustively");

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "timing table as CSV");
  bench_cmd->add_option("--sizes", bench.sizes, "comma-separated N values");
  bench_cmd->add_option("--delta", bench.delta, "pair density");
  bench_cmd->add_option("--pattern", bench.pattern, "pattern kind");
  bench_cmd->add_option("--trials", bench.trials, "trials per size");
  bench_cmd->add_option("--seed", bench.seed, "base seed");
  bench_cmd->add_option("--mode", bench.mode, "sequential | batched");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*embed_cmd) return cmd_embed(embed);
    if (*verify_cmd) return cmd_verify(verify_in, verify_embedding_path);
    if (*certify_cmd) return cmd_certify(certify_in, certify_pair, certify_eps, exact_limit);
    if (*bench_cmd) return cmd_bench(bench);
  } catch (const InvariantError& e) {
    std::cerr << "invalid instance: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreprocessingFailure& e) {
    std::cerr << "preprocessing-failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const GenerationFailure& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
    return kExitFailure;
  } catch (const ContractViolation& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
