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


// Acceptance run. Prints one PASS/FAIL line per criterion and exits non-zero
// when a criterion fails that was not declared with --known-failure.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "blowup/batch.hpp"
#include "blowup/embedder.hpp"
#include "blowup/matching.hpp"
#include "blowup/regularity.hpp"
#include "blowup/rng.hpp"
#include "blowup/workload.hpp"
#include "oracles.hpp"

namespace blowup {
namespace {

// Tolerances and sizes, pinned.
constexpr std::size_t kSeeds = 20;
constexpr std::size_t kNeededOf20 = 18;
constexpr std::size_t kBatchedNeededOf20 = 17;
constexpr double kCompleteBudgetSeconds = 5.0;
constexpr double kSuperRegularBudgetSeconds = 120.0;
constexpr double kScalingBudgetSeconds = 600.0;
constexpr double kScalingMaxRatio = 16.0;  // cubic growth under doubling, with 2x slack
constexpr std::size_t kScalingTrials = 3;
constexpr std::size_t kRegularityPairs = 500;
constexpr std::size_t kMatchingGraphs = 300;
constexpr std::size_t kEquivalenceSeeds = 10;
constexpr std::size_t kPermutationBatches = 10;
constexpr std::size_t kMinSetWarningsPerRun = 1;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Line {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Invariant bookkeeping across every accepted run.
struct InvariantTally {
  std::size_t runs = 0;
  std::size_t steps = 0;
  std::size_t dirty_runs = 0;
  std::size_t buffer_failures = 0;
  std::string first_problem;
};

// Audit bookkeeping across accepted half-density runs.
struct AuditTally {
  std::size_t runs = 0;
  std::size_t host_set_zero = 0;
  std::size_t min_set_over = 0;
  std::size_t smallest_host_set = std::numeric_limits<std::size_t>::max();
};

struct Checked {
  RunReport report;
  bool verified = false;
};

Instance workload(const std::string& pattern, std::size_t n, const Rational& delta, std::uint64_t seed,
                  std::size_t restricted = 0) {
  WorkloadSpec spec;
  spec.pattern = parse_pattern_spec(pattern);
  spec.n_per_cluster = n;
  spec.delta = delta;
  spec.seed = seed;
  if (restricted > 0) {
    spec.restricted_per_cluster = restricted;
    spec.restriction_fraction = Rational(3, 10);
  }
  return make_workload(spec);
}

void tally_audit(const RunReport& r, AuditTally& audit) {
  ++audit.runs;
  std::size_t least = r.min_host_set;
  for (const auto& a : r.audits) least = std::min(least, a.min_host_set);
  audit.smallest_host_set = std::min(audit.smallest_host_set, least);
  if (least == 0) ++audit.host_set_zero;
  std::size_t min_set_ok = 0;
  for (const auto& c : r.phase2) min_set_ok += c.hall.min_set_ok ? 0 : 1;
  if (min_set_ok > kMinSetWarningsPerRun) ++audit.min_set_over;
}

// One embedding with the post-hoc step checker and the built-in invariant
// checks attached. `alpha` selects batched mode with the default tail.
Checked embed_checked(const Instance& inst, InvariantTally& inv, AuditTally* audit,
                      std::optional<Rational> alpha = {}) {
  oracle::StepChecker checker(inst);
  EmbedOptions options;
  options.check_invariants = true;
  options.on_step = [&checker](const EmbeddingState& b, const EmbeddingState& a, VertexId x, VertexId v) {
    checker(b, a, x, v);
  };
  Checked out;
  EmbeddingState final_state;
  if (alpha) {
    auto b = run_batched(inst, *alpha, std::nullopt, std::nullopt, options);
    out.report = std::move(b.report);
    final_state = std::move(b.state);
  } else {
    out.report = run(inst, options, &final_state);
  }
  out.verified = out.report.success && verify_embedding(inst, out.report.embedding).ok;
  if (!out.verified) return out;
  ++inv.runs;
  inv.steps += checker.steps();
  if (!checker.clean()) {
    ++inv.dirty_runs;
    if (inv.first_problem.empty()) inv.first_problem = checker.problems().front();
  }
  if (!oracle::buffers_far_apart(inst, final_state)) ++inv.buffer_failures;
  if (audit != nullptr) tally_audit(out.report, *audit);
  return out;
}

std::string outcome_class(const RunReport& r) { return r.success ? "success" : r.failure->kind; }

std::string fmt(double seconds) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << seconds << "s";
  return s.str();
}

Line complete_blowups(InvariantTally& inv) {
  const auto start = Clock::now();
  std::size_t ok = 0, total = 0;
  std::string failed;
  std::uint64_t seed = 1;
  for (const char* pattern : {"matching", "hampath", "sqhamcycle", "powhamcycle:3", "tree"}) {
    for (std::size_t n : {5u, 20u, 100u}) {
      ++total;
      const auto inst = workload(pattern, n, Rational(1), seed++);
      if (embed_checked(inst, inv, nullptr).verified) ++ok;
      else if (failed.empty()) failed = std::string(" first failure ") + pattern + " N=" + std::to_string(n);
    }
  }
  const double t = since(start);
  return {"complete-blowup", ok == total && t < kCompleteBudgetSeconds,
          std::to_string(ok) + "/" + std::to_string(total) + " verified in " + fmt(t) + failed};
}

struct SeriesResult {
  std::size_t verified = 0;
  std::map<std::string, std::size_t> failures;
  std::vector<std::string> classes;  // per seed
  double seconds = 0.0;
};

SeriesResult series(const std::string& pattern, std::size_t n, std::size_t restricted, InvariantTally& inv,
                    AuditTally& audit, std::optional<Rational> alpha = {},
                    const std::function<bool(const Instance&, const RunReport&)>& extra = {}) {
  SeriesResult out;
  const auto start = Clock::now();
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const auto inst = workload(pattern, n, Rational(1, 2), seed, restricted);
    const auto c = embed_checked(inst, inv, &audit, alpha);
    out.classes.push_back(c.report.success && !c.verified ? "verification-failure" : outcome_class(c.report));
    if (c.verified && (!extra || extra(inst, c.report))) ++out.verified;
    else if (!c.report.success) ++out.failures[c.report.failure->kind];
  }
  out.seconds = since(start);
  return out;
}

std::string describe(const SeriesResult& s) {
  std::string d = std::to_string(s.verified) + "/" + std::to_string(kSeeds) + " verified in " + fmt(s.seconds);
  for (const auto& [kind, count] : s.failures) d += ", " + std::to_string(count) + " " + kind;
  return d;
}

Line regularity_oracle() {
  const std::vector<Rational> eps_values{Rational(1, 5), Rational(3, 10), Rational(9, 20)};
  Rng picker(5150);
  std::size_t agree = 0, witnesses = 0, witness_ok = 0;
  for (std::uint64_t k = 0; k < kRegularityPairs; ++k) {
    const std::size_t na = 1 + picker.below(10);
    const std::size_t nb = 1 + picker.below(10);
    const Rational p(static_cast<std::int64_t>(1 + picker.below(9)), 10);
    Rng rng = Rng(k).split(0xBEEF);
    std::vector<Edge> edges;
    for (VertexId a = 0; a < na; ++a)
      for (VertexId b = 0; b < nb; ++b)
        if (rng.bernoulli(p)) edges.emplace_back(a, b);
    const BipartitePair pair(na, nb, edges);
    const Rational& eps = eps_values[k % eps_values.size()];
    const auto verdict = is_regular_exact(pair, eps);
    const auto m = oracle::to_matrix(pair);
    const auto truth = oracle::regular_by_enumeration(m, nb, eps);
    if (verdict.regular == truth.regular) ++agree;
    if (!verdict.witness) continue;
    ++witnesses;
    const auto& w = *verdict.witness;
    long e = 0;
    for (VertexId a : w.x.members())
      for (VertexId b : w.y.members()) e += m[a][b];
    const long x = static_cast<long>(w.x.count()), y = static_cast<long>(w.y.count());
    const Rational dev = oracle::deviation(e, x, y, static_cast<long>(pair.edge_count()), static_cast<long>(na),
                                           static_cast<long>(nb));
    if (oracle::exceeds(x, static_cast<long>(na), eps) && oracle::exceeds(y, static_cast<long>(nb), eps) &&
        dev >= eps && dev == w.deviation) {
      ++witness_ok;
    }
  }
  return {"regularity-oracle", agree == kRegularityPairs && witness_ok == witnesses,
          std::to_string(agree) + "/" + std::to_string(kRegularityPairs) + " agree, " + std::to_string(witness_ok) +
              "/" + std::to_string(witnesses) + " witnesses recount"};
}

Line matching_oracle() {
  Rng picker(6060);
  std::size_t agree = 0, witnesses = 0, witness_ok = 0;
  for (std::uint64_t k = 0; k < kMatchingGraphs; ++k) {
    const std::size_t left = 1 + picker.below(200);
    const std::size_t right = 1 + picker.below(200);
    const Rational p(static_cast<std::int64_t>(1 + picker.below(60)), 1000);
    Rng rng = Rng(k).split(0xCAFE);
    std::vector<VertexSet> sets(left, VertexSet(Universe::kHost, right));
    for (auto& s : sets)
      for (VertexId v = 0; v < right; ++v)
        if (rng.bernoulli(p)) s.insert(v);
    const auto g = CandidacyGraph::from_sets(sets, VertexSet::full(Universe::kHost, right));
    const auto r = max_matching(g);
    if (r.size == oracle::matching_by_augmenting(g) && is_valid_matching(g, r)) ++agree;
    if (!r.hall_witness) continue;
    ++witnesses;
    const auto& s = *r.hall_witness;
    const std::size_t hood = oracle::neighbourhood_recount(g, s);
    if (!s.empty() && hood < s.size() && hood == neighbourhood_size(g, s)) ++witness_ok;
  }
  return {"matching-oracle", agree == kMatchingGraphs && witness_ok == witnesses,
          std::to_string(agree) + "/" + std::to_string(kMatchingGraphs) + " agree, " + std::to_string(witness_ok) +
              "/" + std::to_string(witnesses) + " Hall witnesses recount"};
}

// Distinct images for a batch, best-ranked first.
std::vector<std::pair<VertexId, VertexId>> choose_images(const Instance& inst, const EmbeddingState& s,
                                                         const std::vector<VertexId>& batch) {
  std::vector<std::pair<VertexId, VertexId>> out;
  std::set<VertexId> used;
  for (VertexId x : batch) {
    for (VertexId v : select_image(inst, s, x).ranked) {
      if (used.insert(v).second) {
        out.emplace_back(x, v);
        break;
      }
    }
  }
  return out;
}

// Applies a sampled batch in several orders; C, phi, occupancy and the host
// sets of vertices outside the batch must not depend on the order.
std::size_t order_independent_batches() {
  const auto inst = workload("hampath", 200, Rational(1, 2), 7);
  auto s = preprocess(inst);
  RunReport report;
  Rng rng(4242);
  std::size_t ok = 0;
  for (std::size_t sample = 0; sample < kPermutationBatches; ++sample) {
    const auto sel = batch_select(inst, s, Rational(1, 20), sample);
    auto images = choose_images(inst, s, sel.vertices);
    auto reference = s;
    apply_batch(inst, reference, images);
    bool same = images.size() >= 2;
    for (int perm = 0; perm < 3; ++perm) {
      rng.shuffle(std::span<std::pair<VertexId, VertexId>>(images));
      auto other = s;
      apply_batch(inst, other, images);
      same = same && other.candidates == reference.candidates && other.phi == reference.phi &&
             other.occupied == reference.occupied;
      for (VertexId y = 0; y < inst.n(); ++y)
        if (!reference.embedded(y)) same = same && other.host_sets[y] == reference.host_sets[y];
    }
    if (same) ++ok;
    for (int k = 0; k < 12; ++k)
      if (!embed_step(inst, s, report)) return ok;
  }
  return ok;
}

Line scaling() {
  const auto start = Clock::now();
  const auto pattern = parse_pattern_spec("hampath");
  std::vector<double> medians;
  std::string detail = "median seconds";
  for (std::size_t n : {100u, 200u, 400u}) {
    const auto row = bench_size(pattern, Rational(1, 2), n, kScalingTrials, 1, false);
    medians.push_back(row.median_seconds);
    detail += " N=" + std::to_string(n) + ":" + fmt(row.median_seconds);
  }
  bool pass = true;
  for (std::size_t i = 1; i < medians.size(); ++i) {
    const double ratio = medians[i] / std::max(medians[i - 1], 1e-6);
    pass = pass && ratio <= kScalingMaxRatio;
    std::ostringstream s;
    s.precision(3);
    s << " ratio " << ratio;
    detail += s.str();
  }
  const double t = since(start);
  detail += ", total " + fmt(t);
  return {"scaling", pass && t < kScalingBudgetSeconds, detail};
}

}  // namespace
}  // namespace blowup

int main(int argc, char** argv) {
  using namespace blowup;
  CLI::App app{"acceptance checks"};
  std::vector<std::string> known;
  app.add_option("--known-failure", known, "criterion expected to fail; reported but not fatal");
  CLI11_PARSE(app, argc, argv);

  std::vector<Line> lines;
  InvariantTally inv;
  AuditTally audit;

  lines.push_back(complete_blowups(inv));

  const auto hampath = series("hampath", 200, 0, inv, audit);
  const auto square = series("sqhamcycle", 150, 0, inv, audit);
  const bool within_budget = hampath.seconds + square.seconds < kSuperRegularBudgetSeconds;
  lines.push_back({"superregular-hampath", hampath.verified >= kNeededOf20 && within_budget, describe(hampath)});
  lines.push_back({"superregular-sqhamcycle", square.verified >= kNeededOf20 && within_budget, describe(square)});

  std::size_t restricted_vertices = 0;
  const auto restricted = series("hampath", 200, 2, inv, audit, std::nullopt,
                                 [&](const Instance& inst, const RunReport& r) {
                                   for (const auto& res : inst.restrictions) {
                                     ++restricted_vertices;
                                     if (!res.allowed.contains(r.embedding[res.vertex])) return false;
                                   }
                                   return true;
                                 });
  lines.push_back({"restrictions", restricted.verified >= kNeededOf20,
                   describe(restricted) + ", " + std::to_string(restricted_vertices) + " restricted images checked"});

  lines.push_back(regularity_oracle());
  lines.push_back(matching_oracle());

  // Batched mode: tail >= n against the sequential classes of the hampath
  // series above, then the default tail, then apply-order independence.
  std::size_t same_class = 0;
  for (std::uint64_t seed = 1; seed <= kEquivalenceSeeds; ++seed) {
    const auto inst = workload("hampath", 200, Rational(1, 2), seed);
    const auto b = run_batched(inst, Rational(1, 20), inst.n());
    const bool verified = b.report.success && verify_embedding(inst, b.report.embedding).ok;
    const std::string cls = b.report.success && !verified ? "verification-failure" : outcome_class(b.report);
    if (cls == hampath.classes[seed - 1]) ++same_class;
  }
  const auto batched = series("hampath", 200, 0, inv, audit, Rational(1, 20));
  const std::size_t permuted = order_independent_batches();
  lines.push_back({"batched",
                   same_class == kEquivalenceSeeds && batched.verified >= kBatchedNeededOf20 &&
                       permuted == kPermutationBatches,
                   "tail>=n same outcome " + std::to_string(same_class) + "/" + std::to_string(kEquivalenceSeeds) +
                       ", default tail " + describe(batched) + ", order-independent batches " +
                       std::to_string(permuted) + "/" + std::to_string(kPermutationBatches)});

  lines.push_back({"invariants", inv.dirty_runs == 0 && inv.buffer_failures == 0 && inv.runs > 0,
                   std::to_string(inv.runs) + " accepted runs, " + std::to_string(inv.steps) + " steps checked, " +
                       std::to_string(inv.dirty_runs) + " with violations, " + std::to_string(inv.buffer_failures) +
                       " with buffers closer than 4" +
                       (inv.first_problem.empty() ? "" : " (first: " + inv.first_problem + ")")});

  lines.push_back({"audit", audit.runs > 0 && audit.host_set_zero == 0 && audit.min_set_over == 0,
                   std::to_string(audit.runs) + " accepted runs, smallest host set " +
                       std::to_string(audit.runs > 0 ? audit.smallest_host_set : 0) + ", " +
                       std::to_string(audit.host_set_zero) + " runs reaching 0, " + std::to_string(audit.min_set_over) +
                       " runs with more than " + std::to_string(kMinSetWarningsPerRun) + " min-set warning"});

  lines.push_back(scaling());

  const std::set<std::string> expected(known.begin(), known.end());
  int status = 0;
  for (const auto& l : lines) {
    const bool excused = !l.pass && expected.count(l.name) > 0;
    std::cout << (l.pass ? "PASS " : "FAIL ") << l.name << ": " << l.detail << (excused ? " [known failure]" : "")
              << "\n";
    if (!l.pass && !excused) status = 1;
  }
  return status;
}
