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


#include "blowup/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "blowup/errors.hpp"
#include "blowup/rng.hpp"

namespace blowup {
namespace {

Json hex(const VertexSet& s) { return s.to_hex(); }

VertexSet hex_set(const Json& j, std::size_t n) { return VertexSet::from_hex(Universe::kHost, n, j.get<std::string>()); }

Rational rational_field(const Json& doc, const char* key) { return parse_rational(doc.at(key).get<std::string>()); }

template <typename T>
T natural(const Json& j) {
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0))
    throw ContractViolation("expected a non-negative integer, got " + j.dump());
  const auto v = j.get<std::uint64_t>();
  if (v > std::numeric_limits<T>::max()) throw ContractViolation("integer " + j.dump() + " out of range");
  return static_cast<T>(v);
}

template <typename T>
std::vector<T> naturals(const Json& j) {
  if (!j.is_array()) throw ContractViolation("expected an array of non-negative integers");
  std::vector<T> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(natural<T>(v));
  return out;
}

template <typename Fn>
auto decoding(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  } catch (const ContractViolation& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

Json failure_to_json(const Failure& f) {
  Json j;
  j["kind"] = f.kind;
  j["t"] = f.t;
  j["vertex"] = f.vertex ? Json(*f.vertex) : Json(nullptr);
  j["message"] = f.message;
  j["histogram"] = {{"candidates", f.histogram.candidates},
                    {"fail_host_window", f.histogram.fail_host_window},
                    {"fail_candidate_window", f.histogram.fail_candidate_window},
                    {"fail_pairwise", f.histogram.fail_pairwise}};
  return j;
}

Json hall_to_json(const HallAudit& a) {
  return {{"m", a.m},
          {"min_set_ok", a.min_set_ok},
          {"min_set_size", a.min_set_size},
          {"min_set_threshold", a.min_set_threshold},
          {"union_ok", a.union_ok},
          {"union_samples", a.union_samples},
          {"union_failures", a.union_failures},
          {"union_min_margin", a.union_min_margin},
          {"coverage_ok", a.coverage_ok},
          {"min_coverage", a.min_coverage},
          {"coverage_threshold", a.coverage_threshold}};
}

Json audit_to_json(const AuditRecord& a) {
  Json clusters = Json::array();
  for (const auto& c : a.clusters) {
    clusters.push_back({{"cluster", c.cluster},
                        {"unembedded", c.unembedded},
                        {"applicable", c.applicable},
                        {"ut_density", c.ut_density},
                        {"min_degree", c.min_degree},
                        {"below_relative", c.below_relative},
                        {"below_absolute", c.below_absolute},
                        {"exceptional_bound", c.exceptional_bound},
                        {"degree_profile_ok", c.degree_profile_ok},
                        {"sample_trials", c.sample_trials},
                        {"sample_failures", c.sample_failures},
                        {"sample_bound", c.sample_bound},
                        {"sample_ok", c.sample_ok}});
  }
  return {{"t", a.t},
          {"min_host_set", a.min_host_set},
          {"min_host_set_vertex", a.min_host_set_vertex ? Json(*a.min_host_set_vertex) : Json(nullptr)},
          {"host_set_threshold", a.host_set_threshold},
          {"host_set_ok", a.host_set_ok},
          {"clusters", clusters}};
}

}  // namespace

Json params_to_json(const ParameterCascade& p) {
  return {{"eps", to_string(p.eps)},     {"eps1", to_string(p.eps1)},   {"eps2", to_string(p.eps2)},
          {"d3", to_string(p.d3)},       {"d2", to_string(p.d2)},       {"d1", to_string(p.d1)},
          {"delta", to_string(p.delta)}, {"max_degree", p.max_degree},  {"c", to_string(p.c)},
          {"alpha", to_string(p.alpha)}, {"alpha_batch", to_string(p.alpha_batch)}};
}

ParameterCascade params_from_json(const Json& doc) {
  return decoding("parameters", [&] {
    ParameterCascade p;
    p.eps = rational_field(doc, "eps");
    p.eps1 = rational_field(doc, "eps1");
    p.eps2 = rational_field(doc, "eps2");
    p.d3 = rational_field(doc, "d3");
    p.d2 = rational_field(doc, "d2");
    p.d1 = rational_field(doc, "d1");
    p.delta = rational_field(doc, "delta");
    p.max_degree = natural<std::size_t>(doc.at("max_degree"));
    p.c = rational_field(doc, "c");
    p.alpha = rational_field(doc, "alpha");
    p.alpha_batch = rational_field(doc, "alpha_batch");
    return p;
  });
}

Json instance_to_json(const Instance& inst) {
  const std::size_t big_n = inst.n_per_cluster();
  Json doc;
  doc["format_version"] = kInstanceFormatVersion;
  doc["r"] = inst.r();
  doc["N"] = big_n;
  Json edges = Json::array();
  for (const auto& e : inst.host.clusters.edges()) {
    Json rows = Json::array();
    for (std::size_t a = 0; a < big_n; ++a) {
      VertexSet row(Universe::kLocal, big_n);
      inst.host.graph.neighbors(static_cast<VertexId>(e.i * big_n + a)).for_each([&](VertexId v) {
        if (inst.host.cluster_of(v) == e.j) row.insert(static_cast<VertexId>(v - e.j * big_n));
      });
      rows.push_back(row.to_hex());
    }
    edges.push_back({{"i", e.i}, {"j", e.j}, {"density", to_string(e.density)}, {"rows", rows}});
  }
  doc["cluster_edges"] = edges;
  Json pattern_edges = Json::array();
  for (auto [u, v] : inst.pattern.graph.edges()) pattern_edges.push_back({u, v});
  doc["pattern"] = {{"order", inst.pattern.order()},
                    {"max_degree", inst.pattern.max_degree},
                    {"edges", pattern_edges},
                    {"assignment", inst.pattern.assignment}};
  Json restrictions = Json::array();
  for (const auto& r : inst.restrictions) restrictions.push_back({{"vertex", r.vertex}, {"allowed", r.allowed.to_hex()}});
  doc["restrictions"] = restrictions;
  doc["parameters"] = params_to_json(inst.params);
  const Rng root(inst.seed);
  doc["seeds"] = {{"instance", inst.seed},
                  {"generator", root.split(SeedStream::kGenerator).seed()},
                  {"selection", root.split(SeedStream::kSelection).seed()},
                  {"mis", root.split(SeedStream::kMis).seed()},
                  {"audit", root.split(SeedStream::kAudit).seed()}};
  return doc;
}

Instance instance_from_json(const Json& doc) {
  Instance inst = decoding("instance file", [&] {
    if (!doc.is_object()) throw FormatError("instance file: not a JSON object");
    const int version = doc.at("format_version").get<int>();
    if (version != kInstanceFormatVersion) {
      throw FormatError("instance file: unsupported format_version " + std::to_string(version));
    }
    const auto r = natural<std::size_t>(doc.at("r"));
    const auto big_n = natural<std::size_t>(doc.at("N"));
    if (r == 0 || big_n == 0) throw FormatError("instance file: r and N must be positive");
    const std::size_t n = r * big_n;

    std::vector<ClusterEdge> cluster_edges;
    std::vector<Edge> host_edges;
    for (const auto& e : doc.at("cluster_edges")) {
      ClusterEdge ce{natural<std::uint32_t>(e.at("i")), natural<std::uint32_t>(e.at("j")), rational_field(e, "density")};
      if (ce.i >= r || ce.j >= r || ce.i >= ce.j) throw FormatError("instance file: bad cluster edge");
      const auto& rows = e.at("rows");
      if (rows.size() != big_n) throw FormatError("instance file: cluster edge needs N adjacency rows");
      for (std::size_t a = 0; a < big_n; ++a) {
        VertexSet row = VertexSet::from_hex(Universe::kLocal, big_n, rows[a].get<std::string>());
        row.for_each([&](VertexId b) {
          host_edges.emplace_back(static_cast<VertexId>(ce.i * big_n + a), static_cast<VertexId>(ce.j * big_n + b));
        });
      }
      cluster_edges.push_back(ce);
    }

    const auto& pat = doc.at("pattern");
    const auto order = natural<std::size_t>(pat.at("order"));
    std::vector<Edge> pattern_edges;
    for (const auto& e : pat.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw FormatError("instance file: pattern edge must be a pair");
      auto u = natural<VertexId>(e[0]);
      auto v = natural<VertexId>(e[1]);
      if (u >= order || v >= order || u == v) throw FormatError("instance file: bad pattern edge");
      pattern_edges.emplace_back(u, v);
    }

    Instance out;
    out.host.clusters = ClusterGraph(r, std::move(cluster_edges));
    out.host.n_per_cluster = big_n;
    out.host.graph = Graph(Universe::kHost, n, host_edges);
    out.pattern.graph = Graph(Universe::kPattern, order, pattern_edges);
    out.pattern.max_degree = natural<std::size_t>(pat.at("max_degree"));
    out.pattern.assignment = naturals<std::uint32_t>(pat.at("assignment"));
    for (const auto& res : doc.at("restrictions")) {
      out.restrictions.push_back({natural<VertexId>(res.at("vertex")), hex_set(res.at("allowed"), n)});
    }
    out.params = params_from_json(doc.at("parameters"));
    out.seed = natural<std::uint64_t>(doc.at("seeds").at("instance"));
    return out;
  });
  validate_instance(inst);
  return inst;
}

Json embedding_to_json(std::span<const VertexId> phi) {
  Json a = Json::array();
  for (VertexId v : phi) a.push_back(v);
  return a;
}

std::vector<VertexId> embedding_from_json(const Json& doc) {
  return decoding("embedding", [&] {
    if (!doc.is_array()) throw FormatError("embedding: expected a JSON array of host vertices");
    return naturals<VertexId>(doc);
  });
}

Json report_to_json(const RunReport& report) {
  Json j;
  j["success"] = report.success;
  j["failure"] = report.failure ? failure_to_json(*report.failure) : Json(nullptr);
  j["phase1"] = {{"steps", report.steps},
                 {"candidates_scanned", report.candidates_scanned},
                 {"forced_steps", report.forced_steps},
                 {"sampled_steps", report.sampled_steps},
                 {"T0", report.t0},
                 {"T1", report.t1},
                 {"T", report.big_t},
                 {"buffers", report.buffers},
                 {"min_host_set", report.steps > 0 ? Json(report.min_host_set) : Json(nullptr)},
                 {"min_host_set_t", report.min_host_set_t},
                 {"seconds", report.phase1_seconds}};
  Json sweeps = Json::array();
  for (const auto& s : report.sweeps) {
    sweeps.push_back({{"t", s.t}, {"per_cluster", s.per_cluster}, {"total", s.total}, {"bound", s.bound},
                      {"within_bound", s.within_bound}});
  }
  j["pattern_sweeps"] = sweeps;
  if (report.host_sweep) {
    const auto& h = *report.host_sweep;
    j["host_sweep"] = {{"t", h.t},
                       {"exceptional", h.exceptional},
                       {"threshold", h.threshold_fraction},
                       {"bound", h.bound},
                       {"within_bound", h.within_bound},
                       {"pulled", h.pulled},
                       {"relaxed", h.relaxed}};
  } else {
    j["host_sweep"] = nullptr;
  }
  Json phase2 = Json::array();
  for (const auto& p : report.phase2) {
    phase2.push_back({{"cluster", p.cluster},
                      {"m", p.m},
                      {"matching_size", p.matching_size},
                      {"phases", p.phases},
                      {"perfect", p.perfect},
                      {"hall", hall_to_json(p.hall)},
                      {"hall_witness", p.hall_witness}});
  }
  j["phase2"] = phase2;
  j["phase2_seconds"] = report.phase2_seconds;
  Json audits = Json::array();
  for (const auto& a : report.audits) audits.push_back(audit_to_json(a));
  j["audits"] = audits;
  j["clamped"] = report.clamped;
  j["warnings"] = report.warnings;
  return j;
}

Json round_log_to_json(const RoundLog& log) {
  Json rounds = Json::array();
  for (const auto& r : log.rounds) {
    rounds.push_back({{"t", r.t},
                      {"unembedded", r.unembedded},
                      {"target", r.target},
                      {"mis_size", r.mis_size},
                      {"mis_iterations", r.mis_iterations},
                      {"batch", r.batch},
                      {"embedded", r.embedded},
                      {"retries", r.retries}});
  }
  return {{"rounds", rounds},
          {"batch_rounds", log.rounds.size()},
          {"total_rounds", log.total_rounds()},
          {"tail_threshold", log.tail_threshold},
          {"tail_size", log.tail_size},
          {"sequential_steps", log.sequential_steps},
          {"phase2_rounds", log.phase2_rounds},
          {"phase2_paths", log.phase2_paths},
          {"phase2_fallbacks", log.phase2_fallbacks}};
}

Json state_to_json(const EmbeddingState& state, const ParameterCascade& params) {
  Json j;
  j["format_version"] = kStateFormatVersion;
  j["parameters"] = params_to_json(params);
  j["t"] = state.t;
  j["order"] = state.order;
  Json phi = Json::array();
  for (VertexId v : state.phi) phi.push_back(v == kNoImage ? Json(nullptr) : Json(v));
  j["phi"] = phi;
  Json c = Json::array();
  Json hs = Json::array();
  for (std::size_t x = 0; x < state.candidates.size(); ++x) {
    c.push_back(hex(state.candidates[x]));
    hs.push_back(hex(state.host_sets[x]));
  }
  j["candidates"] = c;
  j["host_sets"] = hs;
  j["buffers"] = state.buffers;
  j["occupied"] = state.occupied.to_hex();
  Json forced = Json::array();
  for (std::size_t x = 0; x < state.forced.size(); ++x) {
    if (state.forced[x]) forced.push_back(x);
  }
  j["forced"] = forced;
  Json pools = Json::array();
  for (const auto& p : state.exceptional_pool) pools.push_back(p.to_hex());
  j["exceptional_pool"] = pools;
  j["host_sweep_done"] = state.host_sweep_done;
  j["m"] = state.m;
  j["T0"] = state.t0;
  j["T1"] = state.t1;
  j["pattern_sweep_mark"] = state.pattern_sweep_mark;
  j["T"] = state.big_t ? Json(*state.big_t) : Json(nullptr);
  j["selection_seed"] = state.selection_seed;
  return j;
}

EmbeddingState state_from_json(const Json& doc, std::size_t n) {
  return decoding("state dump", [&] {
    if (doc.at("format_version").get<int>() != kStateFormatVersion) throw FormatError("state dump: unsupported version");
    EmbeddingState s;
    s.t = natural<std::size_t>(doc.at("t"));
    s.order = naturals<VertexId>(doc.at("order"));
    for (const auto& v : doc.at("phi")) s.phi.push_back(v.is_null() ? kNoImage : natural<VertexId>(v));
    for (const auto& c : doc.at("candidates")) s.candidates.push_back(hex_set(c, n));
    for (const auto& h : doc.at("host_sets")) s.host_sets.push_back(hex_set(h, n));
    for (const auto& b : doc.at("buffers")) s.buffers.push_back(naturals<VertexId>(b));
    s.is_buffer.assign(n, false);
    for (const auto& b : s.buffers) {
      for (VertexId x : b) {
        if (x >= n) throw FormatError("state dump: buffer out of range");
        s.is_buffer[x] = true;
      }
    }
    s.occupied = hex_set(doc.at("occupied"), n);
    s.forced.assign(n, false);
    for (const auto& x : doc.at("forced")) {
      auto v = natural<std::size_t>(x);
      if (v >= n) throw FormatError("state dump: forced vertex out of range");
      s.forced[v] = true;
    }
    for (const auto& p : doc.at("exceptional_pool")) s.exceptional_pool.push_back(hex_set(p, n));
    s.host_sweep_done = doc.at("host_sweep_done").get<bool>();
    s.m = natural<std::size_t>(doc.at("m"));
    s.t0 = natural<std::size_t>(doc.at("T0"));
    s.t1 = natural<std::size_t>(doc.at("T1"));
    s.pattern_sweep_mark = natural<std::size_t>(doc.at("pattern_sweep_mark"));
    if (!doc.at("T").is_null()) s.big_t = natural<std::size_t>(doc.at("T"));
    s.selection_seed = natural<std::uint64_t>(doc.at("selection_seed"));
    if (s.phi.size() != n || s.candidates.size() != n || s.host_sets.size() != n || s.order.size() != n) {
      throw FormatError("state dump: per-vertex arrays must have " + std::to_string(n) + " entries");
    }
    return s;
  });
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(1) << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace blowup
