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

#include "blowup/regularity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "blowup/errors.hpp"
#include "blowup/rng.hpp"

namespace blowup {
namespace {

using i128 = __int128;

std::uint32_t mask_of(const VertexSet& s) {
  std::uint32_t m = 0;
  s.for_each([&](VertexId v) { m |= 1U << v; });
  return m;
}

VertexSet set_of(std::uint32_t mask, std::size_t size) {
  VertexSet s(Universe::kLocal, size);
  while (mask != 0) {
    s.insert(static_cast<VertexId>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return s;
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

}  // namespace

RegularityVerdict is_regular_exact(const BipartitePair& p, const Rational& eps, std::size_t limit) {
  const std::size_t a = p.size_a();
  const std::size_t b = p.size_b();
  limit = std::min<std::size_t>(limit, 20);
  if (a > limit || b > limit) {
    throw SizeLimitError("pair of sides " + std::to_string(a) + "x" + std::to_string(b) +
                         " exceeds the exhaustive limit " + std::to_string(limit) + "; use certify_regular");
  }
  if (a == 0 || b == 0) throw UndefinedDensity("regularity of a pair with an empty side");

  const i128 ab = static_cast<i128>(a * b);
  const i128 total = static_cast<i128>(p.edge_count());
  const i128 ep = eps.numerator();
  const i128 eq = eps.denominator();

  std::vector<std::uint32_t> col_masks(b);  // neighbours in A of each b, as a mask
  for (std::size_t j = 0; j < b; ++j) col_masks[j] = mask_of(p.neighbors_of_b(static_cast<VertexId>(j)));

  const std::uint32_t a_masks = 1U << a;
  const std::uint32_t b_masks = 1U << b;
  std::vector<std::int32_t> deg_x(b);
  std::vector<std::int32_t> e_y(b_masks);

  RegularityVerdict verdict;
  // Best deviation so far as the fraction best_num / best_den.
  i128 best_num = -1;
  i128 best_den = 1;
  std::uint32_t best_x = 0;
  std::uint32_t best_y = 0;

  for (std::uint32_t x = 1; x < a_masks; ++x) {
    const i128 nx = std::popcount(x);
    if (nx * eq <= ep * static_cast<i128>(a)) continue;  // need |X| > eps|A|
    for (std::size_t j = 0; j < b; ++j) deg_x[j] = std::popcount(col_masks[j] & x);
    e_y[0] = 0;
    for (std::uint32_t y = 1; y < b_masks; ++y) {
      e_y[y] = e_y[y & (y - 1)] + deg_x[std::countr_zero(y)];
      const i128 ny = std::popcount(y);
      if (ny * eq <= ep * static_cast<i128>(b)) continue;
      // |e/(nx ny) - total/ab| = |e ab - total nx ny| / (nx ny ab)
      const i128 num = abs128(static_cast<i128>(e_y[y]) * ab - total * nx * ny);
      const i128 den = nx * ny * ab;
      if (num * eq < ep * den) continue;  // deviation < eps
      if (best_num < 0 || num * best_den > best_num * den) {
        best_num = num;
        best_den = den;
        best_x = x;
        best_y = y;
      }
    }
  }
  if (best_num >= 0) {
    verdict.regular = false;
    verdict.witness = IrregularityWitness{set_of(best_x, a), set_of(best_y, b),
                                          Rational(static_cast<std::int64_t>(best_num),
                                                   static_cast<std::int64_t>(best_den))};
  }
  return verdict;
}

RegularityCertificate certify_regular(const BipartitePair& p, const Rational& eps) {
  const std::size_t a = p.size_a();
  const std::size_t b = p.size_b();
  RegularityCertificate cert;
  cert.pair_density = density(p);  // throws on an empty side

  const i128 k = static_cast<i128>(a * b);
  const i128 e = static_cast<i128>(p.edge_count());
  std::vector<i128> deg(a);
  for (std::size_t u = 0; u < a; ++u) deg[u] = static_cast<i128>(p.neighbors_of_a(static_cast<VertexId>(u)).count());

  // Every term is scaled by k^2 so it stays integral.
  i128 centered = 0;
  i128 simple = 0;
  std::uint64_t codeg_sum = 0;
  for (std::size_t u = 0; u < a; ++u) {
    const auto& row_u = p.neighbors_of_a(static_cast<VertexId>(u));
    for (std::size_t w = 0; w < a; ++w) {
      const i128 cd = static_cast<i128>(intersection_count(row_u, p.neighbors_of_a(static_cast<VertexId>(w))));
      codeg_sum += static_cast<std::uint64_t>(cd);
      centered += abs128(cd * k * k - e * k * (deg[u] + deg[w]) + e * e * static_cast<i128>(b));
      simple += abs128(cd * k * k - e * e * static_cast<i128>(b));
    }
  }
  using boost::multiprecision::cpp_int;
  auto to_cpp = [](i128 v) {
    cpp_int out = static_cast<std::int64_t>(v >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(v);
    return out;
  };
  // S <= eps^5 a^2 b   <=>   centered * q^5 <= p^5 * a^2 b * k^2
  cpp_int lhs = to_cpp(centered);
  cpp_int rhs = to_cpp(static_cast<i128>(a) * static_cast<i128>(a) * static_cast<i128>(b)) * to_cpp(k) * to_cpp(k);
  for (int i = 0; i < 5; ++i) {
    lhs *= eps.denominator();
    rhs *= eps.numerator();
  }
  cert.passed = eps.numerator() > 0 && lhs <= rhs;
  cert.conclusive = cert.passed;
  cert.codegree_sum = codeg_sum;
  const double k2 = static_cast<double>(k) * static_cast<double>(k);
  cert.centered_statistic = static_cast<double>(centered) / k2;
  cert.simple_deviation = static_cast<double>(simple) / k2;
  const double denom = static_cast<double>(a) * static_cast<double>(a) * static_cast<double>(b);
  cert.threshold = std::pow(to_double(eps), 5) * denom;
  cert.implied_eps = std::pow(cert.centered_statistic / denom, 0.2);
  return cert;
}

SuperRegularityReport is_super_regular(const BipartitePair& p, const Rational& eps, const Rational& delta,
                                       std::size_t exact_limit) {
  SuperRegularityReport report;
  if (p.size_a() <= exact_limit && p.size_b() <= exact_limit) {
    report.used_exact = true;
    report.verdict = is_regular_exact(p, eps, exact_limit);
    report.regular = report.verdict->regular;
  } else {
    report.certificate = certify_regular(p, eps);
    report.regular = report.certificate->passed;
  }
  const auto need_a = static_cast<std::size_t>(std::max<std::int64_t>(0, ceil_times(delta, static_cast<std::int64_t>(p.size_b()))));
  const auto need_b = static_cast<std::size_t>(std::max<std::int64_t>(0, ceil_times(delta, static_cast<std::int64_t>(p.size_a()))));
  for (VertexId u = 0; u < p.size_a(); ++u) {
    if (p.neighbors_of_a(u).count() < need_a) report.failing_a.push_back(u);
  }
  for (VertexId v = 0; v < p.size_b(); ++v) {
    if (p.neighbors_of_b(v).count() < need_b) report.failing_b.push_back(v);
  }
  report.super_regular = report.regular && report.failing_a.empty() && report.failing_b.empty();
  return report;
}

BipartitePair generate_super_regular_pair(std::size_t n, const Rational& delta, const Rational& /*eps*/,
                                          std::uint64_t seed) {
  if (n == 0) throw ContractViolation("generate_super_regular_pair: n must be positive");
  if (delta <= 0 || delta > 1) throw ContractViolation("generate_super_regular_pair: delta must lie in (0,1]");
  Rng rng(seed);
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::vector<std::size_t> deg_a(n, 0);
  std::vector<std::size_t> deg_b(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (rng.bernoulli(delta)) {
        adj[i][j] = true;
        ++deg_a[i];
        ++deg_b[j];
      }
    }
  }
  const auto target = static_cast<std::size_t>(ceil_times(delta, static_cast<std::int64_t>(n)));

  // Repair: join each deficient vertex to its lowest-degree non-neighbours.
  auto repair = [&](bool side_a) {
    auto& own = side_a ? deg_a : deg_b;
    auto& other = side_a ? deg_b : deg_a;
    std::vector<std::size_t> order(n);
    for (std::size_t u = 0; u < n; ++u) {
      if (own[u] >= target) continue;
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t x, std::size_t y) { return other[x] < other[y]; });
      for (std::size_t w : order) {
        if (own[u] >= target) break;
        auto&& cell = side_a ? adj[u][w] : adj[w][u];
        if (cell) continue;
        cell = true;
        ++own[u];
        ++other[w];
      }
    }
  };
  repair(true);
  repair(false);

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (adj[i][j]) edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
    }
  }
  return BipartitePair(n, n, edges);
}

// ---------------------------------------------------------------------------
// ClusterGraph / HostGraph

ClusterGraph::ClusterGraph(std::size_t r, std::vector<ClusterEdge> edges) : r_(r), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i == e.j || e.j >= r_) throw ContractViolation("invalid cluster edge");
    if (e.density <= 0 || e.density > 1) throw ContractViolation("cluster edge density must lie in (0,1]");
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const ClusterEdge& x, const ClusterEdge& y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j) {
      throw ContractViolation("duplicate cluster edge");
    }
  }
}

ClusterGraph ClusterGraph::complete(std::size_t r) {
  std::vector<ClusterEdge> edges;
  for (std::uint32_t i = 0; i < r; ++i) {
    for (std::uint32_t j = i + 1; j < r; ++j) edges.push_back({i, j, Rational(1)});
  }
  return ClusterGraph(r, std::move(edges));
}

ClusterGraph ClusterGraph::parse(const std::string& spec, std::size_t min_r) {
  if (spec == "triangle") return complete(std::max<std::size_t>(3, min_r));
  if (!spec.empty() && (spec[0] == 'K' || spec[0] == 'k')) {
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(spec.substr(1), &used);
      if (used != spec.size() - 1) throw std::invalid_argument(spec);
    } catch (const std::exception&) {
      throw ContractViolation("malformed cluster graph '" + spec + "'");
    }
    if (k < 1) throw ContractViolation("K0 is not a cluster graph");
    return complete(k);
  }
  std::vector<ClusterEdge> edges;
  std::size_t r = min_r;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto dash = item.find('-');
    if (dash == std::string::npos) throw ContractViolation("malformed cluster edge '" + item + "'");
    try {
      auto i = static_cast<std::uint32_t>(std::stoul(item.substr(0, dash)));
      auto j = static_cast<std::uint32_t>(std::stoul(item.substr(dash + 1)));
      edges.push_back({i, j, Rational(1)});
      r = std::max<std::size_t>(r, std::max(i, j) + 1);
    } catch (const std::logic_error&) {
      throw ContractViolation("malformed cluster edge '" + item + "'");
    }
  }
  return ClusterGraph(r, std::move(edges));
}

std::size_t ClusterGraph::index_of(std::uint32_t i, std::uint32_t j) const {
  if (i > j) std::swap(i, j);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (edges_[k].i == i && edges_[k].j == j) return k;
  }
  return edges_.size();
}

bool ClusterGraph::has_edge(std::uint32_t i, std::uint32_t j) const { return index_of(i, j) < edges_.size(); }

const Rational& ClusterGraph::density(std::uint32_t i, std::uint32_t j) const {
  auto k = index_of(i, j);
  if (k == edges_.size()) {
    throw ContractViolation("clusters " + std::to_string(i) + " and " + std::to_string(j) + " are not adjacent in R");
  }
  return edges_[k].density;
}

void ClusterGraph::set_density(std::uint32_t i, std::uint32_t j, const Rational& d) {
  auto k = index_of(i, j);
  if (k == edges_.size()) throw ContractViolation("set_density on a non-edge");
  if (d <= 0 || d > 1) throw ContractViolation("cluster edge density must lie in (0,1]");
  edges_[k].density = d;
}

VertexSet HostGraph::cluster(std::uint32_t i) const {
  if (i >= clusters.r()) throw ContractViolation("cluster index out of range");
  return VertexSet::range(Universe::kHost, order(), static_cast<VertexId>(i * n_per_cluster),
                          static_cast<VertexId>((i + 1) * n_per_cluster));
}

BipartitePair HostGraph::pair(std::uint32_t i, std::uint32_t j) const {
  return BipartitePair::from_graph(graph, cluster(i), cluster(j));
}

HostGraph build_complete_blowup(const ClusterGraph& r_graph, std::size_t n) {
  if (n == 0) throw ContractViolation("build_complete_blowup: N must be positive");
  std::vector<ClusterEdge> unit;
  for (const auto& e : r_graph.edges()) unit.push_back({e.i, e.j, Rational(1)});
  HostGraph host{ClusterGraph(r_graph.r(), std::move(unit)), n, {}};
  GraphBuilder builder(Universe::kHost, r_graph.r() * n);
  for (const auto& e : r_graph.edges()) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        builder.add_edge(static_cast<VertexId>(e.i * n + a), static_cast<VertexId>(e.j * n + b));
      }
    }
  }
  host.graph = std::move(builder).build();
  return host;
}

void validate_host(const HostGraph& host) {
  if (host.n_per_cluster == 0) throw InvariantError("host.cluster-size", "N must be positive");
  if (host.graph.universe() != Universe::kHost) throw InvariantError("host.universe", "graph is not a host graph");
  if (host.graph.order() != host.clusters.r() * host.n_per_cluster) {
    throw InvariantError("host.cluster-size", "order " + std::to_string(host.graph.order()) + " != r*N");
  }
  for (auto [u, v] : host.graph.edges()) {
    auto cu = host.cluster_of(u);
    auto cv = host.cluster_of(v);
    if (cu == cv) {
      throw InvariantError("host.intra-cluster-edge",
                           "edge {" + std::to_string(u) + "," + std::to_string(v) + "} inside cluster " +
                               std::to_string(cu));
    }
    if (!host.clusters.has_edge(cu, cv)) {
      throw InvariantError("host.edge-outside-R", "edge {" + std::to_string(u) + "," + std::to_string(v) +
                                                      "} joins non-adjacent clusters");
    }
  }
}

}  // namespace blowup
