// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "incrt/generators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "incrt/error.hpp"

namespace incrt::gen {

GraphKind parse_graph_kind(std::string_view text) {
  std::string key;
  for (char c : text) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "er" || key == "erdos_renyi" || key == "erdos-renyi") return GraphKind::ErdosRenyi;
  if (key == "ba" || key == "barabasi_albert" || key == "barabasi-albert") {
    return GraphKind::BarabasiAlbert;
  }
  throw Error(ErrorCode::ConfigError, "unknown graph kind '" + std::string(text) + "'");
}

std::vector<EdgeUpdate> erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::ConfigError, "graph needs at least 2 vertices");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::ConfigError, "edge probability outside [0, 1]");
  std::vector<EdgeUpdate> out;
  if (p == 0.0) return out;
  std::mt19937_64 rng(seed);
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1);
  const std::uint64_t row = n - 1;
  auto emit = [&](std::uint64_t idx) {
    const auto src = static_cast<VertexId>(idx / row);
    auto dst = static_cast<VertexId>(idx % row);
    if (dst >= src) ++dst;
    out.push_back({EdgeOp::Insert, src, dst, 0});
  };
  if (p == 1.0) {
    for (std::uint64_t idx = 0; idx < total; ++idx) emit(idx);
  } else {
    std::geometric_distribution<std::uint64_t> skip(p);
    for (std::uint64_t idx = skip(rng); idx < total; idx += 1 + skip(rng)) emit(idx);
  }
  std::vector<std::uint64_t> ts(out.size());
  std::iota(ts.begin(), ts.end(), 0);
  std::shuffle(ts.begin(), ts.end(), rng);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].ts = ts[i];
  return out;
}

std::vector<EdgeUpdate> erdos_renyi_avg_degree(std::size_t n, double avg_degree,
                                               std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::ConfigError, "graph needs at least 2 vertices");
  if (!(avg_degree >= 0.0)) throw Error(ErrorCode::ConfigError, "average degree must be >= 0");
  return erdos_renyi(n, std::min(1.0, avg_degree / static_cast<double>(n - 1)), seed);
}

std::vector<EdgeUpdate> barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw Error(ErrorCode::ConfigError, "attachment count m must be at least 1");
  if (n < 2 || n <= m) throw Error(ErrorCode::ConfigError, "need n > m and n >= 2");
  std::mt19937_64 rng(seed);
  std::vector<EdgeUpdate> out;
  out.reserve((m + 1) * m + (n - m - 1) * m);
  std::vector<VertexId> ends;  // each vertex appears once per incident edge
  std::uint64_t ts = 0;
  auto add = [&](VertexId s, VertexId d) {
    out.push_back({EdgeOp::Insert, s, d, ts++});
    ends.push_back(s);
    ends.push_back(d);
  };
  for (VertexId u = 0; u <= m; ++u) {
    for (VertexId v = 0; v <= m; ++v) {
      if (u != v) add(u, v);
    }
  }
  std::vector<VertexId> targets;
  for (auto v = static_cast<VertexId>(m + 1); v < n; ++v) {
    targets.clear();
    std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
    while (targets.size() < m) {
      const VertexId t = ends[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    std::sort(targets.begin(), targets.end());
    for (VertexId t : targets) add(v, t);
  }
  return out;
}

std::vector<EdgeUpdate> generate_graph(GraphKind kind, std::size_t n, double param,
                                       std::uint64_t seed) {
  if (kind == GraphKind::ErdosRenyi) return erdos_renyi(n, param, seed);
  if (!(param >= 1.0) || param != std::floor(param)) {
    throw Error(ErrorCode::ConfigError, "BA parameter m must be a positive integer");
  }
  return barabasi_albert(n, static_cast<std::size_t>(param), seed);
}

std::vector<Edge> to_edges(const std::vector<EdgeUpdate>& stream) {
  std::vector<Edge> out;
  out.reserve(stream.size());
  for (const auto& e : stream) out.emplace_back(e.src, e.dst);
  return out;
}

}  // namespace incrt::gen
