// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "incrt/graph_store.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "incrt/error.hpp"

namespace incrt {

CoalesceResult coalesce(std::span<const EdgeUpdate> batch) {
  struct Net {
    int balance = 0;
    std::uint64_t ts = 0;
  };
  std::map<Edge, Net> net;
  for (const auto& u : batch) {
    auto& n = net[{u.src, u.dst}];
    n.balance += u.op == EdgeOp::Insert ? 1 : -1;
    n.balance = std::clamp(n.balance, -1, 1);
    n.ts = std::max(n.ts, u.ts);
  }
  CoalesceResult out;
  for (const auto& [edge, n] : net) {
    if (n.balance == 0) continue;
    out.updates.push_back({n.balance > 0 ? EdgeOp::Insert : EdgeOp::Delete, edge.first,
                           edge.second, n.ts});
  }
  out.dropped = batch.size() - out.updates.size();
  return out;
}

std::vector<EdgeUpdate> inverse(std::span<const EdgeUpdate> batch) {
  std::vector<EdgeUpdate> out(batch.begin(), batch.end());
  for (auto& u : out) u.op = u.op == EdgeOp::Insert ? EdgeOp::Delete : EdgeOp::Insert;
  return out;
}

DynamicGraph::DynamicGraph(std::size_t vertex_count, PmaConfig config)
    : out_(vertex_count, config),
      in_(vertex_count, config),
      in_degree_(vertex_count, 0),
      out_degree_(vertex_count, 0) {}

void DynamicGraph::check_vertex(VertexId v) const {
  if (v >= vertex_count()) {
    throw Error(ErrorCode::InvalidVertex,
                "vertex " + std::to_string(v) + " outside universe of " +
                    std::to_string(vertex_count()));
  }
}

std::size_t DynamicGraph::load(std::span<const Edge> edges) {
  std::vector<Edge> sorted(edges.begin(), edges.end());
  for (auto [s, d] : sorted) {
    check_vertex(s);
    check_vertex(d);
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const std::size_t dropped = edges.size() - sorted.size();

  std::vector<Edge> reversed;
  reversed.reserve(sorted.size());
  std::fill(in_degree_.begin(), in_degree_.end(), 0);
  std::fill(out_degree_.begin(), out_degree_.end(), 0);
  for (auto [s, d] : sorted) {
    reversed.emplace_back(d, s);
    ++out_degree_[s];
    ++in_degree_[d];
  }
  out_.build(sorted);
  in_.build(reversed);
  edge_count_ = sorted.size();
  return dropped;
}

ApplyResult DynamicGraph::apply_batch(std::span<const EdgeUpdate> batch) {
  for (const auto& u : batch) {
    check_vertex(u.src);
    check_vertex(u.dst);
  }
  auto co = coalesce(batch);
  ApplyResult result;
  result.coalesced_away = co.dropped;

  std::map<VertexId, DegreeDelta> touched;
  auto remember = [&](VertexId v) {
    auto [it, fresh] = touched.try_emplace(v);
    if (fresh) {
      it->second.vertex = v;
      it->second.old_in = in_degree_[v];
      it->second.old_out = out_degree_[v];
    }
  };

  for (const auto& u : co.updates) {
    if (u.op == EdgeOp::Insert) {
      if (out_.contains(u.src, u.dst)) {
        result.rejected.push_back(u);
        continue;
      }
      remember(u.src);
      remember(u.dst);
      out_.insert(u.src, u.dst);
      in_.insert(u.dst, u.src);
      ++out_degree_[u.src];
      ++in_degree_[u.dst];
      ++edge_count_;
    } else {
      if (!out_.contains(u.src, u.dst)) {
        result.rejected.push_back(u);
        continue;
      }
      remember(u.src);
      remember(u.dst);
      out_.erase(u.src, u.dst);
      in_.erase(u.dst, u.src);
      --out_degree_[u.src];
      --in_degree_[u.dst];
      --edge_count_;
    }
    result.applied.push_back(u);
  }

  for (auto& [v, d] : touched) {
    d.new_in = in_degree_[v];
    d.new_out = out_degree_[v];
    if (d.old_in != d.new_in || d.old_out != d.new_out) result.deltas.push_back(d);
  }
  return result;
}

std::size_t DynamicGraph::in_degree(VertexId v) const {
  check_vertex(v);
  return in_degree_[v];
}

std::size_t DynamicGraph::out_degree(VertexId v) const {
  check_vertex(v);
  return out_degree_[v];
}

bool DynamicGraph::has_edge(VertexId src, VertexId dst) const {
  check_vertex(src);
  check_vertex(dst);
  return out_.contains(src, dst);
}

AdjacencyPma::Range DynamicGraph::in_neighbors(VertexId v) const {
  check_vertex(v);
  return in_.neighbors(v);
}

AdjacencyPma::Range DynamicGraph::out_neighbors(VertexId v) const {
  check_vertex(v);
  return out_.neighbors(v);
}

std::vector<Edge> DynamicGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (VertexId v = 0; v < vertex_count(); ++v) {
    for (VertexId n : out_.neighbors(v)) out.emplace_back(v, n);
  }
  return out;
}

}  // namespace incrt
