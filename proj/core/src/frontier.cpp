// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "incrt/frontier.hpp"

#include <algorithm>
#include <iterator>

namespace incrt {

UpdateView::UpdateView(const DynamicGraph& post, const ApplyResult& result)
    : post_(&post), applied_(result.applied), deltas_(result.deltas) {
  for (const auto& u : applied_) {
    (u.op == EdgeOp::Insert ? inserted_ : deleted_).emplace_back(u.src, u.dst);
  }
  std::sort(inserted_.begin(), inserted_.end());
  std::sort(deleted_.begin(), deleted_.end());
  std::sort(deltas_.begin(), deltas_.end(),
            [](const DegreeDelta& a, const DegreeDelta& b) { return a.vertex < b.vertex; });
}

const DegreeDelta* UpdateView::find(VertexId v) const {
  auto it = std::lower_bound(deltas_.begin(), deltas_.end(), v,
                             [](const DegreeDelta& d, VertexId x) { return d.vertex < x; });
  return (it != deltas_.end() && it->vertex == v) ? &*it : nullptr;
}

std::size_t UpdateView::in_degree_pre(VertexId v) const {
  const DegreeDelta* d = find(v);
  return d ? d->old_in : post_->in_degree(v);
}

std::size_t UpdateView::out_degree_pre(VertexId v) const {
  const DegreeDelta* d = find(v);
  return d ? d->old_out : post_->out_degree(v);
}

bool UpdateView::inserted(VertexId src, VertexId dst) const {
  return std::binary_search(inserted_.begin(), inserted_.end(), Edge{src, dst});
}

bool UpdateView::deleted(VertexId src, VertexId dst) const {
  return std::binary_search(deleted_.begin(), deleted_.end(), Edge{src, dst});
}

bool UpdateView::existed_pre(VertexId src, VertexId dst) const {
  if (deleted(src, dst)) return true;
  return post_->has_edge(src, dst) && !inserted(src, dst);
}

std::vector<VertexId> UpdateView::out_degree_changed() const {
  std::vector<VertexId> out;
  for (const auto& d : deltas_) {
    if (d.old_out != d.new_out) out.push_back(d.vertex);
  }
  return out;
}

bool ComputationGraph::empty() const noexcept {
  return std::all_of(layers.begin(), layers.end(), [](const LayerFrontier& f) {
    return f.e_curr.empty() && f.e_recomp.empty() && f.v_dst.empty() && f.changed.empty();
  });
}

namespace {

bool by_dst(const FrontierEdge& a, const FrontierEdge& b) {
  return a.dst != b.dst ? a.dst < b.dst : a.src < b.src;
}

std::vector<VertexId> set_union(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::vector<VertexId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

ComputationGraph build_computation_graph(const UpdateView& view, std::size_t num_layers,
                                         BundleFlags flags) {
  if (num_layers < 1) throw Error(ErrorCode::ConfigError, "layer count must be at least 1");
  const DynamicGraph& g = view.post();

  std::vector<FrontierEdge> structural;
  for (const auto& u : view.applied()) {
    structural.push_back({u.src, u.dst,
                          u.op == EdgeOp::Insert ? EdgeKind::StructInsert : EdgeKind::StructDelete});
  }
  const std::vector<VertexId> degree_changed =
      flags.src_degree_dependent ? view.out_degree_changed() : std::vector<VertexId>{};

  ComputationGraph cg;
  cg.flags = flags;
  cg.layers.resize(num_layers);
  std::vector<VertexId> input_changed;  // vertices whose layer input differs

  for (std::size_t l = 0; l < num_layers; ++l) {
    LayerFrontier& f = cg.layers[l];
    f.e_curr = structural;
    for (VertexId u : set_union(input_changed, degree_changed)) {
      for (VertexId w : g.out_neighbors(u)) {
        if (!view.inserted(u, w)) f.e_curr.push_back({u, w, EdgeKind::ValueChange});
      }
    }
    std::sort(f.e_curr.begin(), f.e_curr.end(), by_dst);
    f.e_curr.erase(std::unique(f.e_curr.begin(), f.e_curr.end(),
                               [](const FrontierEdge& a, const FrontierEdge& b) {
                                 return a.src == b.src && a.dst == b.dst;
                               }),
                   f.e_curr.end());

    std::vector<VertexId> curr_dst;
    for (const auto& e : f.e_curr) {
      if (curr_dst.empty() || curr_dst.back() != e.dst) curr_dst.push_back(e.dst);
    }

    if (flags.dest_dependent) {
      for (VertexId v : input_changed) {
        if (g.in_degree(v) > 0 || std::binary_search(curr_dst.begin(), curr_dst.end(), v)) {
          f.recompute.push_back(v);
          for (VertexId u : g.in_neighbors(v)) f.e_recomp.emplace_back(u, v);
        }
      }
      std::sort(f.e_recomp.begin(), f.e_recomp.end(),
                [](const Edge& a, const Edge& b) {
                  return a.second != b.second ? a.second < b.second : a.first < b.first;
                });
    }

    f.v_dst = set_union(curr_dst, f.recompute);
    f.changed = flags.update_uses_self ? set_union(f.v_dst, input_changed) : f.v_dst;
    input_changed = f.changed;
  }
  return cg;
}

SubgraphSize affected_subgraph_size(const ComputationGraph& cg) {
  std::vector<Edge> edges;
  for (const auto& f : cg.layers) {
    for (const auto& e : f.e_curr) edges.emplace_back(e.src, e.dst);
    edges.insert(edges.end(), f.e_recomp.begin(), f.e_recomp.end());
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<VertexId> vertices;
  vertices.reserve(edges.size() * 2);
  for (const auto& [s, d] : edges) {
    vertices.push_back(s);
    vertices.push_back(d);
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  return {edges.size(), vertices.size()};
}

std::vector<VertexId> all_changed(const ComputationGraph& cg) {
  std::vector<VertexId> out;
  for (const auto& f : cg.layers) out = set_union(out, f.changed);
  return out;
}

void dump_frontier(std::ostream& os, const ComputationGraph& cg) {
  for (std::size_t l = 0; l < cg.layers.size(); ++l) {
    const auto& f = cg.layers[l];
    os << (l + 1) << ',' << f.e_curr.size() << ',' << f.e_recomp.size() << ',' << f.v_dst.size()
       << '\n';
  }
}

}  // namespace incrt
