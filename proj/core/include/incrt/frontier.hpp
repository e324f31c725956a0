// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "incrt/graph_store.hpp"
#include "incrt/operator.hpp"

namespace incrt {

/// The post-update graph together with what the last apply_batch() did to
/// it. Pre-update degrees and edge membership are answered from the applied
/// events, so no copy of the old graph is kept.
class UpdateView {
 public:
  UpdateView(const DynamicGraph& post, const ApplyResult& result);

  const DynamicGraph& post() const noexcept { return *post_; }
  std::span<const EdgeUpdate> applied() const noexcept { return applied_; }
  std::span<const DegreeDelta> deltas() const noexcept { return deltas_; }

  std::size_t in_degree_pre(VertexId v) const;
  std::size_t out_degree_pre(VertexId v) const;
  std::size_t in_degree_post(VertexId v) const { return post_->in_degree(v); }
  std::size_t out_degree_post(VertexId v) const { return post_->out_degree(v); }

  bool inserted(VertexId src, VertexId dst) const;
  bool deleted(VertexId src, VertexId dst) const;
  bool existed_pre(VertexId src, VertexId dst) const;

  /// Vertices whose out-degree differs between the two graphs, ascending.
  std::vector<VertexId> out_degree_changed() const;

 private:
  const DegreeDelta* find(VertexId v) const;

  const DynamicGraph* post_;
  std::vector<EdgeUpdate> applied_;
  std::vector<DegreeDelta> deltas_;
  std::vector<Edge> inserted_;
  std::vector<Edge> deleted_;
};

enum class EdgeKind : std::uint8_t { StructInsert, StructDelete, ValueChange };

struct FrontierEdge {
  VertexId src = 0;
  VertexId dst = 0;
  EdgeKind kind = EdgeKind::ValueChange;

  friend bool operator==(const FrontierEdge&, const FrontierEdge&) = default;
};

/// Work for one layer. All lists are sorted by destination, then source.
struct LayerFrontier {
  std::vector<FrontierEdge> e_curr;
  std::vector<Edge> e_recomp;
  std::vector<VertexId> v_dst;
  /// Destinations handled by full-neighbourhood recompute; their e_curr
  /// entries are ignored by the incremental path.
  std::vector<VertexId> recompute;
  /// Vertices whose output of this layer may differ from the pre-update one.
  std::vector<VertexId> changed;
};

struct ComputationGraph {
  BundleFlags flags;
  std::vector<LayerFrontier> layers;

  std::size_t num_layers() const noexcept { return layers.size(); }
  bool empty() const noexcept;
};

/// Level-synchronous expansion from the applied updates.
///
/// For layer l, the structural updates are always present. Sources whose
/// layer input changed contribute every surviving out-edge as ValueChange;
/// with src_degree_dependent, so do sources whose out-degree changed. With
/// dest_dependent, a destination whose own layer input changed is moved to
/// the recompute set and all its in-edges go to e_recomp. With
/// update_uses_self, a changed input carries over to the layer output.
ComputationGraph build_computation_graph(const UpdateView& view, std::size_t num_layers,
                                         BundleFlags flags);

struct SubgraphSize {
  std::size_t edges = 0;
  std::size_t vertices = 0;

  friend bool operator==(const SubgraphSize&, const SubgraphSize&) = default;
};

/// Distinct (src, dst) pairs over e_curr and e_recomp of every layer, and
/// the distinct endpoints of those pairs.
SubgraphSize affected_subgraph_size(const ComputationGraph& cg);

/// Union of every layer's changed set, ascending.
std::vector<VertexId> all_changed(const ComputationGraph& cg);

/// One line per layer, 1-based: `layer,|e_curr|,|e_recomp|,|v_dst|`.
void dump_frontier(std::ostream& os, const ComputationGraph& cg);

}  // namespace incrt
