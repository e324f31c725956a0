// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "incrt/pma.hpp"

namespace incrt {

enum class EdgeOp : std::uint8_t { Insert, Delete };

struct EdgeUpdate {
  EdgeOp op = EdgeOp::Insert;
  VertexId src = 0;
  VertexId dst = 0;
  std::uint64_t ts = 0;

  friend bool operator==(const EdgeUpdate&, const EdgeUpdate&) = default;
};

using Edge = std::pair<VertexId, VertexId>;

struct DegreeDelta {
  VertexId vertex = 0;
  std::size_t old_in = 0;
  std::size_t new_in = 0;
  std::size_t old_out = 0;
  std::size_t new_out = 0;

  friend bool operator==(const DegreeDelta&, const DegreeDelta&) = default;
};

struct CoalesceResult {
  std::vector<EdgeUpdate> updates;  // sorted by (src, dst)
  std::size_t dropped = 0;          // events removed by cancellation or collapse
};

/// Net effect per (src, dst) within one batch: an Insert and a Delete of the
/// same edge cancel, repeated identical ops collapse into one. The surviving
/// event keeps the latest timestamp.
CoalesceResult coalesce(std::span<const EdgeUpdate> batch);

/// Flips every op; applying B then inverse(B) restores the edge set.
std::vector<EdgeUpdate> inverse(std::span<const EdgeUpdate> batch);

struct ApplyResult {
  std::vector<EdgeUpdate> applied;
  std::vector<EdgeUpdate> rejected;  // duplicate inserts and deletes of missing edges
  std::vector<DegreeDelta> deltas;   // sorted by vertex
  std::size_t coalesced_away = 0;
};

/// Directed graph over a fixed vertex universe. Out- and in-adjacency live in
/// two packed-memory arrays; degrees are tracked separately. Self-loops are
/// allowed, multi-edges are not.
///
/// apply_batch() needs exclusive access; every const member is safe to call
/// from concurrent readers between batches.
class DynamicGraph {
 public:
  explicit DynamicGraph(std::size_t vertex_count = 0, PmaConfig config = {});

  /// Bulk-loads a snapshot, replacing any existing edges. Duplicates are
  /// dropped; the number dropped is returned.
  std::size_t load(std::span<const Edge> edges);

  ApplyResult apply_batch(std::span<const EdgeUpdate> batch);

  std::size_t vertex_count() const noexcept { return in_degree_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::size_t in_degree(VertexId v) const;
  std::size_t out_degree(VertexId v) const;
  bool has_edge(VertexId src, VertexId dst) const;

  AdjacencyPma::Range in_neighbors(VertexId v) const;
  AdjacencyPma::Range out_neighbors(VertexId v) const;

  /// Every live edge in (src, dst) order.
  std::vector<Edge> edges() const;

  const AdjacencyPma& out_adjacency() const noexcept { return out_; }
  const AdjacencyPma& in_adjacency() const noexcept { return in_; }

 private:
  void check_vertex(VertexId v) const;

  AdjacencyPma out_;
  AdjacencyPma in_;
  std::vector<std::size_t> in_degree_;
  std::vector<std::size_t> out_degree_;
  std::size_t edge_count_ = 0;
};

}  // namespace incrt
