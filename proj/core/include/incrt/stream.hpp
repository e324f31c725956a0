// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "incrt/graph_store.hpp"

namespace incrt {

struct StreamPlan {
  std::vector<Edge> base;
  std::vector<std::vector<EdgeUpdate>> batches;
};

struct SplitOptions {
  double holdout_fraction = 0.1;
  std::size_t batch_count = 10;
  /// Share of each batch turned into deletions of edges live at that point.
  double deletion_share = 0.0;
  std::uint64_t seed = 0;
};

/// The latest `holdout_fraction` of edges (by timestamp, ties by position)
/// become `batch_count` insert batches; the rest is the base snapshot.
/// With a deletion share, each batch keeps round(k * (1 - share)) of its k
/// holdout inserts and fills the other slots with deletions; the unused
/// holdout edges are dropped from the plan.
StreamPlan split_stream(std::span<const EdgeUpdate> edges, const SplitOptions& options);

/// Batches of random inserts and deletes that are valid when applied in
/// order on top of `base`. No edge is touched twice within one batch.
std::vector<std::vector<EdgeUpdate>> random_mixed_batches(std::span<const Edge> base,
                                                          std::size_t vertex_count,
                                                          std::size_t batch_count,
                                                          std::size_t batch_size,
                                                          double delete_fraction,
                                                          std::uint64_t seed);

}  // namespace incrt
