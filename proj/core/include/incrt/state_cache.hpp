// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "incrt/dense.hpp"
#include "incrt/graph_store.hpp"
#include "incrt/operator.hpp"

namespace incrt {

/// Pre-batch value of a vertex at one layer, captured before overwrite.
template <typename T>
struct OldState {
  std::span<const T> h;
  T ctx{};
  std::size_t degree = 0;
};

/// Persistent per-layer aggregation state.
///
/// Only a^l and nct^l are kept (L * |V| rows each). Layer outputs h^l are
/// recomputed from the features through update() on request and memoised
/// until the next commit(); writing a^l for a vertex drops its memoised
/// outputs for layers above l.
///
/// Layer indices: aggregation state lives at layers 0..L-1; embeddings are
/// addressed 0..L, where h^0 are the input features and h^{l+1} is produced
/// from a^l.
///
/// Not thread-safe for writers. During a layer, readers may call the const
/// accessors concurrently as long as nothing is written or materialised.
template <typename T>
class StateCache {
 public:
  StateCache(const OperatorBundle<T>& bundle, Matrix<T> features);

  /// Full forward pass over `graph`, overwriting all state.
  void bootstrap(const DynamicGraph& graph, std::size_t threads = 1);

  const OperatorBundle<T>& bundle() const noexcept { return *bundle_; }
  const Matrix<T>& features() const noexcept { return features_; }
  std::size_t num_layers() const noexcept { return agg_.size(); }
  std::size_t vertex_count() const noexcept { return features_.rows(); }

  bool present(std::size_t layer, VertexId v) const;
  std::span<const T> agg(std::size_t layer, VertexId v) const;
  T ctx(std::size_t layer, VertexId v) const;
  void write(std::size_t layer, VertexId v, std::span<const T> agg, T ctx);

  /// h^layer_v, computed on demand and memoised.
  std::span<const T> materialize_h(std::size_t layer, VertexId v);
  /// Memo lookup only; throws StaleState when h^layer_v was not materialised.
  std::span<const T> cached_h(std::size_t layer, VertexId v) const;
  /// h^layer for every vertex.
  Matrix<T> materialize_layer(std::size_t layer);

  /// Opens the delta log for a batch.
  void begin_batch();
  /// Captures the current h^layer_v (and the context that produced it).
  /// Only the first call per (layer, v) in a batch has any effect.
  void log_old(std::size_t layer, VertexId v, std::size_t degree_old);
  bool logged(std::size_t layer, VertexId v) const;
  /// Logged value, or the current state when the vertex was not logged.
  OldState<T> read_old(std::size_t layer, VertexId v);
  /// Closes the delta log and drops memoised outputs.
  void commit();
  bool in_batch() const noexcept { return open_; }

  std::size_t stored_agg_rows() const;
  std::size_t stored_contexts() const;
  std::size_t memo_rows() const;

  /// Writes agg_<l>.nrtf and ctx.nrtf plus a cache.json sidecar into `dir`.
  void save(const std::filesystem::path& dir) const;
  /// Reads a checkpoint written by save(); shapes must match this cache.
  void load(const std::filesystem::path& dir);

 private:
  struct LogEntry {
    Vec<T> h;
    T ctx{};
    std::size_t degree = 0;
  };

  void check(std::size_t layer, VertexId v) const;
  void drop_memo_above(std::size_t layer, VertexId v);

  const OperatorBundle<T>* bundle_;
  Matrix<T> features_;
  std::vector<Matrix<T>> agg_;
  std::vector<Vec<T>> ctx_;
  std::vector<std::vector<bool>> present_;
  std::vector<std::unordered_map<VertexId, Vec<T>>> memo_;  // index 1..L
  std::vector<std::unordered_map<VertexId, LogEntry>> log_;  // index 0..L
  bool open_ = false;
};

}  // namespace incrt
