// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "incrt/frontier.hpp"
#include "incrt/state_cache.hpp"

namespace incrt {

enum class Mode { Full, Incremental, Uer, FnKhop, Ns, Odec };

std::string_view mode_name(Mode mode);
/// Accepts full, inc, uer, fn, ns, odec (case-insensitive).
Mode parse_mode(std::string_view text);

struct LayerMetrics {
  std::size_t edge_accesses = 0;
  std::size_t vertex_accesses = 0;
};

/// Access counters of one run. An edge access is one (edge, layer) visit by
/// the compute path; a vertex access is one destination computed at a layer.
struct Metrics {
  std::vector<LayerMetrics> layers;
  std::size_t as_edges = 0;
  std::size_t as_vertices = 0;
  double wall_ms = 0.0;

  std::size_t edge_accesses() const;
  std::size_t vertex_accesses() const;
};

template <typename T>
struct RunResult {
  /// Vertices whose final-layer embedding may have changed.
  std::vector<VertexId> changed_final;
  Metrics metrics;
  std::optional<double> max_dev;
  /// Final-layer embeddings produced directly by the run (FN, NS and ODEC);
  /// row i belongs to vertices[i].
  std::vector<VertexId> vertices;
  Matrix<T> embeddings;
};

struct EngineOptions {
  std::size_t threads = 1;
  /// When set (sized to the vertex count), each run adds the edge accesses
  /// it spends on a destination to that destination's slot.
  std::vector<std::size_t>* per_destination = nullptr;
};

/// Recomputes every vertex at every layer and re-bootstraps the cache.
template <typename T>
RunResult<T> run_full(const DynamicGraph& graph, StateCache<T>& cache, EngineOptions options = {});

/// Reordered incremental update of every destination in the computation
/// graph. The cache must describe the pre-update graph; on return it
/// describes the post-update graph.
template <typename T>
RunResult<T> run_incremental(const UpdateView& view, const ComputationGraph& cg,
                             StateCache<T>& cache, EngineOptions options = {});

/// Recomputes every destination of the computation graph from its full
/// post-update in-neighbourhood, reading unaffected inputs from the cache.
template <typename T>
RunResult<T> run_uer(const UpdateView& view, const ComputationGraph& cg, StateCache<T>& cache,
                     EngineOptions options = {});

/// Recomputes the final-layer affected vertices from the input features over
/// their complete L-hop in-neighbourhoods. No cached state is read or written.
template <typename T>
RunResult<T> run_fn_khop(const UpdateView& view, const ComputationGraph& cg,
                         const OperatorBundle<T>& bundle, const Matrix<T>& features,
                         EngineOptions options = {});

/// Same scope as run_fn_khop, but each vertex draws at most `fanout`
/// in-neighbours per hop, without replacement, seeded per (seed, layer, v).
template <typename T>
RunResult<T> run_ns(const UpdateView& view, const ComputationGraph& cg,
                    const OperatorBundle<T>& bundle, const Matrix<T>& features,
                    std::size_t fanout, std::uint64_t seed, EngineOptions options = {});

/// Fresh final-layer embeddings for `query` only. Work is limited to the
/// computation graph restricted to the queries' L-hop in-neighbourhood. The
/// cache is read but left untouched.
template <typename T>
RunResult<T> run_odec(std::span<const VertexId> query, const UpdateView& view,
                      const ComputationGraph& cg, StateCache<T>& cache,
                      EngineOptions options = {});

/// The neighbours NS visits for `v` at `layer`, ascending.
std::vector<VertexId> sample_in_neighbors(const DynamicGraph& graph, VertexId v,
                                          std::size_t layer, std::size_t fanout,
                                          std::uint64_t seed);

/// Largest element-wise deviation between the cache's final layer and `ref`.
template <typename T>
double max_deviation(StateCache<T>& cache, const Matrix<T>& ref);

/// Largest deviation of `result.embeddings` from the matching rows of `ref`.
template <typename T>
double max_deviation(const RunResult<T>& result, const Matrix<T>& ref);

}  // namespace incrt
