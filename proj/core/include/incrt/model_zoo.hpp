// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "incrt/dense.hpp"
#include "incrt/graph_store.hpp"
#include "incrt/operator.hpp"

namespace incrt {

enum class ModelId { GCN, GraphSAGE, PinSAGE, GIN, MoNet, CommNet, GAT, GGCN, AGNN };

inline constexpr ModelId kAllModels[] = {ModelId::GCN,   ModelId::GraphSAGE, ModelId::PinSAGE,
                                         ModelId::GIN,   ModelId::MoNet,     ModelId::CommNet,
                                         ModelId::GAT,   ModelId::GGCN,      ModelId::AGNN};

std::string_view model_name(ModelId id);

/// Case-insensitive; "a-gnn" and "g-gcn" are accepted as aliases.
ModelId parse_model(std::string_view name);

/// How GCN counts degrees. Raw uses d_u = out-degree and d_v = in-degree;
/// SelfLoop adds one to each.
enum class GcnDegree { Raw, SelfLoop };

/// Weights for one layer. Everything is held in double and narrowed when a
/// bundle is instantiated at a lower precision.
struct LayerWeights {
  std::size_t in = 0;
  std::size_t out = 0;
  Matrix<double> W;
  std::vector<double> a;
  std::map<std::string, double> scalars;
  std::map<std::string, Matrix<double>> extra;
};

struct ModelWeights {
  ModelId model = ModelId::GCN;
  std::vector<LayerWeights> layers;
};

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for every parameter the
/// model needs; `dims` lists layer widths, so dims.size() - 1 layers.
ModelWeights random_weights(ModelId model, const std::vector<std::size_t>& dims,
                            std::uint64_t seed);

/// Throws ShapeError when a parameter is missing or has the wrong shape, or
/// when layer dims do not chain.
void validate_weights(const ModelWeights& weights);

ModelWeights load_weights(const std::filesystem::path& path);
void save_weights(const std::filesystem::path& path, const ModelWeights& weights);
ModelWeights parse_weights(std::string_view json_text);
std::string dump_weights(const ModelWeights& weights);

struct BundleOptions {
  GcnDegree gcn_degree = GcnDegree::Raw;
};

template <typename T>
std::unique_ptr<OperatorBundle<T>> make_bundle(const ModelWeights& weights,
                                               BundleOptions options = {});

/// Random weights from `seed`, then make_bundle.
template <typename T>
std::unique_ptr<OperatorBundle<T>> make_bundle(ModelId model, const std::vector<std::size_t>& dims,
                                               std::uint64_t seed, BundleOptions options = {});

/// A sum-and-count bundle whose aggregate takes the arithmetic mean of
/// whatever it is given, including a previous partial result. It is kept as
/// a negative control for check_conditions.
template <typename T>
std::unique_ptr<OperatorBundle<T>> make_raw_mean_bundle(std::size_t dim);

/// Aggregation state of one vertex at one layer.
template <typename T>
struct VertexAggregate {
  Vec<T> agg;
  T ctx{};
};

/// Computes a_v and nct_v for destination `v` at `layer` from scratch over
/// the given in-neighbours (visited in the order given).
///
/// `h` maps a vertex to its layer input embedding; `out_degree` supplies the
/// source degree passed through EdgeMeta. An empty neighbour list yields the
/// zero vector and the empty context.
template <typename T, typename HFn, typename DegFn>
VertexAggregate<T> gather_vertex(const OperatorBundle<T>& bundle, std::size_t layer, VertexId v,
                                 std::span<const VertexId> nbrs, HFn&& h, DegFn&& out_degree) {
  VertexAggregate<T> result{Vec<T>(bundle.agg_dim(layer), T(0)), bundle.empty_context(layer)};
  if (nbrs.empty()) return result;

  const std::size_t k = nbrs.size();
  const std::size_t mdim = bundle.message_dim(layer);
  const std::size_t adim = bundle.agg_dim(layer);
  Vec<T> mlc(k * mdim), payload(k * adim), fnn(bundle.fnn_dim(layer));
  std::vector<Signed<T>> msgs(k), items(k);
  std::span<const T> h_v = h(v);
  for (std::size_t i = 0; i < k; ++i) {
    const VertexId u = nbrs[i];
    std::span<const T> h_u = h(u);
    std::span<T> m{mlc.data() + i * mdim, mdim};
    std::span<T> p{payload.data() + i * adim, adim};
    bundle.ms_local(layer, h_u, h_v, EdgeMeta{out_degree(u), k}, m);
    bundle.f_nn(layer, h_u, fnn);
    combine_payload<T>(m, fnn, p);
    msgs[i] = {1, m};
    items[i] = {1, p};
  }
  result.ctx = bundle.nbr_ctx(layer, bundle.empty_context(layer), msgs);
  bundle.aggregate(layer, result.agg, false, items);
  bundle.ms_cbn(layer, result.ctx, result.agg);
  return result;
}

/// Output of one reference layer over the whole graph.
template <typename T>
struct LayerOutput {
  Matrix<T> agg;
  Vec<T> ctx;
  Matrix<T> h;
};

/// From-scratch layer over every vertex of `graph` (in-neighbours in
/// ascending id order). Used as the equivalence oracle and for bootstrap.
template <typename T>
LayerOutput<T> forward_layer_reference(const OperatorBundle<T>& bundle, const DynamicGraph& graph,
                                       const Matrix<T>& h_prev, std::size_t layer,
                                       std::size_t threads = 1);

/// Every layer's output; element 0 is the input, element l the output of
/// layer l - 1.
template <typename T>
std::vector<Matrix<T>> forward_reference(const OperatorBundle<T>& bundle,
                                         const DynamicGraph& graph, const Matrix<T>& features,
                                         std::size_t threads = 1);

/// Features drawn uniformly from [-1, 1].
template <typename T>
Matrix<T> random_features(std::size_t n, std::size_t dim, std::uint64_t seed);

}  // namespace incrt
