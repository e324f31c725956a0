// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "incrt/state_cache.hpp"

#include <fstream>

#include "incrt/model_zoo.hpp"
#include "incrt/tensor_io.hpp"
#include "json.hpp"

namespace incrt {

template <typename T>
StateCache<T>::StateCache(const OperatorBundle<T>& bundle, Matrix<T> features)
    : bundle_(&bundle), features_(std::move(features)) {
  const std::size_t L = bundle.num_layers();
  if (L == 0) throw Error(ErrorCode::ConfigError, "bundle has no layers");
  dense::require_same_dim(features_.cols(), bundle.input_dim(0), "features");
  const std::size_t n = features_.rows();
  for (std::size_t l = 0; l < L; ++l) {
    agg_.emplace_back(n, bundle.agg_dim(l));
    ctx_.emplace_back(n, bundle.empty_context(l));
    present_.emplace_back(n, false);
  }
  memo_.resize(L + 1);
  log_.resize(L + 1);
}

template <typename T>
void StateCache<T>::bootstrap(const DynamicGraph& graph, std::size_t threads) {
  dense::require_same_dim(graph.vertex_count(), vertex_count(), "bootstrap vertex count");
  for (auto& m : memo_) m.clear();
  Matrix<T> h = features_;
  for (std::size_t l = 0; l < num_layers(); ++l) {
    LayerOutput<T> out = forward_layer_reference(*bundle_, graph, h, l, threads);
    agg_[l] = std::move(out.agg);
    ctx_[l] = std::move(out.ctx);
    present_[l].assign(vertex_count(), true);
    h = std::move(out.h);
  }
}

template <typename T>
void StateCache<T>::check(std::size_t layer, VertexId v) const {
  if (layer >= num_layers()) {
    throw Error(ErrorCode::ConfigError, "layer " + std::to_string(layer) + " out of range");
  }
  if (v >= vertex_count()) {
    throw Error(ErrorCode::InvalidVertex, "vertex " + std::to_string(v) + " out of range");
  }
}

template <typename T>
bool StateCache<T>::present(std::size_t layer, VertexId v) const {
  check(layer, v);
  return present_[layer][v];
}

template <typename T>
std::span<const T> StateCache<T>::agg(std::size_t layer, VertexId v) const {
  check(layer, v);
  if (!present_[layer][v]) {
    throw Error(ErrorCode::StaleState, "no aggregation state for vertex " + std::to_string(v));
  }
  return agg_[layer].row(v);
}

template <typename T>
T StateCache<T>::ctx(std::size_t layer, VertexId v) const {
  check(layer, v);
  if (!present_[layer][v]) {
    throw Error(ErrorCode::StaleState, "no context for vertex " + std::to_string(v));
  }
  return ctx_[layer][v];
}

template <typename T>
void StateCache<T>::drop_memo_above(std::size_t layer, VertexId v) {
  for (std::size_t k = layer + 1; k < memo_.size(); ++k) memo_[k].erase(v);
}

template <typename T>
void StateCache<T>::write(std::size_t layer, VertexId v, std::span<const T> agg, T ctx) {
  check(layer, v);
  dense::require_same_dim(agg.size(), agg_[layer].cols(), "cache write");
  dense::require_finite(agg, "cache write");
  std::copy(agg.begin(), agg.end(), agg_[layer].row(v).begin());
  ctx_[layer][v] = ctx;
  present_[layer][v] = true;
  drop_memo_above(layer, v);
}

template <typename T>
std::span<const T> StateCache<T>::materialize_h(std::size_t layer, VertexId v) {
  if (layer == 0) {
    if (v >= vertex_count()) throw Error(ErrorCode::InvalidVertex, "vertex out of range");
    return features_.row(v);
  }
  auto& memo = memo_.at(layer);
  if (auto it = memo.find(v); it != memo.end()) return it->second;
  std::span<const T> prev = materialize_h(layer - 1, v);
  Vec<T> h(bundle_->output_dim(layer - 1));
  bundle_->update(layer - 1, prev, agg(layer - 1, v), h);
  return memo.emplace(v, std::move(h)).first->second;
}

template <typename T>
std::span<const T> StateCache<T>::cached_h(std::size_t layer, VertexId v) const {
  if (layer == 0) return features_.row(v);
  const auto& memo = memo_.at(layer);
  auto it = memo.find(v);
  if (it == memo.end()) {
    throw Error(ErrorCode::StaleState, "h^" + std::to_string(layer) + " of vertex " +
                                           std::to_string(v) + " not materialised");
  }
  return it->second;
}

template <typename T>
Matrix<T> StateCache<T>::materialize_layer(std::size_t layer) {
  if (layer == 0) return features_;
  Matrix<T> out(vertex_count(), bundle_->output_dim(layer - 1));
  for (VertexId v = 0; v < vertex_count(); ++v) {
    auto h = materialize_h(layer, v);
    std::copy(h.begin(), h.end(), out.row(v).begin());
  }
  return out;
}

template <typename T>
void StateCache<T>::begin_batch() {
  for (auto& log : log_) log.clear();
  open_ = true;
}

template <typename T>
void StateCache<T>::log_old(std::size_t layer, VertexId v, std::size_t degree_old) {
  if (!open_) throw Error(ErrorCode::StaleState, "delta log is closed");
  auto& log = log_.at(layer);
  if (log.count(v)) return;
  std::span<const T> h = materialize_h(layer, v);
  LogEntry e{Vec<T>(h.begin(), h.end()), layer > 0 ? ctx(layer - 1, v) : T(0), degree_old};
  log.emplace(v, std::move(e));
}

template <typename T>
bool StateCache<T>::logged(std::size_t layer, VertexId v) const {
  return open_ && log_.at(layer).count(v) > 0;
}

template <typename T>
OldState<T> StateCache<T>::read_old(std::size_t layer, VertexId v) {
  if (!open_) throw Error(ErrorCode::StaleState, "delta log is closed");
  const auto& log = log_.at(layer);
  if (auto it = log.find(v); it != log.end()) {
    return {it->second.h, it->second.ctx, it->second.degree};
  }
  return {materialize_h(layer, v), layer > 0 ? ctx(layer - 1, v) : T(0), 0};
}

template <typename T>
void StateCache<T>::commit() {
  for (auto& log : log_) log.clear();
  for (auto& m : memo_) m.clear();
  open_ = false;
}

template <typename T>
std::size_t StateCache<T>::stored_agg_rows() const {
  std::size_t rows = 0;
  for (const auto& a : agg_) rows += a.rows();
  return rows;
}

template <typename T>
std::size_t StateCache<T>::stored_contexts() const {
  std::size_t n = 0;
  for (const auto& c : ctx_) n += c.size();
  return n;
}

template <typename T>
std::size_t StateCache<T>::memo_rows() const {
  std::size_t n = 0;
  for (const auto& m : memo_) n += m.size();
  return n;
}

template <typename T>
void StateCache<T>::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  nlohmann::json side;
  side["model"] = std::string(bundle_->name());
  side["layers"] = num_layers();
  side["vertices"] = vertex_count();
  side["precision"] = sizeof(T) == 4 ? "f32" : "f64";
  side["contexts"] = nlohmann::json::array();
  side["present"] = nlohmann::json::array();
  for (std::size_t l = 0; l < num_layers(); ++l) {
    nrtf::save(dir / ("agg_" + std::to_string(l) + ".nrtf"), agg_[l]);
    side["contexts"].push_back(ctx_[l]);
    std::vector<int> bits(present_[l].begin(), present_[l].end());
    side["present"].push_back(bits);
  }
  std::ofstream out(dir / "cache.json");
  if (!out) throw Error(ErrorCode::FormatError, "cannot write checkpoint sidecar");
  out << side.dump() << '\n';
}

template <typename T>
void StateCache<T>::load(const std::filesystem::path& dir) {
  std::ifstream in(dir / "cache.json");
  if (!in) throw Error(ErrorCode::FormatError, "missing checkpoint sidecar in " + dir.string());
  nlohmann::json side;
  try {
    side = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("checkpoint sidecar: ") + e.what());
  }
  if (side.value("layers", std::size_t{0}) != num_layers() ||
      side.value("vertices", std::size_t{0}) != vertex_count() ||
      side.value("model", std::string{}) != bundle_->name()) {
    throw Error(ErrorCode::ShapeError, "checkpoint does not match this cache");
  }
  std::vector<Matrix<T>> agg;
  std::vector<Vec<T>> ctx;
  std::vector<std::vector<bool>> present;
  for (std::size_t l = 0; l < num_layers(); ++l) {
    agg.push_back(nrtf::load<T>(dir / ("agg_" + std::to_string(l) + ".nrtf")));
    if (agg.back().rows() != vertex_count() || agg.back().cols() != agg_[l].cols()) {
      throw Error(ErrorCode::ShapeError, "checkpoint tensor shape mismatch");
    }
    ctx.push_back(side.at("contexts").at(l).get<Vec<T>>());
    auto bits = side.at("present").at(l).get<std::vector<int>>();
    if (ctx.back().size() != vertex_count() || bits.size() != vertex_count()) {
      throw Error(ErrorCode::ShapeError, "checkpoint sidecar length mismatch");
    }
    present.emplace_back(bits.begin(), bits.end());
  }
  agg_ = std::move(agg);
  ctx_ = std::move(ctx);
  present_ = std::move(present);
  for (auto& m : memo_) m.clear();
}

template class StateCache<float>;
template class StateCache<double>;

}  // namespace incrt
