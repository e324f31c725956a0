// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "incrt/stream.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "incrt/error.hpp"

namespace incrt {

namespace {

std::uint64_t key(const Edge& e) { return (std::uint64_t(e.first) << 32) | e.second; }

// Live edge set with O(1) uniform removal.
class EdgePool {
 public:
  explicit EdgePool(std::span<const Edge> edges) {
    for (const auto& e : edges) add(e);
  }

  bool contains(const Edge& e) const { return index_.count(key(e)) > 0; }
  std::size_t size() const { return edges_.size(); }
  const Edge& at(std::size_t i) const { return edges_[i]; }

  void add(const Edge& e) {
    if (contains(e)) return;
    index_.emplace(key(e), edges_.size());
    edges_.push_back(e);
  }

  void remove(const Edge& e) {
    auto it = index_.find(key(e));
    if (it == index_.end()) return;
    const std::size_t i = it->second;
    index_.erase(it);
    if (i + 1 != edges_.size()) {
      edges_[i] = edges_.back();
      index_[key(edges_[i])] = i;
    }
    edges_.pop_back();
  }

 private:
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

}  // namespace

StreamPlan split_stream(std::span<const EdgeUpdate> edges, const SplitOptions& options) {
  if (!(options.holdout_fraction > 0.0 && options.holdout_fraction <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "holdout fraction must be in (0, 1]");
  }
  if (!(options.deletion_share >= 0.0 && options.deletion_share <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "deletion share must be in [0, 1]");
  }
  if (options.batch_count == 0) throw Error(ErrorCode::ConfigError, "batch count must be positive");
  for (const auto& e : edges) {
    if (e.op != EdgeOp::Insert) throw Error(ErrorCode::ConfigError, "stream must contain inserts only");
  }

  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return edges[a].ts < edges[b].ts; });

  const auto holdout = static_cast<std::size_t>(
      std::llround(options.holdout_fraction * static_cast<double>(edges.size())));
  if (holdout < options.batch_count) {
    throw Error(ErrorCode::ConfigError, "too few edges: holdout of " + std::to_string(holdout) +
                                            " cannot fill " +
                                            std::to_string(options.batch_count) + " batches");
  }
  const std::size_t base_count = edges.size() - holdout;

  StreamPlan plan;
  for (std::size_t i = 0; i < base_count; ++i) {
    const auto& e = edges[order[i]];
    plan.base.emplace_back(e.src, e.dst);
  }

  EdgePool live(plan.base);
  std::mt19937_64 rng(options.seed);
  const std::size_t per = holdout / options.batch_count;
  const std::size_t extra = holdout % options.batch_count;
  std::size_t cursor = base_count;
  for (std::size_t b = 0; b < options.batch_count; ++b) {
    const std::size_t k = per + (b < extra ? 1 : 0);
    const auto deletes = static_cast<std::size_t>(
        std::llround(options.deletion_share * static_cast<double>(k)));
    std::vector<EdgeUpdate> batch;
    std::uint64_t ts = 0;
    std::unordered_set<std::uint64_t> touched;
    for (std::size_t i = 0; i < k - deletes; ++i) {
      const auto& e = edges[order[cursor + i]];
      batch.push_back(e);
      ts = std::max(ts, e.ts);
      touched.insert(key({e.src, e.dst}));
    }
    for (std::size_t i = k - deletes; i < k; ++i) ts = std::max(ts, edges[order[cursor + i]].ts);
    cursor += k;

    std::vector<Edge> removed;
    for (std::size_t d = 0; d < deletes && live.size() > removed.size(); ++d) {
      for (int attempt = 0; attempt < 64; ++attempt) {
        std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
        const Edge e = live.at(pick(rng));
        if (touched.insert(key(e)).second) {
          batch.push_back({EdgeOp::Delete, e.first, e.second, ts});
          removed.push_back(e);
          break;
        }
      }
    }
    for (const auto& e : removed) live.remove(e);
    for (const auto& e : batch) {
      if (e.op == EdgeOp::Insert) live.add({e.src, e.dst});
    }
    plan.batches.push_back(std::move(batch));
  }
  return plan;
}

std::vector<std::vector<EdgeUpdate>> random_mixed_batches(std::span<const Edge> base,
                                                          std::size_t vertex_count,
                                                          std::size_t batch_count,
                                                          std::size_t batch_size,
                                                          double delete_fraction,
                                                          std::uint64_t seed) {
  if (vertex_count < 2) throw Error(ErrorCode::ConfigError, "need at least 2 vertices");
  if (!(delete_fraction >= 0.0 && delete_fraction <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "delete fraction must be in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<VertexId> vertex(0, static_cast<VertexId>(vertex_count - 1));
  EdgePool live(base);
  std::uint64_t ts = 0;
  std::vector<std::vector<EdgeUpdate>> out;
  for (std::size_t b = 0; b < batch_count; ++b) {
    std::vector<EdgeUpdate> batch;
    std::unordered_set<std::uint64_t> touched;
    std::vector<Edge> removed, added;
    while (batch.size() < batch_size) {
      if (coin(rng) < delete_fraction && live.size() > removed.size()) {
        std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
        const Edge e = live.at(pick(rng));
        if (!touched.insert(key(e)).second) continue;
        batch.push_back({EdgeOp::Delete, e.first, e.second, ts++});
        removed.push_back(e);
      } else {
        const Edge e{vertex(rng), vertex(rng)};
        if (e.first == e.second || live.contains(e)) continue;
        if (!touched.insert(key(e)).second) continue;
        batch.push_back({EdgeOp::Insert, e.first, e.second, ts++});
        added.push_back(e);
      }
    }
    for (const auto& e : removed) live.remove(e);
    for (const auto& e : added) live.add(e);
    out.push_back(std::move(batch));
  }
  return out;
}

}  // namespace incrt
