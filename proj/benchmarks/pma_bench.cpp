// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>
#include <set>

#include "incrt/graph_store.hpp"

namespace {

using incrt::AdjacencyPma;
using incrt::VertexId;

void BM_PmaRandomInsert(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  std::vector<std::pair<VertexId, VertexId>> keys(8 * n);
  for (auto& k : keys) k = {pick(rng), pick(rng)};
  for (auto _ : state) {
    AdjacencyPma pma(n);
    for (const auto& [v, u] : keys) pma.insert(v, u);
    benchmark::DoNotOptimize(pma.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(keys.size()));
}
BENCHMARK(BM_PmaRandomInsert)->Arg(1 << 10)->Arg(1 << 14);

// Baseline: the same workload on a vector of ordered sets.
void BM_SetRandomInsert(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  std::vector<std::pair<VertexId, VertexId>> keys(8 * n);
  for (auto& k : keys) k = {pick(rng), pick(rng)};
  for (auto _ : state) {
    std::vector<std::set<VertexId>> adj(n);
    for (const auto& [v, u] : keys) adj[v].insert(u);
    benchmark::DoNotOptimize(adj.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(keys.size()));
}
BENCHMARK(BM_SetRandomInsert)->Arg(1 << 10)->Arg(1 << 14);

void BM_PmaNeighbourScan(benchmark::State& state) {
  const std::size_t n = 1 << 14;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<VertexId> pick(0, n - 1);
  AdjacencyPma pma(n);
  for (std::size_t i = 0; i < 8 * n; ++i) pma.insert(pick(rng), pick(rng));
  for (auto _ : state) {
    std::uint64_t sum = 0;
    for (VertexId v = 0; v < n; ++v)
      for (VertexId u : pma.neighbors(v)) sum += u;
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pma.size()));
}
BENCHMARK(BM_PmaNeighbourScan);

}  // namespace
