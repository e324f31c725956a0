// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "incrt/graph_store.hpp"

namespace incrt::gen {

enum class GraphKind { ErdosRenyi, BarabasiAlbert };

/// Accepts "er", "erdos_renyi", "ba", "barabasi_albert".
GraphKind parse_graph_kind(std::string_view text);

/// Directed G(n, p) without self-loops, sampled by geometric skipping over
/// the n(n-1) ordered pairs. Timestamps are a seeded permutation of
/// 0..|E|-1, so a later split by timestamp picks a uniform subset.
std::vector<EdgeUpdate> erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// G(n, p) with p = avg_degree / (n - 1).
std::vector<EdgeUpdate> erdos_renyi_avg_degree(std::size_t n, double avg_degree,
                                               std::uint64_t seed);

/// Preferential attachment. Vertices 0..m form a bidirected clique; every
/// later vertex adds m edges towards distinct earlier vertices drawn with
/// probability proportional to their current degree. Timestamps follow
/// creation order.
std::vector<EdgeUpdate> barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);

/// `param` is p for ErdosRenyi and m for BarabasiAlbert.
std::vector<EdgeUpdate> generate_graph(GraphKind kind, std::size_t n, double param,
                                       std::uint64_t seed);

std::vector<Edge> to_edges(const std::vector<EdgeUpdate>& stream);

}  // namespace incrt::gen
