// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "incrt/generators.hpp"
#include "test_util.hpp"

namespace incrt {
namespace {

using gen::GraphKind;

TEST(ErdosRenyi, ZeroProbabilityHasNoEdges) {
  EXPECT_TRUE(gen::erdos_renyi(10, 0.0, 1).empty());
}

TEST(ErdosRenyi, FullProbabilityIsComplete) {
  EXPECT_EQ(gen::erdos_renyi(12, 1.0, 1).size(), 12u * 11u);
}

TEST(ErdosRenyi, SeededDeterminism) {
  EXPECT_EQ(gen::erdos_renyi_avg_degree(1000, 8, 7), gen::erdos_renyi_avg_degree(1000, 8, 7));
  EXPECT_NE(gen::erdos_renyi_avg_degree(1000, 8, 7), gen::erdos_renyi_avg_degree(1000, 8, 8));
}

TEST(ErdosRenyi, SimpleGraphNearExpectedSize) {
  const auto ev = gen::erdos_renyi_avg_degree(2000, 8, 3);
  std::set<Edge> seen;
  std::set<std::uint64_t> ts;
  for (const auto& e : ev) {
    EXPECT_NE(e.src, e.dst);
    EXPECT_EQ(e.op, EdgeOp::Insert);
    EXPECT_TRUE(seen.insert({e.src, e.dst}).second);
    ts.insert(e.ts);
  }
  EXPECT_EQ(ts.size(), ev.size());
  // Expected 16000 edges; the binomial standard deviation is about 126.
  EXPECT_NEAR(static_cast<double>(ev.size()), 16000.0, 800.0);
}

TEST(ErdosRenyi, InvalidArguments) {
  EXPECT_THROW(gen::erdos_renyi(1, 0.5, 1), Error);
  EXPECT_THROW(gen::erdos_renyi(10, 1.5, 1), Error);
  EXPECT_THROW(gen::erdos_renyi(10, -0.1, 1), Error);
}

TEST(BarabasiAlbert, EdgeCountAndSeeding) {
  const auto ev = gen::barabasi_albert(500, 3, 9);
  // Bidirected 4-clique, then three edges per later vertex.
  EXPECT_EQ(ev.size(), 12u + 3u * (500u - 4u));
  EXPECT_EQ(ev, gen::barabasi_albert(500, 3, 9));
  std::set<Edge> seen;
  for (const auto& e : ev) EXPECT_TRUE(seen.insert({e.src, e.dst}).second);
}

TEST(BarabasiAlbert, HeavyTailedInDegree) {
  constexpr std::size_t n = 10000;
  const DynamicGraph g = testing::make_graph(n, gen::to_edges(gen::barabasi_albert(n, 8, 1)));
  std::vector<std::size_t> deg(n);
  for (VertexId v = 0; v < n; ++v) deg[v] = g.in_degree(v);
  std::sort(deg.rbegin(), deg.rend());
  std::size_t top = 0;
  for (std::size_t i = 0; i < n / 100; ++i) top += deg[i];
  const double share = static_cast<double>(top) / static_cast<double>(g.edge_count());
  EXPECT_GT(share, 0.01 * 3);
}

TEST(BarabasiAlbert, InvalidArguments) {
  EXPECT_THROW(gen::barabasi_albert(5, 0, 1), Error);
  EXPECT_THROW(gen::barabasi_albert(5, 5, 1), Error);
}

TEST(GraphKindTest, Parse) {
  EXPECT_EQ(gen::parse_graph_kind("er"), GraphKind::ErdosRenyi);
  EXPECT_EQ(gen::parse_graph_kind("barabasi_albert"), GraphKind::BarabasiAlbert);
  EXPECT_THROW(gen::parse_graph_kind("grid"), Error);
  EXPECT_EQ(gen::generate_graph(GraphKind::BarabasiAlbert, 100, 2, 4),
            gen::barabasi_albert(100, 2, 4));
}

}  // namespace
}  // namespace incrt
