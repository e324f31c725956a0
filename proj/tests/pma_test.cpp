// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "incrt/error.hpp"
#include "incrt/pma.hpp"

namespace incrt {
namespace {

std::vector<VertexId> collect(const AdjacencyPma& pma, VertexId v) {
  std::vector<VertexId> out;
  for (VertexId u : pma.neighbors(v)) out.push_back(u);
  return out;
}

TEST(Pma, EmptyHasNoNeighbours) {
  AdjacencyPma pma(5);
  EXPECT_EQ(pma.size(), 0u);
  for (VertexId v = 0; v < 5; ++v) EXPECT_TRUE(collect(pma, v).empty());
  EXPECT_EQ(pma.check_invariants(), "");
}

TEST(Pma, InsertEraseContains) {
  AdjacencyPma pma(4);
  EXPECT_TRUE(pma.insert(2, 3));
  EXPECT_TRUE(pma.insert(2, 0));
  EXPECT_FALSE(pma.insert(2, 3));
  EXPECT_TRUE(pma.contains(2, 3));
  EXPECT_FALSE(pma.contains(3, 2));
  EXPECT_EQ(collect(pma, 2), (std::vector<VertexId>{0, 3}));
  EXPECT_TRUE(pma.erase(2, 3));
  EXPECT_FALSE(pma.erase(2, 3));
  EXPECT_EQ(collect(pma, 2), (std::vector<VertexId>{0}));
  EXPECT_EQ(pma.size(), 1u);
}

TEST(Pma, OutOfRangeVertex) {
  AdjacencyPma pma(3);
  try {
    pma.insert(3, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidVertex);
  }
}

TEST(Pma, BadConfigRejected) {
  EXPECT_THROW(AdjacencyPma(4, PmaConfig{6, 0.25, 0.875}), Error);
  EXPECT_THROW(AdjacencyPma(4, PmaConfig{64, 0.9, 0.5}), Error);
}

TEST(Pma, BuildMatchesSortedInput) {
  std::vector<std::pair<VertexId, VertexId>> pairs{{1, 4}, {0, 2}, {1, 0}, {3, 3}, {1, 2}};
  AdjacencyPma pma(5);
  pma.build(pairs);
  EXPECT_EQ(collect(pma, 1), (std::vector<VertexId>{0, 2, 4}));
  EXPECT_EQ(collect(pma, 3), (std::vector<VertexId>{3}));
  EXPECT_EQ(pma.size(), 5u);
  EXPECT_EQ(pma.check_invariants(), "");
}

// Random insert/erase churn against a std::set oracle, with a small segment
// size so that rebalancing and resizing run often.
TEST(Pma, RandomChurnMatchesSetOracle) {
  constexpr std::size_t n = 60;
  AdjacencyPma pma(n, PmaConfig{8, 0.25, 0.875});
  std::vector<std::set<VertexId>> oracle(n);
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<VertexId> pick(0, n - 1);
  for (int step = 0; step < 6000; ++step) {
    const VertexId v = pick(rng), u = pick(rng);
    const bool do_insert = step < 3000 ? (rng() % 4 != 0) : (rng() % 3 == 0);
    if (do_insert) {
      EXPECT_EQ(pma.insert(v, u), oracle[v].insert(u).second);
    } else {
      EXPECT_EQ(pma.erase(v, u), oracle[v].erase(u) == 1);
    }
    if (step % 500 == 0) {
      ASSERT_EQ(pma.check_invariants(), "") << "step " << step;
    }
  }
  ASSERT_EQ(pma.check_invariants(), "");
  std::size_t total = 0;
  for (VertexId v = 0; v < n; ++v) {
    EXPECT_EQ(collect(pma, v), std::vector<VertexId>(oracle[v].begin(), oracle[v].end()));
    total += oracle[v].size();
  }
  EXPECT_EQ(pma.size(), total);
  EXPECT_GT(pma.density(), 0.0);
  EXPECT_LE(pma.density(), 1.0);
}

TEST(Pma, DrainToEmpty) {
  AdjacencyPma pma(10, PmaConfig{8, 0.25, 0.875});
  for (VertexId v = 0; v < 10; ++v)
    for (VertexId u = 0; u < 10; ++u) pma.insert(v, u);
  for (VertexId v = 0; v < 10; ++v)
    for (VertexId u = 0; u < 10; ++u) EXPECT_TRUE(pma.erase(v, u));
  EXPECT_EQ(pma.size(), 0u);
  EXPECT_EQ(pma.check_invariants(), "");
}

}  // namespace
}  // namespace incrt
