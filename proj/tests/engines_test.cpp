// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "incrt/engines.hpp"
#include "incrt/model_zoo.hpp"
#include "incrt/stream.hpp"
#include "test_util.hpp"

namespace incrt {
namespace {

using V = std::vector<double>;
using Ids = std::vector<VertexId>;

struct Step {
  ApplyResult applied;
  ComputationGraph cg;
};

Step apply(DynamicGraph& g, const std::vector<EdgeUpdate>& batch, const OperatorBundle<double>& b) {
  Step s;
  s.applied = g.apply_batch(batch);
  s.cg = build_computation_graph(UpdateView(g, s.applied), b.num_layers(), b.flags());
  return s;
}

ModelWeights scalar_weights(ModelId id, std::size_t layers) {
  ModelWeights w;
  w.model = id;
  for (std::size_t l = 0; l < layers; ++l) {
    LayerWeights lw;
    lw.in = lw.out = 1;
    lw.W = Matrix<double>::identity(1);
    if (id == ModelId::GIN) lw.extra["W2"] = Matrix<double>::identity(1);
    w.layers.push_back(lw);
  }
  return w;
}

double worst_incremental_deviation(ModelId id, std::size_t threads, std::uint64_t seed) {
  const auto b = make_bundle<double>(id, {8, 8, 4}, seed);
  DynamicGraph g = testing::er_graph(400, 6, seed);
  const Matrix<double> x = random_features<double>(400, 8, seed);
  StateCache<double> cache(*b, x);
  run_full(g, cache, {threads});
  const auto batches = random_mixed_batches(g.edges(), 400, 6, 12, 0.5, seed);
  double worst = 0;
  for (const auto& batch : batches) {
    const Step s = apply(g, batch, *b);
    run_incremental(UpdateView(g, s.applied), s.cg, cache, {threads});
    worst = std::max(worst, max_deviation(cache, forward_reference(*b, g, x).back()));
  }
  return worst;
}

TEST(RunFull, ZeroEdgeGraph) {
  const auto b = make_bundle<double>(ModelId::GCN, {3, 2}, 1);
  const Matrix<double> x = random_features<double>(4, 3, 1);
  StateCache<double> cache(*b, x);
  const DynamicGraph g(4);
  const RunResult<double> r = run_full(g, cache);
  EXPECT_EQ(r.metrics.edge_accesses(), 0u);
  V expect(2);
  const V zero(b->agg_dim(0), 0.0);
  for (VertexId v = 0; v < 4; ++v) {
    b->update(0, x.row(v), zero, expect);
    EXPECT_EQ(V(cache.materialize_h(1, v).begin(), cache.materialize_h(1, v).end()), expect);
  }
}

TEST(RunFull, CountsEveryEdgePerLayer) {
  const auto b = make_bundle<double>(ModelId::GIN, {2, 2, 2}, 1);
  const DynamicGraph g = testing::er_graph(100, 4, 1);
  StateCache<double> cache(*b, random_features<double>(100, 2, 1));
  const RunResult<double> r = run_full(g, cache);
  EXPECT_EQ(r.metrics.edge_accesses(), 2 * g.edge_count());
  EXPECT_EQ(r.metrics.vertex_accesses(), 200u);
}

TEST(RunFull, DeterministicAcrossRuns) {
  const auto b = make_bundle<double>(ModelId::GAT, {6, 6, 3}, 2);
  const DynamicGraph g = testing::er_graph(300, 5, 4);
  const Matrix<double> x = random_features<double>(300, 6, 4);
  StateCache<double> c1(*b, x), c2(*b, x);
  run_full(g, c1, {1});
  run_full(g, c2, {3});
  EXPECT_EQ(c1.materialize_layer(2), c2.materialize_layer(2));
}

// Scalar GIN with identity MLP: h4 moves from 3 to 5 after 5 -> 4 is added,
// so v2's second-layer sum moves from 6 to 8.
TEST(RunIncremental, GinScalarToy) {
  const auto gin = make_bundle<double>(scalar_weights(ModelId::GIN, 2));
  DynamicGraph g = testing::make_graph(6, {{1, 2}, {3, 2}, {4, 2}});
  StateCache<double> cache(*gin, Matrix<double>(6, 1, V{0, 1, 0, 2, 3, 2}));
  run_full(g, cache);
  EXPECT_EQ(cache.agg(1, 2)[0], 6.0);
  const Step s = apply(g, {{EdgeOp::Insert, 5, 4, 0}}, *gin);
  run_incremental(UpdateView(g, s.applied), s.cg, cache);
  EXPECT_EQ(cache.materialize_h(1, 4)[0], 5.0);
  EXPECT_EQ(cache.agg(1, 2)[0], 8.0);
  EXPECT_EQ(cache.materialize_h(2, 2)[0], 14.0);
}

TEST(RunIncremental, SageMeanAfterInsert) {
  ModelWeights w = scalar_weights(ModelId::GraphSAGE, 1);
  const auto sage = make_bundle<double>(w);
  DynamicGraph g = testing::make_graph(5, {{1, 0}, {2, 0}, {3, 0}});
  StateCache<double> cache(*sage, Matrix<double>(5, 1, V{0, 1, 2, 3, 4}));
  run_full(g, cache);
  EXPECT_DOUBLE_EQ(cache.agg(0, 0)[0], 2.0);
  EXPECT_EQ(cache.ctx(0, 0), 3.0);
  const Step s = apply(g, {{EdgeOp::Insert, 4, 0, 0}}, *sage);
  const RunResult<double> r = run_incremental(UpdateView(g, s.applied), s.cg, cache);
  EXPECT_EQ(cache.ctx(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(cache.agg(0, 0)[0], 2.5);
  EXPECT_EQ(r.metrics.edge_accesses(), 1u);
}

TEST(RunIncremental, LastInEdgeDeletedResetsState) {
  const auto b = make_bundle<double>(ModelId::GAT, {3, 3}, 2);
  DynamicGraph g = testing::make_graph(3, {{0, 1}, {2, 1}});
  const Matrix<double> x = random_features<double>(3, 3, 2);
  StateCache<double> cache(*b, x);
  run_full(g, cache);
  const Step s = apply(g, {{EdgeOp::Delete, 0, 1, 0}, {EdgeOp::Delete, 2, 1, 0}}, *b);
  run_incremental(UpdateView(g, s.applied), s.cg, cache);
  EXPECT_EQ(V(cache.agg(0, 1).begin(), cache.agg(0, 1).end()), V(3, 0.0));
  EXPECT_EQ(cache.ctx(0, 1), b->empty_context(0));
}

TEST(RunIncremental, EmptyBatchChangesNothing) {
  const auto b = make_bundle<double>(ModelId::GCN, {4, 4, 2}, 1);
  DynamicGraph g = testing::er_graph(100, 4, 1);
  StateCache<double> cache(*b, random_features<double>(100, 4, 1));
  run_full(g, cache);
  const Matrix<double> before = cache.materialize_layer(2);
  const Step s = apply(g, {}, *b);
  const RunResult<double> r = run_incremental(UpdateView(g, s.applied), s.cg, cache);
  EXPECT_EQ(r.metrics.edge_accesses(), 0u);
  EXPECT_EQ(r.metrics.vertex_accesses(), 0u);
  EXPECT_EQ(cache.materialize_layer(2), before);
}

class EquivalenceTest : public ::testing::TestWithParam<ModelId> {};

TEST_P(EquivalenceTest, IncrementalMatchesFullSerial) {
  EXPECT_LE(worst_incremental_deviation(GetParam(), 1, 3), 1e-10);
}

TEST_P(EquivalenceTest, IncrementalMatchesFullThreaded) {
  EXPECT_LE(worst_incremental_deviation(GetParam(), 3, 4), 1e-10);
}

TEST_P(EquivalenceTest, UerMatchesFull) {
  const auto b = make_bundle<double>(GetParam(), {5, 5, 3}, 9);
  DynamicGraph g = testing::er_graph(200, 5, 9);
  const Matrix<double> x = random_features<double>(200, 5, 9);
  StateCache<double> cache(*b, x);
  run_full(g, cache);
  for (const auto& batch : random_mixed_batches(g.edges(), 200, 4, 10, 0.5, 9)) {
    const Step s = apply(g, batch, *b);
    run_uer(UpdateView(g, s.applied), s.cg, cache);
    EXPECT_LE(max_deviation(cache, forward_reference(*b, g, x).back()), 1e-10);
  }
}

TEST_P(EquivalenceTest, FnKhopMatchesFull) {
  const auto b = make_bundle<double>(GetParam(), {5, 5, 3}, 10);
  DynamicGraph g = testing::er_graph(200, 5, 10);
  const Matrix<double> x = random_features<double>(200, 5, 10);
  for (const auto& batch : random_mixed_batches(g.edges(), 200, 3, 10, 0.5, 10)) {
    const Step s = apply(g, batch, *b);
    const RunResult<double> r = run_fn_khop(UpdateView(g, s.applied), s.cg, *b, x);
    EXPECT_EQ(r.vertices, s.cg.layers.back().changed);
    EXPECT_LE(max_deviation(r, forward_reference(*b, g, x).back()), 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(AllModels, EquivalenceTest, ::testing::ValuesIn(kAllModels),
                         [](const auto& info) { return std::string(model_name(info.param)); });

TEST(RunUer, RecomputesWholeNeighbourhood) {
  const auto b = make_bundle<double>(ModelId::GraphSAGE, {2, 2}, 1);
  DynamicGraph g = testing::make_graph(10, {{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}, {6, 0}});
  StateCache<double> cache(*b, random_features<double>(10, 2, 1));
  run_full(g, cache);
  const Step s = apply(g, {{EdgeOp::Insert, 7, 0, 0}}, *b);
  const RunResult<double> r = run_uer(UpdateView(g, s.applied), s.cg, cache);
  EXPECT_EQ(r.metrics.edge_accesses(), 7u);
}

TEST(AccessCounters, IncrementalAtMostUerAtMostFnOnPowerLaw) {
  const auto b = make_bundle<double>(ModelId::GCN, {4, 4, 4}, 1);
  DynamicGraph g = testing::make_graph(3000, gen::to_edges(gen::barabasi_albert(3000, 4, 2)));
  const Matrix<double> x = random_features<double>(3000, 4, 1);
  StateCache<double> inc(*b, x), uer(*b, x);
  run_full(g, inc);
  run_full(g, uer);
  for (const auto& batch : random_mixed_batches(g.edges(), 3000, 5, 12, 0.3, 2)) {
    const Step s = apply(g, batch, *b);
    const UpdateView view(g, s.applied);
    const auto ri = run_incremental(view, s.cg, inc).metrics.edge_accesses();
    const auto ru = run_uer(view, s.cg, uer).metrics.edge_accesses();
    const auto rf = run_fn_khop(view, s.cg, *b, x).metrics.edge_accesses();
    EXPECT_LE(ri, ru);
    EXPECT_LE(ru, rf);
  }
}

TEST(AccessCounters, AllStructuralSingleLayerRatiosAreOne) {
  const auto b = make_bundle<double>(ModelId::GIN, {3, 3}, 1);
  DynamicGraph g(50);
  const Matrix<double> x = random_features<double>(50, 3, 1);
  StateCache<double> inc(*b, x), uer(*b, x);
  run_full(g, inc);
  run_full(g, uer);
  const auto batch = testing::inserts(gen::to_edges(gen::erdos_renyi_avg_degree(50, 3, 1)));
  const Step s = apply(g, batch, *b);
  const UpdateView view(g, s.applied);
  const auto as = affected_subgraph_size(s.cg).edges;
  EXPECT_EQ(as, g.edge_count());
  EXPECT_EQ(run_incremental(view, s.cg, inc).metrics.edge_accesses(), as);
  EXPECT_EQ(run_uer(view, s.cg, uer).metrics.edge_accesses(), as);
  EXPECT_EQ(run_fn_khop(view, s.cg, *b, x).metrics.edge_accesses(), as);
}

TEST(AccessCounters, PerDestinationSumsToTotal) {
  const auto b = make_bundle<double>(ModelId::GAT, {4, 4, 4}, 1);
  DynamicGraph g = testing::er_graph(300, 5, 3);
  const Matrix<double> x = random_features<double>(300, 4, 1);
  StateCache<double> cache(*b, x);
  run_full(g, cache);
  std::vector<std::size_t> inc(300, 0), fn(300, 0);
  const Step s = apply(g, random_mixed_batches(g.edges(), 300, 1, 10, 0.5, 3)[0], *b);
  const UpdateView view(g, s.applied);
  const auto ri = run_incremental(view, s.cg, cache, {1, &inc});
  const auto rf = run_fn_khop(view, s.cg, *b, x, {1, &fn});
  EXPECT_EQ(std::accumulate(inc.begin(), inc.end(), std::size_t{0}), ri.metrics.edge_accesses());
  EXPECT_EQ(std::accumulate(fn.begin(), fn.end(), std::size_t{0}), rf.metrics.edge_accesses());
}

TEST(SampleInNeighbors, StarWithFanoutOne) {
  DynamicGraph g = testing::make_graph(6, {{1, 0}, {2, 0}, {3, 0}, {4, 0}});
  const Ids s = sample_in_neighbors(g, 0, 0, 1, 7);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_GE(s[0], 1u);
  EXPECT_LE(s[0], 4u);
  EXPECT_EQ(sample_in_neighbors(g, 0, 0, 1, 7), s);
  EXPECT_EQ(sample_in_neighbors(g, 0, 0, 10, 7), (Ids{1, 2, 3, 4}));
  EXPECT_THROW(sample_in_neighbors(g, 0, 0, 0, 7), Error);
}

TEST(SampleInNeighbors, SortedDistinctSubset) {
  const DynamicGraph g = testing::make_graph(2000, gen::to_edges(gen::barabasi_albert(2000, 6, 1)));
  for (VertexId v = 0; v < 50; ++v) {
    const Ids s = sample_in_neighbors(g, v, 1, 5, 99);
    EXPECT_EQ(s.size(), std::min<std::size_t>(5, g.in_degree(v)));
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
    for (VertexId u : s) EXPECT_TRUE(g.has_edge(u, v));
  }
}

TEST(RunNs, StarWithFanoutOneUsesOneNeighbour) {
  const auto b = make_bundle<double>(scalar_weights(ModelId::GIN, 1));
  DynamicGraph g = testing::make_graph(6, {{1, 0}, {2, 0}, {3, 0}});
  const Matrix<double> x(6, 1, V{0, 1, 10, 100, 1000, 0});
  const Step s = apply(g, {{EdgeOp::Insert, 4, 0, 0}}, *b);
  const auto r = run_ns(UpdateView(g, s.applied), s.cg, *b, x, 1, 5);
  ASSERT_EQ(r.vertices, Ids{0});
  const double h = r.embeddings(0, 0);
  EXPECT_TRUE(h == 1 || h == 10 || h == 100 || h == 1000) << h;
  EXPECT_EQ(r.metrics.edge_accesses(), 1u);
}

TEST(RunNs, HugeFanoutEqualsOracleAndIsDeterministic) {
  for (ModelId id : {ModelId::GCN, ModelId::GAT, ModelId::MoNet}) {
    const auto b = make_bundle<double>(id, {5, 5, 3}, 4);
    DynamicGraph g = testing::er_graph(200, 5, 4);
    const Matrix<double> x = random_features<double>(200, 5, 4);
    const Step s = apply(g, random_mixed_batches(g.edges(), 200, 1, 10, 0.5, 4)[0], *b);
    const UpdateView view(g, s.applied);
    const auto r = run_ns(view, s.cg, *b, x, 1000000, 1);
    const auto fn = run_fn_khop(view, s.cg, *b, x);
    EXPECT_LE(max_deviation(r, forward_reference(*b, g, x).back()), 1e-10);
    EXPECT_EQ(r.embeddings, fn.embeddings);
    const auto small1 = run_ns(view, s.cg, *b, x, 2, 77);
    const auto small2 = run_ns(view, s.cg, *b, x, 2, 77);
    EXPECT_EQ(small1.embeddings, small2.embeddings);
    EXPECT_EQ(small1.metrics.edge_accesses(), small2.metrics.edge_accesses());
  }
}

TEST(RunOdec, DisjointQueryReturnsCachedEmbeddings) {
  const auto b = make_bundle<double>(ModelId::GCN, {4, 4, 2}, 1);
  DynamicGraph g = testing::make_graph(8, {{0, 1}, {1, 2}, {4, 5}, {5, 6}});
  StateCache<double> cache(*b, random_features<double>(8, 4, 1));
  run_full(g, cache);
  const Matrix<double> before = cache.materialize_layer(2);
  const Step s = apply(g, {{EdgeOp::Insert, 3, 0, 0}}, *b);
  const Ids q{5, 6};
  const auto r = run_odec(q, UpdateView(g, s.applied), s.cg, cache);
  EXPECT_EQ(r.metrics.edge_accesses(), 0u);
  EXPECT_TRUE(r.changed_final.empty());
  for (std::size_t i = 0; i < q.size(); ++i) {
    EXPECT_EQ(dense::max_abs_diff<double>(r.embeddings.row(i), before.row(q[i])), 0.0);
  }
  EXPECT_FALSE(cache.in_batch());
}

TEST(RunOdec, AllAffectedMatchesIncremental) {
  for (ModelId id : {ModelId::GraphSAGE, ModelId::GAT, ModelId::GGCN}) {
    const auto b = make_bundle<double>(id, {4, 4, 2}, 5);
    DynamicGraph g = testing::er_graph(250, 4, 5);
    const Matrix<double> x = random_features<double>(250, 4, 5);
    StateCache<double> cache(*b, x);
    run_full(g, cache);
    for (const auto& batch : random_mixed_batches(g.edges(), 250, 3, 8, 0.5, 5)) {
      const Step s = apply(g, batch, *b);
      const UpdateView view(g, s.applied);
      const auto ro = run_odec(all_changed(s.cg), view, s.cg, cache);
      const auto ri = run_incremental(view, s.cg, cache);
      ASSERT_EQ(ro.metrics.layers.size(), ri.metrics.layers.size());
      for (std::size_t l = 0; l < ri.metrics.layers.size(); ++l) {
        EXPECT_EQ(ro.metrics.layers[l].edge_accesses, ri.metrics.layers[l].edge_accesses);
        EXPECT_EQ(ro.metrics.layers[l].vertex_accesses, ri.metrics.layers[l].vertex_accesses);
      }
      EXPECT_LE(max_deviation(ro, forward_reference(*b, g, x).back()), 1e-10);
    }
  }
}

TEST(RunOdec, SingleQueryStaysInsideTwoHopInSubgraph) {
  const auto b = make_bundle<double>(ModelId::GIN, {2, 2, 2}, 1);
  // Chain 0 -> 1 -> 2 -> 3 plus an unrelated branch feeding 5.
  DynamicGraph g = testing::make_graph(8, {{1, 2}, {2, 3}, {6, 5}, {7, 5}});
  const Matrix<double> x = random_features<double>(8, 2, 1);
  StateCache<double> cache(*b, x);
  run_full(g, cache);
  const Step s = apply(g, {{EdgeOp::Insert, 0, 1, 0}, {EdgeOp::Insert, 4, 5, 0}}, *b);
  const Ids q{2};
  const auto r = run_odec(q, UpdateView(g, s.applied), s.cg, cache);
  // The 2-hop in-subgraph of vertex 2 holds the edges 0->1 and 1->2.
  EXPECT_LE(r.metrics.edge_accesses(), 2u);
  EXPECT_LE(max_deviation(r, forward_reference(*b, g, x).back()), 1e-12);
}

TEST(RunOdec, InvalidQueryVertex) {
  const auto b = make_bundle<double>(ModelId::GIN, {2, 2}, 1);
  DynamicGraph g(3);
  StateCache<double> cache(*b, random_features<double>(3, 2, 1));
  run_full(g, cache);
  const Step s = apply(g, {}, *b);
  const Ids q{3};
  EXPECT_THROW(run_odec(q, UpdateView(g, s.applied), s.cg, cache), Error);
}

TEST(Modes, NamesRoundTrip) {
  for (Mode m : {Mode::Full, Mode::Incremental, Mode::Uer, Mode::FnKhop, Mode::Ns, Mode::Odec}) {
    EXPECT_EQ(parse_mode(mode_name(m)), m);
  }
  EXPECT_THROW(parse_mode("bogus"), Error);
}

TEST(RunIncremental, SinglePrecisionTracksDoubleReference) {
  const auto b = make_bundle<float>(ModelId::GraphSAGE, {8, 8, 4}, 2);
  DynamicGraph g = testing::er_graph(300, 6, 2);
  const Matrix<float> x = random_features<float>(300, 8, 2);
  StateCache<float> cache(*b, x);
  run_full(g, cache);
  for (const auto& batch : random_mixed_batches(g.edges(), 300, 5, 10, 0.5, 2)) {
    const ApplyResult r = g.apply_batch(batch);
    const ComputationGraph cg = build_computation_graph(UpdateView(g, r), 2, b->flags());
    run_incremental(UpdateView(g, r), cg, cache);
  }
  EXPECT_LE(max_deviation(cache, forward_reference(*b, g, x).back()), 1e-4);
}

}  // namespace
}  // namespace incrt
