// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "incrt/model_zoo.hpp"
#include "test_util.hpp"

namespace incrt {
namespace {

using V = std::vector<double>;

ModelWeights scalar_gin() {
  ModelWeights w;
  w.model = ModelId::GIN;
  LayerWeights lw;
  lw.in = lw.out = 1;
  lw.W = Matrix<double>::identity(1);
  lw.extra["W2"] = Matrix<double>::identity(1);
  w.layers.push_back(lw);
  return w;
}

// Vertices 0..4; 1, 3 and 4 feed into 2.
DynamicGraph toy_graph() { return testing::make_graph(5, {{1, 2}, {3, 2}, {4, 2}}); }

Matrix<double> toy_features() { return Matrix<double>(5, 1, V{0, 1, 0, 2, 3}); }

TEST(ModelNames, ParseIsLenient) {
  EXPECT_EQ(parse_model("gcn"), ModelId::GCN);
  EXPECT_EQ(parse_model("Graph-SAGE"), ModelId::GraphSAGE);
  EXPECT_EQ(parse_model("A-GNN"), ModelId::AGNN);
  EXPECT_EQ(parse_model("g_gcn"), ModelId::GGCN);
  for (ModelId id : kAllModels) EXPECT_EQ(parse_model(model_name(id)), id);
  try {
    parse_model("transformer");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedModel);
  }
}

TEST(GcnBundle, LocalMessageIsInverseSqrtDegree) {
  const auto gcn = make_bundle<double>(ModelId::GCN, {2, 2}, 1);
  const V h{0.3, 0.4};
  V out(1);
  gcn->ms_local(0, h, h, EdgeMeta{4, 1}, out);
  EXPECT_DOUBLE_EQ(out[0], 0.5);
  EXPECT_EQ(gcn->empty_context(0), 0.0);
  EXPECT_EQ(gcn->context_term(0, out), 1.0);
}

TEST(GcnBundle, SelfLoopDegreeOption) {
  const auto gcn = make_bundle<double>(ModelId::GCN, {2, 2}, 1, {GcnDegree::SelfLoop});
  const V h{0.3, 0.4};
  V out(1);
  gcn->ms_local(0, h, h, EdgeMeta{3, 1}, out);
  EXPECT_DOUBLE_EQ(out[0], 0.5);
  EXPECT_EQ(gcn->empty_context(0), 1.0);
}

TEST(GcnBundle, UpdateIsReluOfLinear) {
  ModelWeights w = random_weights(ModelId::GCN, {2, 2}, 1);
  w.layers[0].W = Matrix<double>::identity(2);
  const auto gcn = make_bundle<double>(w);
  const V h{9, 9}, a{-1, 2};
  V out(2);
  gcn->update(0, h, a, out);
  EXPECT_EQ(out, (V{0, 2}));
}

TEST(SageBundle, CountContextFoldsSignedMessages) {
  const auto sage = make_bundle<double>(ModelId::GraphSAGE, {2, 2}, 1);
  const V one{1.0};
  const std::vector<Signed<double>> msgs{{1, one}, {1, one}, {-1, one}};
  EXPECT_DOUBLE_EQ(sage->nbr_ctx(0, 3.0, msgs), 4.0);
  V x{8.0, 4.0};
  sage->ms_cbn(0, 4.0, x);
  EXPECT_EQ(x, (V{2.0, 1.0}));
}

TEST(GatBundle, ZeroAttentionVectorGivesUniformWeights) {
  ModelWeights w = random_weights(ModelId::GAT, {3, 3}, 4);
  std::fill(w.layers[0].a.begin(), w.layers[0].a.end(), 0.0);
  const auto gat = make_bundle<double>(w);
  const V hu{0.1, -0.7, 0.2}, hv{0.9, 0.3, -0.4};
  V m(1);
  gat->ms_local(0, hu, hv, EdgeMeta{1, 3}, m);
  EXPECT_EQ(m[0], 1.0);
  const std::vector<Signed<double>> msgs(3, Signed<double>{1, m});
  const double ctx = gat->nbr_ctx(0, gat->empty_context(0), msgs);
  EXPECT_DOUBLE_EQ(compose_message(*gat, 0, ctx, std::span<const double>(m))[0], 1.0 / 3.0);
}

TEST(GatBundle, AttentionOnStarSumsToOne) {
  const auto gat = make_bundle<double>(ModelId::GAT, {4, 4}, 17);
  const Matrix<double> h = random_features<double>(6, 4, 3);
  V m(3);
  std::vector<Signed<double>> msgs;
  const VertexId srcs[] = {1, 2, 3};
  for (int i = 0; i < 3; ++i) gat->ms_local(0, h.row(srcs[i]), h.row(5), EdgeMeta{1, 3}, {&m[i], 1});
  for (int i = 0; i < 3; ++i) msgs.push_back({1, std::span<const double>(&m[i], 1)});
  const double ctx = gat->nbr_ctx(0, gat->empty_context(0), msgs);
  double total = 0;
  for (int i = 0; i < 3; ++i) {
    total += compose_message(*gat, 0, ctx, std::span<const double>(&m[i], 1))[0];
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(ForwardReference, GinToyAggregateIsNeighbourSum) {
  const auto gin = make_bundle<double>(scalar_gin());
  const LayerOutput<double> out = forward_layer_reference(*gin, toy_graph(), toy_features(), 0);
  EXPECT_DOUBLE_EQ(out.agg(2, 0), 6.0);
  EXPECT_DOUBLE_EQ(out.h(2, 0), 6.0);
  EXPECT_DOUBLE_EQ(out.agg(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(out.h(4, 0), 3.0);
}

TEST(ForwardReference, ZeroEdgeGraphAppliesUpdateToZero) {
  const DynamicGraph g(6);
  for (ModelId id : kAllModels) {
    const auto b = make_bundle<double>(id, {4, 5}, 2);
    const Matrix<double> x = random_features<double>(6, 4, 1);
    const LayerOutput<double> out = forward_layer_reference(*b, g, x, 0);
    const V zero(b->agg_dim(0), 0.0);
    V expect(5);
    for (VertexId v = 0; v < 6; ++v) {
      EXPECT_EQ(V(out.agg.row(v).begin(), out.agg.row(v).end()), zero) << model_name(id);
      EXPECT_EQ(out.ctx[v], b->empty_context(0)) << model_name(id);
      b->update(0, x.row(v), zero, expect);
      EXPECT_EQ(V(out.h.row(v).begin(), out.h.row(v).end()), expect) << model_name(id);
    }
  }
}

TEST(ForwardReference, ThreadCountDoesNotChangeOutput) {
  const DynamicGraph g = testing::er_graph(300, 6, 9);
  for (ModelId id : {ModelId::GCN, ModelId::GAT, ModelId::PinSAGE}) {
    const auto b = make_bundle<double>(id, {8, 8, 4}, 2);
    const Matrix<double> x = random_features<double>(300, 8, 1);
    EXPECT_EQ(forward_reference(*b, g, x, 1).back(), forward_reference(*b, g, x, 3).back());
  }
}

TEST(ForwardReference, OutputShapes) {
  const DynamicGraph g = testing::er_graph(50, 3, 1);
  const auto b = make_bundle<double>(ModelId::CommNet, {6, 5, 2}, 2);
  const auto hs = forward_reference(*b, g, random_features<double>(50, 6, 1));
  ASSERT_EQ(hs.size(), 3u);
  EXPECT_EQ(hs[1].cols(), 5u);
  EXPECT_EQ(hs[2].cols(), 2u);
  EXPECT_THROW(forward_reference(*b, g, random_features<double>(50, 5, 1)), Error);
}

TEST(Weights, JsonRoundTripEveryModel) {
  for (ModelId id : kAllModels) {
    const ModelWeights w = random_weights(id, {5, 4, 3}, 21);
    const ModelWeights back = parse_weights(dump_weights(w));
    ASSERT_EQ(back.model, id);
    ASSERT_EQ(back.layers.size(), 2u);
    for (std::size_t l = 0; l < 2; ++l) {
      EXPECT_EQ(back.layers[l].W, w.layers[l].W);
      EXPECT_EQ(back.layers[l].a, w.layers[l].a);
      EXPECT_EQ(back.layers[l].scalars, w.layers[l].scalars);
      EXPECT_EQ(back.layers[l].extra, w.layers[l].extra);
    }
  }
}

TEST(Weights, FileRoundTripGivesSameForward) {
  testing::TempDir dir("weights");
  const ModelWeights w = random_weights(ModelId::GGCN, {4, 4}, 3);
  save_weights(dir.path() / "w.json", w);
  const auto a = make_bundle<double>(w);
  const auto b = make_bundle<double>(load_weights(dir.path() / "w.json"));
  const DynamicGraph g = testing::er_graph(40, 3, 2);
  const Matrix<double> x = random_features<double>(40, 4, 2);
  EXPECT_EQ(forward_reference(*a, g, x).back(), forward_reference(*b, g, x).back());
}

TEST(Weights, ValidationCatchesBadShapes) {
  ModelWeights w = random_weights(ModelId::GCN, {4, 3, 2}, 1);
  w.layers[1].in = 5;
  EXPECT_THROW(validate_weights(w), Error);

  ModelWeights monet = random_weights(ModelId::MoNet, {4, 3}, 1);
  monet.layers[0].extra["sigma"](0, 0) = 0.5;
  EXPECT_THROW(validate_weights(monet), Error);

  ModelWeights gat = random_weights(ModelId::GAT, {4, 3}, 1);
  gat.layers[0].a.pop_back();
  EXPECT_THROW(validate_weights(gat), Error);

  ModelWeights agnn = random_weights(ModelId::AGNN, {4, 3}, 1);
  agnn.layers[0].scalars.clear();
  EXPECT_THROW(validate_weights(agnn), Error);
}

TEST(Weights, MalformedJsonIsFormatError) {
  for (const char* text : {"{", R"({"model":"GCN"})", R"({"model":"GCN","layers":[{"dims":[2]}]})"}) {
    try {
      parse_weights(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::FormatError || e.code() == ErrorCode::ShapeError) << text;
    }
  }
}

TEST(Bundles, DimensionsAndFlags) {
  for (ModelId id : kAllModels) {
    const auto b = make_bundle<float>(id, {6, 5, 3}, 1);
    EXPECT_EQ(b->name(), model_name(id));
    EXPECT_EQ(b->num_layers(), 2u);
    EXPECT_EQ(b->input_dim(1), 5u);
    EXPECT_EQ(b->output_dim(1), 3u);
  }
  EXPECT_TRUE(make_bundle<double>(ModelId::GAT, {2, 2}, 1)->flags().dest_dependent);
  EXPECT_TRUE(make_bundle<double>(ModelId::GCN, {2, 2}, 1)->flags().src_degree_dependent);
  EXPECT_FALSE(make_bundle<double>(ModelId::GIN, {2, 2}, 1)->flags().dest_dependent);
}

TEST(RandomFeatures, SeededAndBounded) {
  const auto a = random_features<double>(20, 4, 7);
  EXPECT_EQ(a, random_features<double>(20, 4, 7));
  EXPECT_NE(a, random_features<double>(20, 4, 8));
  for (double v : a.data()) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
}

}  // namespace
}  // namespace incrt
