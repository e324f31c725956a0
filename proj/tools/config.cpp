// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "harness.hpp"
#include "incrt/edge_stream.hpp"
#include "json.hpp"

namespace incrt::harness {

using nlohmann::json;

std::vector<std::size_t> RunConfig::dims() const {
  std::vector<std::size_t> d{feature_dim};
  for (std::size_t l = 1; l < layers; ++l) d.push_back(hidden_dim);
  d.push_back(output_dim == 0 ? hidden_dim : output_dim);
  return d;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); };
  parse_model(model);
  if (layers < 1) fail("layers must be at least 1");
  if (feature_dim == 0 || hidden_dim == 0) fail("feature_dim and hidden_dim must be positive");
  if (batch_count == 0) fail("batch_count must be positive");
  if (batch_size < 0.0) fail("batch_size must be non-negative");
  if (batch_size > 1.0 && batch_size != static_cast<double>(static_cast<std::size_t>(batch_size))) {
    fail("absolute batch_size must be an integer");
  }
  if (mode == Mode::Ns && fanout == 0) fail("mode ns requires fanout >= 1");
  if (mode != Mode::Ns && fanout != 0) fail("fanout is only valid with mode ns");
  if (!(tolerance >= 0.0)) fail("tolerance must be non-negative");
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config: ") + e.what());
  }
  RunConfig c;
  try {
    c.model = j.value("model", c.model);
    c.layers = j.value("layers", c.layers);
    c.feature_dim = j.value("feature_dim", c.feature_dim);
    c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
    c.output_dim = j.value("output_dim", c.output_dim);
    const std::string prec = j.value("precision", std::string("f64"));
    if (prec == "f64") {
      c.precision = Precision::F64;
    } else if (prec == "f32") {
      c.precision = Precision::F32;
    } else {
      throw Error(ErrorCode::ConfigError, "precision must be f32 or f64");
    }
    if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
    c.fanout = j.value("fanout", c.fanout);
    c.batch_count = j.value("batch_count", c.batch_count);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.holdout_fraction = j.value("holdout_fraction", c.holdout_fraction);
    c.deletion_share = j.value("deletion_share", c.deletion_share);
    c.seed = j.value("seed", c.seed);
    c.refresh_every = j.value("refresh_every", c.refresh_every);
    c.verify = j.value("verify", c.verify);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.threads = j.value("threads", c.threads);
    c.timing = j.value("timing", c.timing);
    const std::string deg = j.value("gcn_degree", std::string("raw"));
    if (deg == "raw") {
      c.gcn_degree = GcnDegree::Raw;
    } else if (deg == "self_loop") {
      c.gcn_degree = GcnDegree::SelfLoop;
    } else {
      throw Error(ErrorCode::ConfigError, "gcn_degree must be raw or self_loop");
    }
    if (j.contains("graph")) {
      const json& g = j["graph"];
      if (g.contains("edges")) c.graph.edges = g["edges"].get<std::string>();
      if (g.contains("kind")) c.graph.kind = gen::parse_graph_kind(g["kind"].get<std::string>());
      c.graph.n = g.value("n", c.graph.n);
      c.graph.param = g.value("param", c.graph.param);
    }
    if (j.contains("weights")) c.weights = j["weights"].get<std::string>();
    if (j.contains("features")) c.features = j["features"].get<std::string>();
    if (j.contains("metrics_csv")) c.metrics_csv = j["metrics_csv"].get<std::string>();
    if (j.contains("dump_dir")) c.dump_dir = j["dump_dir"].get<std::string>();
    if (j.contains("frontier_dump")) c.frontier_dump = j["frontier_dump"].get<std::string>();
    if (j.contains("query")) c.query = j["query"].get<std::vector<VertexId>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.mode) c.mode = parse_mode(*o.mode);
  if (o.model) c.model = *o.model;
  if (o.seed) c.seed = *o.seed;
  if (o.layers) c.layers = *o.layers;
  if (o.fanout) c.fanout = *o.fanout;
  if (o.verify) c.verify = *o.verify;
  if (o.refresh_every) c.refresh_every = *o.refresh_every;
}

StreamPlan build_plan(const RunConfig& c, std::size_t* vertex_count) {
  std::vector<EdgeUpdate> stream;
  std::size_t n = 0;
  if (c.graph.edges) {
    stream = edge_stream::load(*c.graph.edges, true);
    n = std::max(c.graph.n, edge_stream::infer_vertex_count(stream));
  } else if (c.graph.kind == gen::GraphKind::ErdosRenyi && c.graph.param > 1.0) {
    stream = gen::erdos_renyi_avg_degree(c.graph.n, c.graph.param, c.seed);
    n = c.graph.n;
  } else {
    stream = gen::generate_graph(c.graph.kind, c.graph.n, c.graph.param, c.seed);
    n = c.graph.n;
  }
  SplitOptions split;
  split.batch_count = c.batch_count;
  split.deletion_share = c.deletion_share;
  split.seed = c.seed;
  split.holdout_fraction = c.holdout_fraction;
  if (c.batch_size > 0.0) {
    const double per = c.batch_size <= 1.0 ? c.batch_size * static_cast<double>(stream.size())
                                           : c.batch_size;
    const double k = std::max(1.0, std::round(per));
    split.holdout_fraction = std::min(1.0, k * static_cast<double>(c.batch_count) /
                                               static_cast<double>(std::max<std::size_t>(stream.size(), 1)));
  }
  if (vertex_count) *vertex_count = n;
  return split_stream(stream, split);
}

}  // namespace incrt::harness
