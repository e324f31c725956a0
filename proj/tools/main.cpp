// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "harness.hpp"

using namespace incrt;

int main(int argc, char** argv) {
  CLI::App app{"incrt: incremental GNN embedding maintenance over streaming graphs"};
  app.require_subcommand(1);

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Write a seeded synthetic edge stream");
  std::string kind = "er";
  std::size_t n = 1000;
  double param = 8.0;
  std::uint64_t seed = 1;
  std::string out_path;
  gen_cmd->add_option("--kind", kind, "er or ba")->capture_default_str();
  gen_cmd->add_option("--n", n, "Vertex count")->capture_default_str();
  gen_cmd->add_option("--param", param, "ER: p, or average degree when > 1; BA: m")
      ->capture_default_str();
  gen_cmd->add_option("--seed", seed)->capture_default_str();
  gen_cmd->add_option("--out", out_path, "Edge-stream output file")->required();

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Load an edge stream and report graph stats");
  std::string edges_path;
  bool snapshot = false;
  std::string ingest_out;
  ingest_cmd->add_option("edges", edges_path, "Edge-stream file")->required();
  ingest_cmd->add_flag("--snapshot", snapshot, "Reject deletions");
  ingest_cmd->add_option("--out", ingest_out, "Write the resulting snapshot here");

  // run / redundancy share config + overrides
  std::string config_path;
  std::string metrics_path;
  harness::Overrides ov;
  std::string mode, model;
  std::uint64_t ov_seed = 0;
  std::size_t layers = 0, fanout = 0, refresh = 0;
  bool breakdown = false;

  auto* run_cmd = app.add_subcommand("run", "Replay a stream under one execution mode");
  run_cmd->add_option("--config", config_path, "JSON run config")->required();
  run_cmd->add_option("--metrics", metrics_path, "Metrics CSV path (default: stdout)");
  auto* o_mode = run_cmd->add_option("--mode", mode, "full, inc, uer, fn, ns, odec");
  auto* o_model = run_cmd->add_option("--model", model);
  auto* o_seed = run_cmd->add_option("--seed", ov_seed);
  auto* o_layers = run_cmd->add_option("--layers", layers);
  auto* o_fanout = run_cmd->add_option("--fanout", fanout);
  auto* o_verify = run_cmd->add_flag("--verify", "Compare against the full oracle every batch");
  auto* o_refresh = run_cmd->add_option("--refresh-every", refresh);
  bool timing = false;
  run_cmd->add_flag("--timing", timing, "Fill the wall_ms column");

  auto* red_cmd = app.add_subcommand("redundancy", "FN / UER / incremental access report");
  red_cmd->add_option("--config", config_path, "JSON run config")->required();
  auto* r_model = red_cmd->add_option("--model", model);
  auto* r_seed = red_cmd->add_option("--seed", ov_seed);
  auto* r_layers = red_cmd->add_option("--layers", layers);
  red_cmd->add_flag("--breakdown", breakdown, "Add the degree-percentile breakdown");

  auto* thr_cmd = app.add_subcommand("throughput", "Largest batch size within a latency bound");
  double latency_ms = 10.0;
  std::size_t max_batch = 4096;
  thr_cmd->add_option("--config", config_path, "JSON run config")->required();
  auto* t_mode = thr_cmd->add_option("--mode", mode);
  auto* t_model = thr_cmd->add_option("--model", model);
  thr_cmd->add_option("--latency-ms", latency_ms)->capture_default_str();
  thr_cmd->add_option("--max-batch", max_batch)->capture_default_str();

  auto* ver_cmd = app.add_subcommand("verify-conditions", "Numerically check a bundle");
  std::string ver_model = "GCN";
  std::size_t trials = 1000;
  double tol = 1e-9;
  ver_cmd->add_option("--model", ver_model, "Model name or raw-mean")->capture_default_str();
  ver_cmd->add_option("--trials", trials)->capture_default_str();
  ver_cmd->add_option("--tol", tol)->capture_default_str();
  ver_cmd->add_option("--seed", seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) {
      return harness::cmd_generate(gen::parse_graph_kind(kind), n, param, seed, out_path,
                                   std::cerr);
    }
    if (ingest_cmd->parsed()) {
      std::optional<std::filesystem::path> out;
      if (!ingest_out.empty()) out = ingest_out;
      return harness::cmd_ingest(edges_path, snapshot, out, std::cout);
    }
    if (ver_cmd->parsed()) {
      return harness::cmd_verify_conditions(ver_model, trials, tol, seed, std::cout);
    }

    harness::RunConfig config = harness::load_config(config_path);
    if (*o_mode || *t_mode) ov.mode = mode;
    if (*o_model || *r_model || *t_model) ov.model = model;
    if (*o_seed || *r_seed) ov.seed = ov_seed;
    if (*o_layers || *r_layers) ov.layers = layers;
    if (*o_fanout) ov.fanout = fanout;
    if (*o_verify) ov.verify = true;
    if (*o_refresh) ov.refresh_every = refresh;
    harness::apply_overrides(config, ov);

    if (run_cmd->parsed()) {
      config.timing = config.timing || timing;
      if (!metrics_path.empty()) config.metrics_csv = metrics_path;
      if (config.metrics_csv) {
        std::ofstream csv(*config.metrics_csv);
        if (!csv) throw Error(ErrorCode::ConfigError, "cannot write " + config.metrics_csv->string());
        return harness::cmd_run(config, csv, std::cerr);
      }
      return harness::cmd_run(config, std::cout, std::cerr);
    }
    if (thr_cmd->parsed()) {
      return harness::cmd_throughput(config, latency_ms, max_batch, std::cout);
    }
    return harness::cmd_redundancy(config, breakdown, std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
