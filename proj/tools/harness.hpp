// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "incrt/dense.hpp"
#include "incrt/engines.hpp"
#include "incrt/generators.hpp"
#include "incrt/model_zoo.hpp"
#include "incrt/stream.hpp"

namespace incrt::harness {

struct GraphSource {
  /// Either an edge-stream file or generator parameters.
  std::optional<std::filesystem::path> edges;
  gen::GraphKind kind = gen::GraphKind::ErdosRenyi;
  std::size_t n = 1000;
  /// p for ER (or average degree when > 1), m for BA.
  double param = 8.0;
};

struct RunConfig {
  std::string model = "GCN";
  std::size_t layers = 2;
  std::size_t feature_dim = 16;
  std::size_t hidden_dim = 16;
  std::size_t output_dim = 0;  // 0 means hidden_dim
  Precision precision = Precision::F64;
  Mode mode = Mode::Incremental;
  std::size_t fanout = 0;
  std::size_t batch_count = 10;
  /// Fraction of |E| when <= 1, absolute edge count otherwise; 0 derives
  /// the size from holdout_fraction.
  double batch_size = 0.0;
  double holdout_fraction = 0.1;
  double deletion_share = 0.0;
  std::uint64_t seed = 1;
  std::size_t refresh_every = 0;
  bool verify = false;
  double tolerance = 1e-8;
  GcnDegree gcn_degree = GcnDegree::Raw;
  std::size_t threads = 1;
  bool timing = false;

  GraphSource graph;
  std::optional<std::filesystem::path> weights;
  std::optional<std::filesystem::path> features;
  std::optional<std::filesystem::path> metrics_csv;
  std::optional<std::filesystem::path> dump_dir;
  std::optional<std::filesystem::path> frontier_dump;
  /// ODEC query set; empty means every vertex affected at any layer.
  std::vector<VertexId> query;

  std::vector<std::size_t> dims() const;
  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

/// CLI overrides; unset fields leave the config untouched.
struct Overrides {
  std::optional<std::string> mode;
  std::optional<std::string> model;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> layers;
  std::optional<std::size_t> fanout;
  std::optional<bool> verify;
  std::optional<std::size_t> refresh_every;
};

void apply_overrides(RunConfig& config, const Overrides& o);

/// Loads or generates the timestamped edge stream and splits it.
StreamPlan build_plan(const RunConfig& config, std::size_t* vertex_count);

int cmd_generate(gen::GraphKind kind, std::size_t n, double param, std::uint64_t seed,
                 const std::filesystem::path& out, std::ostream& log);

int cmd_ingest(const std::filesystem::path& edges, bool snapshot,
               const std::optional<std::filesystem::path>& out, std::ostream& log);

/// Replays the plan under config.mode. Metrics rows go to `csv`. Returns 1
/// when verification exceeds the tolerance, 0 otherwise.
int cmd_run(const RunConfig& config, std::ostream& csv, std::ostream& log);

int cmd_verify_conditions(const std::string& model, std::size_t trials, double tol,
                          std::uint64_t seed, std::ostream& out);

int cmd_redundancy(const RunConfig& config, bool breakdown, std::ostream& out);

/// Doubles the batch size from 2 up to max_batch and keeps the largest size
/// whose mean per-batch wall time stays within latency_ms. Returns 1 when no
/// size meets the bound.
int cmd_throughput(const RunConfig& config, double latency_ms, std::size_t max_batch,
                   std::ostream& out);

inline constexpr const char* kCsvHeader =
    "batch,mode,layer,edge_accesses,vertex_accesses,as_edges,as_vertices,wall_ms,max_dev";

}  // namespace incrt::harness
