// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "harness.hpp"
#include "incrt/edge_stream.hpp"
#include "incrt/frontier.hpp"
#include "incrt/tensor_io.hpp"

namespace incrt::harness {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

template <typename T>
struct Model {
  std::unique_ptr<OperatorBundle<T>> bundle;
  Matrix<T> features;
};

template <typename T>
Model<T> make_model(const RunConfig& c, std::size_t n) {
  Model<T> m;
  ModelWeights w = c.weights ? load_weights(*c.weights)
                             : random_weights(parse_model(c.model), c.dims(), c.seed);
  if (w.model != parse_model(c.model)) {
    throw Error(ErrorCode::ConfigError, "weights file is for a different model");
  }
  m.bundle = make_bundle<T>(w, BundleOptions{c.gcn_degree});
  if (c.features) {
    m.features = nrtf::load<T>(*c.features);
    if (m.features.rows() != n) {
      throw Error(ErrorCode::ShapeError, "feature rows do not match the vertex count");
    }
  } else {
    m.features = random_features<T>(n, m.bundle->input_dim(0), c.seed + 1);
  }
  return m;
}

template <typename T>
int run_typed(const RunConfig& c, std::ostream& csv, std::ostream& log) {
  std::size_t n = 0;
  StreamPlan plan = build_plan(c, &n);
  DynamicGraph graph(n);
  graph.load(plan.base);
  Model<T> model = make_model<T>(c, n);
  const OperatorBundle<T>& bundle = *model.bundle;
  const std::size_t L = bundle.num_layers();

  StateCache<T> cache(bundle, model.features);
  EngineOptions opts{c.threads, nullptr};
  run_full(graph, cache, opts);

  std::ofstream frontier_out;
  if (c.frontier_dump) frontier_out.open(*c.frontier_dump);

  csv << kCsvHeader << '\n';
  bool failed = false;
  for (std::size_t b = 0; b < plan.batches.size(); ++b) {
    const ApplyResult applied = graph.apply_batch(plan.batches[b]);
    const UpdateView view(graph, applied);
    const ComputationGraph cg = build_computation_graph(view, L, bundle.flags());
    if (frontier_out) dump_frontier(frontier_out, cg);

    RunResult<T> r;
    bool cache_current = true;
    switch (c.mode) {
      case Mode::Full: {
        r = run_full(graph, cache, opts);
        const SubgraphSize as = affected_subgraph_size(cg);
        r.metrics.as_edges = as.edges;
        r.metrics.as_vertices = as.vertices;
        break;
      }
      case Mode::Incremental: r = run_incremental(view, cg, cache, opts); break;
      case Mode::Uer: r = run_uer(view, cg, cache, opts); break;
      case Mode::FnKhop:
        r = run_fn_khop(view, cg, bundle, model.features, opts);
        cache_current = false;
        break;
      case Mode::Ns:
        r = run_ns(view, cg, bundle, model.features, c.fanout, c.seed + b, opts);
        cache_current = false;
        break;
      case Mode::Odec: {
        const std::vector<VertexId> q = c.query.empty() ? all_changed(cg) : c.query;
        r = run_odec(q, view, cg, cache, opts);
        cache_current = false;
        break;
      }
    }
    if (!cache_current) run_incremental(view, cg, cache, opts);
    if (c.refresh_every > 0 && (b + 1) % c.refresh_every == 0) cache.bootstrap(graph, c.threads);

    std::string dev;
    if (c.verify) {
      const Matrix<T> ref = forward_reference(bundle, graph, model.features, c.threads).back();
      const double d = cache_current ? max_deviation(cache, ref) : max_deviation(r, ref);
      dev = fmt("%.6e", d);
      if (d > c.tolerance) {
        failed = true;
        log << "batch " << b << ": max deviation " << dev << " exceeds tolerance " << c.tolerance
            << '\n';
      }
    }
    const std::string wall = c.timing ? fmt("%.3f", r.metrics.wall_ms) : std::string{};
    for (std::size_t l = 0; l < r.metrics.layers.size(); ++l) {
      csv << b << ',' << mode_name(c.mode) << ',' << (l + 1) << ','
          << r.metrics.layers[l].edge_accesses << ',' << r.metrics.layers[l].vertex_accesses << ','
          << r.metrics.as_edges << ',' << r.metrics.as_vertices << ',' << wall << ',' << dev
          << '\n';
    }
  }

  if (c.dump_dir) {
    std::filesystem::create_directories(*c.dump_dir);
    for (std::size_t l = 1; l <= L; ++l) {
      nrtf::save(*c.dump_dir / ("h_" + std::to_string(l) + ".nrtf"), cache.materialize_layer(l));
    }
  }
  log << plan.batches.size() << " batches, mode " << mode_name(c.mode)
      << (failed ? ", verification FAILED" : "") << '\n';
  return failed ? 1 : 0;
}

struct BatchRow {
  std::size_t as = 0, fn = 0, uer = 0, inc = 0;
};

template <typename T>
int redundancy_typed(const RunConfig& c, bool breakdown, std::ostream& out) {
  std::size_t n = 0;
  StreamPlan plan = build_plan(c, &n);
  DynamicGraph graph(n);
  graph.load(plan.base);
  Model<T> model = make_model<T>(c, n);
  const OperatorBundle<T>& bundle = *model.bundle;

  StateCache<T> inc_cache(bundle, model.features);
  StateCache<T> uer_cache(bundle, model.features);
  inc_cache.bootstrap(graph, c.threads);
  uer_cache.bootstrap(graph, c.threads);

  // Degree classes are fixed on the base snapshot: top 20%, next 30%, rest.
  std::vector<int> cls(n, 2);
  {
    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
      return graph.in_degree(a) + graph.out_degree(a) > graph.in_degree(b) + graph.out_degree(b);
    });
    for (std::size_t i = 0; i < n; ++i) cls[order[i]] = i < n / 5 ? 0 : (i < n / 2 ? 1 : 2);
  }
  std::vector<std::size_t> fn_v(n, 0), uer_v(n, 0), inc_v(n, 0);

  out << "batch,as_edges,fn_edges,uer_edges,inc_edges,fn_as,uer_as,inc_as,redundant_pct,ordered\n";
  std::vector<BatchRow> rows;
  for (std::size_t b = 0; b < plan.batches.size(); ++b) {
    const ApplyResult applied = graph.apply_batch(plan.batches[b]);
    const UpdateView view(graph, applied);
    const ComputationGraph cg = build_computation_graph(view, bundle.num_layers(), bundle.flags());
    BatchRow row;
    row.as = affected_subgraph_size(cg).edges;
    row.fn = run_fn_khop(view, cg, bundle, model.features, {c.threads, &fn_v})
                 .metrics.edge_accesses();
    row.uer = run_uer(view, cg, uer_cache, {c.threads, &uer_v}).metrics.edge_accesses();
    row.inc = run_incremental(view, cg, inc_cache, {c.threads, &inc_v}).metrics.edge_accesses();
    rows.push_back(row);
    const double as = static_cast<double>(std::max<std::size_t>(row.as, 1));
    const double redundant =
        row.fn == 0 ? 0.0
                    : 100.0 * (static_cast<double>(row.fn) - static_cast<double>(row.as)) /
                          static_cast<double>(row.fn);
    out << b << ',' << row.as << ',' << row.fn << ',' << row.uer << ',' << row.inc << ','
        << fmt("%.4f", row.fn / as) << ',' << fmt("%.4f", row.uer / as) << ','
        << fmt("%.4f", row.inc / as) << ',' << fmt("%.2f", redundant) << ','
        << (row.inc <= row.uer && row.uer <= row.fn ? 1 : 0) << '\n';
  }

  double fn_as = 0, uer_as = 0, inc_as = 0, red = 0;
  for (const auto& r : rows) {
    const double as = static_cast<double>(std::max<std::size_t>(r.as, 1));
    fn_as += r.fn / as;
    uer_as += r.uer / as;
    inc_as += r.inc / as;
    red += r.fn == 0 ? 0.0 : 100.0 * (double(r.fn) - double(r.as)) / double(r.fn);
  }
  const double k = static_cast<double>(std::max<std::size_t>(rows.size(), 1));
  out << "mean,,,,," << fmt("%.4f", fn_as / k) << ',' << fmt("%.4f", uer_as / k) << ','
      << fmt("%.4f", inc_as / k) << ',' << fmt("%.2f", red / k) << ",\n";

  if (breakdown) {
    static const char* names[] = {"top20", "mid30", "bottom50"};
    out << "\nclass,fn_edges,uer_edges,inc_edges,reduction_vs_fn_pct,reduction_vs_uer_pct\n";
    for (int k2 = 0; k2 < 3; ++k2) {
      std::size_t f = 0, u = 0, i = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (cls[v] != k2) continue;
        f += fn_v[v];
        u += uer_v[v];
        i += inc_v[v];
      }
      auto pct = [](std::size_t base, std::size_t x) {
        return base == 0 ? 0.0 : 100.0 * (1.0 - double(x) / double(base));
      };
      out << names[k2] << ',' << f << ',' << u << ',' << i << ',' << fmt("%.2f", pct(f, i)) << ','
          << fmt("%.2f", pct(u, i)) << '\n';
    }
  }
  return 0;
}

}  // namespace

int cmd_generate(gen::GraphKind kind, std::size_t n, double param, std::uint64_t seed,
                 const std::filesystem::path& out, std::ostream& log) {
  std::vector<EdgeUpdate> stream =
      (kind == gen::GraphKind::ErdosRenyi && param > 1.0)
          ? gen::erdos_renyi_avg_degree(n, param, seed)
          : gen::generate_graph(kind, n, param, seed);
  std::sort(stream.begin(), stream.end(),
            [](const EdgeUpdate& a, const EdgeUpdate& b) { return a.ts < b.ts; });
  edge_stream::save(out, stream);
  log << "wrote " << stream.size() << " edges over " << n << " vertices to " << out.string()
      << '\n';
  return 0;
}

int cmd_ingest(const std::filesystem::path& edges, bool snapshot,
               const std::optional<std::filesystem::path>& out, std::ostream& log) {
  std::vector<EdgeUpdate> events = edge_stream::load(edges, snapshot);
  const std::size_t n = edge_stream::infer_vertex_count(events);
  DynamicGraph graph(n);
  std::size_t inserted = 0, deleted = 0, rejected = 0, coalesced = 0;
  // Replay in file order, one event per batch, so a delete sees prior inserts.
  for (const auto& e : events) {
    ApplyResult r = graph.apply_batch(std::span<const EdgeUpdate>(&e, 1));
    rejected += r.rejected.size();
    coalesced += r.coalesced_away;
    for (const auto& a : r.applied) (a.op == EdgeOp::Insert ? inserted : deleted)++;
  }
  log << "vertices " << n << "\nedges " << graph.edge_count() << "\ninserts " << inserted
      << "\ndeletes " << deleted << "\nrejected " << rejected << "\ncoalesced " << coalesced
      << "\nout_pma_density " << fmt("%.4f", graph.out_adjacency().density())
      << "\nin_pma_density " << fmt("%.4f", graph.in_adjacency().density()) << '\n';
  if (out) {
    std::vector<EdgeUpdate> snap;
    std::uint64_t ts = 0;
    for (const auto& [s, d] : graph.edges()) snap.push_back({EdgeOp::Insert, s, d, ts++});
    edge_stream::save(*out, snap);
  }
  return 0;
}

int cmd_run(const RunConfig& config, std::ostream& csv, std::ostream& log) {
  config.validate();
  if (config.precision == Precision::F32) return run_typed<float>(config, csv, log);
  return run_typed<double>(config, csv, log);
}

int cmd_verify_conditions(const std::string& model, std::size_t trials, double tol,
                          std::uint64_t seed, std::ostream& out) {
  if (trials < 1) throw Error(ErrorCode::ConfigError, "trials must be at least 1");
  std::unique_ptr<OperatorBundle<double>> bundle;
  if (model == "raw-mean") {
    bundle = make_raw_mean_bundle<double>(8);
  } else {
    bundle = make_bundle<double>(parse_model(model), {16, 16, 8}, seed);
  }
  const ConditionReport rep = check_conditions(*bundle, trials, tol, seed);
  out << rep.bundle << ": " << rep.trials << " trials, tol " << fmt("%g", rep.tolerance) << '\n';
  for (std::size_t i = 0; i < rep.conditions.size(); ++i) {
    const auto& cond = rep.conditions[i];
    out << "  (" << (i + 1) << ") " << (cond.passed ? "PASS" : "FAIL") << "  max_violation "
        << fmt("%.3e", cond.max_violation) << "  " << cond.name << '\n';
    if (!cond.passed) out << "      counterexample: " << cond.counterexample << '\n';
  }
  return rep.passed() ? 0 : 1;
}

int cmd_redundancy(const RunConfig& config, bool breakdown, std::ostream& out) {
  RunConfig c = config;
  c.mode = Mode::Incremental;
  c.fanout = 0;
  c.validate();
  if (c.precision == Precision::F32) return redundancy_typed<float>(c, breakdown, out);
  return redundancy_typed<double>(c, breakdown, out);
}

int cmd_throughput(const RunConfig& config, double latency_ms, std::size_t max_batch,
                   std::ostream& out) {
  if (!(latency_ms > 0.0)) throw Error(ErrorCode::ConfigError, "latency bound must be positive");
  if (max_batch < 2) throw Error(ErrorCode::ConfigError, "max batch must be at least 2");
  RunConfig c = config;
  c.timing = true;
  c.verify = false;
  c.metrics_csv.reset();
  c.dump_dir.reset();
  c.frontier_dump.reset();
  out << "batch_size,mean_ms,max_ms,edges_per_s,within_bound\n";
  std::size_t best = 0;
  double best_rate = 0.0;
  for (std::size_t size = 2; size <= max_batch; size *= 2) {
    c.batch_size = static_cast<double>(size);
    std::ostringstream csv, log;
    try {
      cmd_run(c, csv, log);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ConfigError || best == 0) throw;
      break;
    }
    std::istringstream rows(csv.str());
    std::string line;
    std::getline(rows, line);
    std::vector<double> wall;
    std::string last_batch;
    while (std::getline(rows, line)) {
      std::vector<std::string> cols;
      std::stringstream ls(line);
      for (std::string f; std::getline(ls, f, ',');) cols.push_back(f);
      if (cols.size() < 8 || cols[0] == last_batch) continue;
      last_batch = cols[0];
      wall.push_back(std::stod(cols[7]));
    }
    if (wall.empty()) break;
    const double mean = std::accumulate(wall.begin(), wall.end(), 0.0) / wall.size();
    const double worst = *std::max_element(wall.begin(), wall.end());
    const double rate = mean > 0.0 ? 1000.0 * static_cast<double>(size) / mean : 0.0;
    const bool ok = mean <= latency_ms;
    out << size << ',' << fmt("%.3f", mean) << ',' << fmt("%.3f", worst) << ','
        << fmt("%.1f", rate) << ',' << (ok ? 1 : 0) << '\n';
    if (!ok) break;
    best = size;
    best_rate = rate;
  }
  out << "best," << best << ',' << fmt("%.1f", best_rate) << '\n';
  return best > 0 ? 0 : 1;
}

}  // namespace incrt::harness
