// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "incrt/engines.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <random>
#include <string>
#include <unordered_map>

#include "incrt/model_zoo.hpp"
#include "incrt/parallel.hpp"

namespace incrt {

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::Full: return "full";
    case Mode::Incremental: return "inc";
    case Mode::Uer: return "uer";
    case Mode::FnKhop: return "fn";
    case Mode::Ns: return "ns";
    case Mode::Odec: return "odec";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  std::string key;
  for (char c : text) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (Mode m : {Mode::Full, Mode::Incremental, Mode::Uer, Mode::FnKhop, Mode::Ns, Mode::Odec}) {
    if (key == mode_name(m)) return m;
  }
  if (key == "incremental") return Mode::Incremental;
  throw Error(ErrorCode::ConfigError, "unknown mode '" + std::string(text) + "'");
}

std::size_t Metrics::edge_accesses() const {
  std::size_t s = 0;
  for (const auto& l : layers) s += l.edge_accesses;
  return s;
}

std::size_t Metrics::vertex_accesses() const {
  std::size_t s = 0;
  for (const auto& l : layers) s += l.vertex_accesses;
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void require_layers(const ComputationGraph& cg, std::size_t L) {
  if (cg.num_layers() != L) {
    throw Error(ErrorCode::ConfigError, "computation graph has " +
                                            std::to_string(cg.num_layers()) +
                                            " layers, model has " + std::to_string(L));
  }
}

std::vector<VertexId> in_neighbors_of(const DynamicGraph& g, VertexId v) {
  std::vector<VertexId> out;
  out.reserve(g.in_degree(v));
  for (VertexId u : g.in_neighbors(v)) out.push_back(u);
  return out;
}

// Writes straight into the cache; old values come from the delta log.
template <typename T>
class CommitStore {
 public:
  explicit CommitStore(StateCache<T>& cache) : cache_(cache) {}

  std::span<const T> old_h(std::size_t l, VertexId u) { return cache_.read_old(l, u).h; }
  std::span<const T> new_h(std::size_t l, VertexId u) { return cache_.materialize_h(l, u); }
  std::span<const T> agg(std::size_t l, VertexId v) const { return cache_.agg(l, v); }
  T ctx(std::size_t l, VertexId v) const { return cache_.ctx(l, v); }
  void write(std::size_t l, VertexId v, std::span<const T> a, T c) { cache_.write(l, v, a, c); }

 private:
  StateCache<T>& cache_;
};

// Leaves the cache at its pre-update state and keeps new values aside.
template <typename T>
class OverlayStore {
 public:
  explicit OverlayStore(StateCache<T>& cache)
      : cache_(cache), agg_(cache.num_layers()), h_(cache.num_layers() + 1) {}

  std::span<const T> old_h(std::size_t l, VertexId u) { return cache_.materialize_h(l, u); }

  std::span<const T> new_h(std::size_t l, VertexId u) {
    if (l == 0) return cache_.features().row(u);
    auto& memo = h_[l];
    if (auto it = memo.find(u); it != memo.end()) return it->second;
    std::span<const T> prev = new_h(l - 1, u);
    std::span<const T> a;
    if (auto it = agg_[l - 1].find(u); it != agg_[l - 1].end()) {
      a = it->second.agg;
    } else {
      a = cache_.agg(l - 1, u);
    }
    Vec<T> h(cache_.bundle().output_dim(l - 1));
    cache_.bundle().update(l - 1, prev, a, h);
    return memo.emplace(u, std::move(h)).first->second;
  }

  std::span<const T> agg(std::size_t l, VertexId v) const { return cache_.agg(l, v); }
  T ctx(std::size_t l, VertexId v) const { return cache_.ctx(l, v); }

  void write(std::size_t l, VertexId v, std::span<const T> a, T c) {
    agg_[l][v] = VertexAggregate<T>{Vec<T>(a.begin(), a.end()), c};
    for (std::size_t k = l + 1; k < h_.size(); ++k) h_[k].erase(v);
  }

 private:
  StateCache<T>& cache_;
  std::vector<std::unordered_map<VertexId, VertexAggregate<T>>> agg_;
  std::vector<std::unordered_map<VertexId, Vec<T>>> h_;
};

struct Job {
  VertexId v = 0;
  bool recompute = false;
  std::size_t begin = 0;  // event range in e_curr
  std::size_t end = 0;
};

template <typename T>
using HTable = std::unordered_map<VertexId, std::span<const T>>;

// Reordered update of one destination: undo the old context, fold the signed
// payloads, then apply the new context.
template <typename T, typename Store>
VertexAggregate<T> incremental_vertex(const OperatorBundle<T>& b, const UpdateView& view,
                                      const LayerFrontier& f, std::size_t l, const Job& job,
                                      const Store& store, const HTable<T>& newh,
                                      const HTable<T>& oldh) {
  const VertexId v = job.v;
  const std::size_t adim = b.agg_dim(l);
  const std::size_t in_post = view.in_degree_post(v);
  if (in_post == 0) return {Vec<T>(adim, T(0)), b.empty_context(l)};
  const std::size_t in_pre = view.in_degree_pre(v);

  const std::size_t mdim = b.message_dim(l);
  const std::size_t slots = 2 * (job.end - job.begin);
  Vec<T> mlc(slots * mdim), payload(slots * adim), fnn(b.fnn_dim(l));
  std::vector<Signed<T>> msgs, items;
  msgs.reserve(slots);
  items.reserve(slots);
  std::size_t used = 0;

  auto emit = [&](int sign, std::span<const T> h_u, std::span<const T> h_v, const EdgeMeta& meta) {
    std::span<T> m{mlc.data() + used * mdim, mdim};
    std::span<T> p{payload.data() + used * adim, adim};
    b.ms_local(l, h_u, h_v, meta, m);
    b.f_nn(l, h_u, fnn);
    combine_payload<T>(m, fnn, p);
    msgs.push_back({sign, m});
    items.push_back({sign, p});
    ++used;
  };

  const std::span<const T> hv_new = newh.at(v);
  const std::span<const T> hv_old = oldh.at(v);
  for (std::size_t i = job.begin; i < job.end; ++i) {
    const FrontierEdge& e = f.e_curr[i];
    if (e.kind != EdgeKind::StructInsert) {
      emit(-1, oldh.at(e.src), hv_old, EdgeMeta{view.out_degree_pre(e.src), in_pre});
    }
    if (e.kind != EdgeKind::StructDelete) {
      emit(+1, newh.at(e.src), hv_new, EdgeMeta{view.out_degree_post(e.src), in_post});
    }
  }

  VertexAggregate<T> out;
  out.agg.assign(adim, T(0));
  if (in_pre == 0) {
    out.ctx = b.nbr_ctx(l, b.empty_context(l), msgs);
    b.aggregate(l, out.agg, false, items);
  } else {
    const T ctx_old = store.ctx(l, v);
    out.ctx = b.nbr_ctx(l, ctx_old, msgs);
    auto old = store.agg(l, v);
    std::copy(old.begin(), old.end(), out.agg.begin());
    b.ms_cbn_inv(l, ctx_old, out.agg);
    b.aggregate(l, out.agg, true, items);
  }
  b.ms_cbn(l, out.ctx, out.agg);
  return out;
}

template <typename T, typename Store>
LayerMetrics process_layer(const OperatorBundle<T>& b, const UpdateView& view,
                           const LayerFrontier& f, std::size_t l, Store& store,
                           bool all_recompute, const std::vector<char>* select,
                           const EngineOptions& options) {
  const DynamicGraph& g = view.post();
  std::vector<Job> jobs;
  jobs.reserve(f.v_dst.size());
  std::size_t i = 0;
  for (VertexId v : f.v_dst) {
    while (i < f.e_curr.size() && f.e_curr[i].dst < v) ++i;
    const std::size_t begin = i;
    while (i < f.e_curr.size() && f.e_curr[i].dst == v) ++i;
    if (select && !(*select)[v]) continue;
    const bool recompute =
        all_recompute || std::binary_search(f.recompute.begin(), f.recompute.end(), v);
    jobs.push_back({v, recompute, begin, i});
  }

  HTable<T> newh, oldh;
  auto need_new = [&](VertexId u) {
    if (!newh.count(u)) newh.emplace(u, store.new_h(l, u));
  };
  auto need_old = [&](VertexId u) {
    if (!oldh.count(u)) oldh.emplace(u, store.old_h(l, u));
  };
  std::vector<std::vector<VertexId>> nbrs(jobs.size());
  LayerMetrics metrics;
  metrics.vertex_accesses = jobs.size();
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    need_new(job.v);
    if (job.recompute) {
      nbrs[j] = in_neighbors_of(g, job.v);
      for (VertexId u : nbrs[j]) need_new(u);
      metrics.edge_accesses += nbrs[j].size();
      if (options.per_destination) (*options.per_destination)[job.v] += nbrs[j].size();
    } else {
      need_old(job.v);
      for (std::size_t k = job.begin; k < job.end; ++k) {
        const FrontierEdge& e = f.e_curr[k];
        if (e.kind != EdgeKind::StructDelete) need_new(e.src);
        if (e.kind != EdgeKind::StructInsert) need_old(e.src);
      }
      metrics.edge_accesses += job.end - job.begin;
      if (options.per_destination) (*options.per_destination)[job.v] += job.end - job.begin;
    }
  }

  std::vector<VertexAggregate<T>> results(jobs.size());
  const Store& reader = store;
  auto h_new = [&](VertexId u) { return newh.at(u); };
  auto deg_post = [&](VertexId u) { return g.out_degree(u); };
  parallel_for(jobs.size(), options.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      if (jobs[j].recompute) {
        results[j] = gather_vertex(b, l, jobs[j].v, nbrs[j], h_new, deg_post);
      } else {
        results[j] = incremental_vertex(b, view, f, l, jobs[j], reader, newh, oldh);
      }
    }
  });

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    store.write(l, jobs[j].v, results[j].agg, results[j].ctx);
  }
  return metrics;
}

template <typename T>
void fill_as(Metrics& m, const ComputationGraph& cg) {
  const SubgraphSize as = affected_subgraph_size(cg);
  m.as_edges = as.edges;
  m.as_vertices = as.vertices;
}

template <typename T>
RunResult<T> run_cached(const UpdateView& view, const ComputationGraph& cg, StateCache<T>& cache,
                        bool all_recompute, EngineOptions options) {
  const auto t0 = Clock::now();
  const OperatorBundle<T>& b = cache.bundle();
  const std::size_t L = b.num_layers();
  require_layers(cg, L);
  dense::require_same_dim(view.post().vertex_count(), cache.vertex_count(), "graph vs cache");

  cache.begin_batch();
  if (!all_recompute) {
    for (std::size_t l = 1; l <= L; ++l) {
      for (VertexId v : cg.layers[l - 1].changed) cache.log_old(l, v, view.in_degree_pre(v));
    }
  }
  CommitStore<T> store(cache);
  RunResult<T> r;
  r.metrics.layers.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    r.metrics.layers[l] =
        process_layer(b, view, cg.layers[l], l, store, all_recompute, nullptr, options);
  }
  cache.commit();
  r.changed_final = cg.layers[L - 1].changed;
  fill_as<T>(r.metrics, cg);
  r.metrics.wall_ms = elapsed_ms(t0);
  return r;
}

// Recompute of the final-layer affected vertices from the features, with
// `pick(layer, v)` choosing the in-neighbours visited.
template <typename T, typename Pick>
RunResult<T> run_scope(const UpdateView& view, const ComputationGraph& cg,
                       const OperatorBundle<T>& b, const Matrix<T>& features, Pick&& pick,
                       EngineOptions options) {
  const auto t0 = Clock::now();
  const DynamicGraph& g = view.post();
  const std::size_t L = b.num_layers();
  const std::size_t n = g.vertex_count();
  require_layers(cg, L);
  dense::require_same_dim(features.rows(), n, "features rows");

  // scope[l] lists the vertices whose h^l is needed, ascending.
  std::vector<std::vector<VertexId>> scope(L + 1);
  std::vector<std::vector<std::vector<VertexId>>> nbrs(L);
  scope[L] = cg.layers[L - 1].changed;
  for (std::size_t l = L; l-- > 0;) {
    std::vector<char> mark(n, 0);
    for (VertexId v : scope[l + 1]) mark[v] = 1;
    nbrs[l].resize(scope[l + 1].size());
    for (std::size_t j = 0; j < scope[l + 1].size(); ++j) {
      nbrs[l][j] = pick(l, scope[l + 1][j]);
      for (VertexId u : nbrs[l][j]) mark[u] = 1;
    }
    for (VertexId v = 0; v < n; ++v) {
      if (mark[v]) scope[l].push_back(v);
    }
  }

  RunResult<T> r;
  r.metrics.layers.resize(L);
  Matrix<T> h_prev = features;
  auto deg = [&](VertexId u) { return g.out_degree(u); };
  for (std::size_t l = 0; l < L; ++l) {
    Matrix<T> h_next(n, b.output_dim(l));
    const auto& targets = scope[l + 1];
    auto h = [&](VertexId u) { return h_prev.row(u); };
    parallel_for(targets.size(), options.threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t j = lo; j < hi; ++j) {
        const VertexId v = targets[j];
        VertexAggregate<T> va = gather_vertex(b, l, v, nbrs[l][j], h, deg);
        b.update(l, h_prev.row(v), va.agg, h_next.row(v));
      }
    });
    for (std::size_t j = 0; j < targets.size(); ++j) {
      r.metrics.layers[l].edge_accesses += nbrs[l][j].size();
      if (options.per_destination) (*options.per_destination)[targets[j]] += nbrs[l][j].size();
    }
    r.metrics.layers[l].vertex_accesses = targets.size();
    h_prev = std::move(h_next);
  }
  r.changed_final = scope[L];
  r.vertices = scope[L];
  r.embeddings = Matrix<T>(r.vertices.size(), b.output_dim(L - 1));
  for (std::size_t i = 0; i < r.vertices.size(); ++i) {
    auto src = h_prev.row(r.vertices[i]);
    std::copy(src.begin(), src.end(), r.embeddings.row(i).begin());
  }
  fill_as<T>(r.metrics, cg);
  r.metrics.wall_ms = elapsed_ms(t0);
  return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<VertexId> sample_in_neighbors(const DynamicGraph& graph, VertexId v,
                                          std::size_t layer, std::size_t fanout,
                                          std::uint64_t seed) {
  if (fanout == 0) throw Error(ErrorCode::ConfigError, "fanout must be at least 1");
  std::vector<VertexId> all = in_neighbors_of(graph, v);
  if (all.size() <= fanout) return all;
  std::mt19937_64 rng(splitmix64(splitmix64(splitmix64(seed) ^ layer) ^ v));
  for (std::size_t i = 0; i < fanout; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(fanout);
  std::sort(all.begin(), all.end());
  return all;
}

template <typename T>
RunResult<T> run_full(const DynamicGraph& graph, StateCache<T>& cache, EngineOptions options) {
  const auto t0 = Clock::now();
  if (cache.in_batch()) cache.commit();
  cache.bootstrap(graph, options.threads);
  RunResult<T> r;
  r.metrics.layers.assign(cache.num_layers(),
                          LayerMetrics{graph.edge_count(), graph.vertex_count()});
  r.changed_final.resize(graph.vertex_count());
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    r.changed_final[v] = static_cast<VertexId>(v);
    if (options.per_destination) {
      (*options.per_destination)[v] += cache.num_layers() * graph.in_degree(r.changed_final[v]);
    }
  }
  r.metrics.wall_ms = elapsed_ms(t0);
  return r;
}

template <typename T>
RunResult<T> run_incremental(const UpdateView& view, const ComputationGraph& cg,
                             StateCache<T>& cache, EngineOptions options) {
  return run_cached(view, cg, cache, false, options);
}

template <typename T>
RunResult<T> run_uer(const UpdateView& view, const ComputationGraph& cg, StateCache<T>& cache,
                     EngineOptions options) {
  return run_cached(view, cg, cache, true, options);
}

template <typename T>
RunResult<T> run_fn_khop(const UpdateView& view, const ComputationGraph& cg,
                         const OperatorBundle<T>& bundle, const Matrix<T>& features,
                         EngineOptions options) {
  const DynamicGraph& g = view.post();
  return run_scope<T>(
      view, cg, bundle, features, [&](std::size_t, VertexId v) { return in_neighbors_of(g, v); },
      options);
}

template <typename T>
RunResult<T> run_ns(const UpdateView& view, const ComputationGraph& cg,
                    const OperatorBundle<T>& bundle, const Matrix<T>& features,
                    std::size_t fanout, std::uint64_t seed, EngineOptions options) {
  if (fanout == 0) throw Error(ErrorCode::ConfigError, "fanout must be at least 1");
  const DynamicGraph& g = view.post();
  return run_scope<T>(
      view, cg, bundle, features,
      [&](std::size_t l, VertexId v) { return sample_in_neighbors(g, v, l, fanout, seed); },
      options);
}

template <typename T>
RunResult<T> run_odec(std::span<const VertexId> query, const UpdateView& view,
                      const ComputationGraph& cg, StateCache<T>& cache, EngineOptions options) {
  const auto t0 = Clock::now();
  const DynamicGraph& g = view.post();
  const OperatorBundle<T>& b = cache.bundle();
  const std::size_t L = b.num_layers();
  const std::size_t n = g.vertex_count();
  require_layers(cg, L);
  if (cache.in_batch()) throw Error(ErrorCode::StaleState, "cache is mid-batch");

  std::vector<VertexId> q(query.begin(), query.end());
  for (VertexId v : q) {
    if (v >= n) throw Error(ErrorCode::InvalidVertex, "query vertex " + std::to_string(v));
  }
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());

  // need[l] marks vertices whose h^l the queries depend on.
  std::vector<std::vector<char>> need(L + 1, std::vector<char>(n, 0));
  std::vector<VertexId> frontier = q;
  for (VertexId v : q) need[L][v] = 1;
  for (std::size_t l = L; l-- > 1;) {
    need[l] = need[l + 1];
    for (VertexId v : frontier) {
      for (VertexId u : g.in_neighbors(v)) need[l][u] = 1;
    }
    frontier.clear();
    for (VertexId v = 0; v < n; ++v) {
      if (need[l][v]) frontier.push_back(v);
    }
  }

  OverlayStore<T> store(cache);
  RunResult<T> r;
  r.metrics.layers.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    r.metrics.layers[l] =
        process_layer(b, view, cg.layers[l], l, store, false, &need[l + 1], options);
  }

  r.vertices = q;
  r.embeddings = Matrix<T>(q.size(), b.output_dim(L - 1));
  for (std::size_t i = 0; i < q.size(); ++i) {
    auto h = store.new_h(L, q[i]);
    std::copy(h.begin(), h.end(), r.embeddings.row(i).begin());
  }
  const auto& changed = cg.layers[L - 1].changed;
  std::set_intersection(q.begin(), q.end(), changed.begin(), changed.end(),
                        std::back_inserter(r.changed_final));
  fill_as<T>(r.metrics, cg);
  r.metrics.wall_ms = elapsed_ms(t0);
  return r;
}

template <typename T>
double max_deviation(StateCache<T>& cache, const Matrix<T>& ref) {
  Matrix<T> h = cache.materialize_layer(cache.num_layers());
  return dense::max_abs_diff<T>(h.data(), ref.data());
}

template <typename T>
double max_deviation(const RunResult<T>& result, const Matrix<T>& ref) {
  double worst = 0.0;
  for (std::size_t i = 0; i < result.vertices.size(); ++i) {
    worst = std::max(worst,
                     dense::max_abs_diff<T>(result.embeddings.row(i), ref.row(result.vertices[i])));
  }
  return worst;
}

#define INCRT_INSTANTIATE(T)                                                                     \
  template RunResult<T> run_full<T>(const DynamicGraph&, StateCache<T>&, EngineOptions);         \
  template RunResult<T> run_incremental<T>(const UpdateView&, const ComputationGraph&,           \
                                           StateCache<T>&, EngineOptions);                       \
  template RunResult<T> run_uer<T>(const UpdateView&, const ComputationGraph&, StateCache<T>&,   \
                                   EngineOptions);                                               \
  template RunResult<T> run_fn_khop<T>(const UpdateView&, const ComputationGraph&,               \
                                       const OperatorBundle<T>&, const Matrix<T>&,               \
                                       EngineOptions);                                           \
  template RunResult<T> run_ns<T>(const UpdateView&, const ComputationGraph&,                    \
                                  const OperatorBundle<T>&, const Matrix<T>&, std::size_t,       \
                                  std::uint64_t, EngineOptions);                                 \
  template RunResult<T> run_odec<T>(std::span<const VertexId>, const UpdateView&,                \
                                    const ComputationGraph&, StateCache<T>&, EngineOptions);     \
  template double max_deviation<T>(StateCache<T>&, const Matrix<T>&);                            \
  template double max_deviation<T>(const RunResult<T>&, const Matrix<T>&);

INCRT_INSTANTIATE(float)
INCRT_INSTANTIATE(double)

#undef INCRT_INSTANTIATE

}  // namespace incrt
