// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "incrt/model_zoo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "incrt/parallel.hpp"

namespace incrt {

std::string_view model_name(ModelId id) {
  switch (id) {
    case ModelId::GCN: return "GCN";
    case ModelId::GraphSAGE: return "GraphSAGE";
    case ModelId::PinSAGE: return "PinSAGE";
    case ModelId::GIN: return "GIN";
    case ModelId::MoNet: return "MoNet";
    case ModelId::CommNet: return "CommNet";
    case ModelId::GAT: return "GAT";
    case ModelId::GGCN: return "GGCN";
    case ModelId::AGNN: return "AGNN";
  }
  return "?";
}

ModelId parse_model(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == '-' || c == '_') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  for (ModelId id : kAllModels) {
    std::string candidate;
    for (char c : model_name(id)) {
      candidate.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (candidate == key) return id;
  }
  throw Error(ErrorCode::UnsupportedModel, "unknown model '" + std::string(name) + "'");
}

namespace {

// ---------------------------------------------------------------------------
// Weights

Matrix<double> uniform_matrix(std::size_t rows, std::size_t cols, double bound,
                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix<double> m(rows, cols);
  for (auto& x : m.data()) x = dist(rng);
  return m;
}

double fan_bound(std::size_t fan_in) { return 1.0 / std::sqrt(static_cast<double>(fan_in)); }

void require_matrix(const Matrix<double>& m, std::size_t rows, std::size_t cols,
                    const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::ShapeError, what + ": expected " + std::to_string(rows) + "x" +
                                           std::to_string(cols) + ", got " +
                                           std::to_string(m.rows()) + "x" +
                                           std::to_string(m.cols()));
  }
}

const Matrix<double>& require_extra(const LayerWeights& lw, const std::string& name,
                                    std::size_t rows, std::size_t cols, std::size_t layer) {
  auto it = lw.extra.find(name);
  const std::string where = "layer " + std::to_string(layer) + " " + name;
  if (it == lw.extra.end()) throw Error(ErrorCode::ShapeError, where + ": missing");
  require_matrix(it->second, rows, cols, where);
  return it->second;
}

double require_scalar(const LayerWeights& lw, const std::string& name, std::size_t layer) {
  auto it = lw.scalars.find(name);
  if (it == lw.scalars.end()) {
    throw Error(ErrorCode::ShapeError,
                "layer " + std::to_string(layer) + " scalar " + name + ": missing");
  }
  return it->second;
}

}  // namespace

ModelWeights random_weights(ModelId model, const std::vector<std::size_t>& dims,
                            std::uint64_t seed) {
  if (dims.size() < 2) throw Error(ErrorCode::ShapeError, "need at least two layer dims");
  for (std::size_t d : dims) {
    if (d == 0) throw Error(ErrorCode::ShapeError, "layer dims must be positive");
  }
  std::mt19937_64 rng(seed);
  ModelWeights w;
  w.model = model;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    LayerWeights lw;
    lw.in = dims[l];
    lw.out = dims[l + 1];
    const std::size_t in = lw.in, out = lw.out;
    switch (model) {
      case ModelId::GCN:
      case ModelId::GraphSAGE:
        lw.W = uniform_matrix(out, in, fan_bound(in), rng);
        break;
      case ModelId::PinSAGE:
        lw.extra["Q"] = uniform_matrix(in, in, fan_bound(in), rng);
        lw.extra["q"] = uniform_matrix(1, in, fan_bound(in), rng);
        lw.W = uniform_matrix(out, 2 * in, fan_bound(2 * in), rng);
        break;
      case ModelId::GIN:
        lw.W = uniform_matrix(out, in, fan_bound(in), rng);
        lw.extra["W2"] = uniform_matrix(out, out, fan_bound(out), rng);
        break;
      case ModelId::MoNet: {
        lw.extra["mu"] = uniform_matrix(1, in, 1.0, rng);
        std::uniform_real_distribution<double> width(0.0, 1.0);
        Matrix<double> sigma(1, in);
        for (auto& x : sigma.data()) x = -(1.0 - width(rng));  // in [-1, 0)
        lw.extra["sigma"] = std::move(sigma);
        lw.W = uniform_matrix(out, in, fan_bound(in), rng);
        break;
      }
      case ModelId::CommNet:
        lw.W = uniform_matrix(out, in, fan_bound(in), rng);
        lw.extra["W2"] = uniform_matrix(out, in, fan_bound(in), rng);
        break;
      case ModelId::GAT: {
        lw.W = uniform_matrix(out, in, fan_bound(in), rng);
        Matrix<double> a = uniform_matrix(1, 2 * out, fan_bound(2 * out), rng);
        lw.a.assign(a.data().begin(), a.data().end());
        break;
      }
      case ModelId::GGCN:
        lw.extra["W1"] = uniform_matrix(in, in, fan_bound(in), rng);
        lw.extra["W2"] = uniform_matrix(in, in, fan_bound(in), rng);
        lw.W = uniform_matrix(out, in, fan_bound(in), rng);
        break;
      case ModelId::AGNN: {
        std::uniform_real_distribution<double> beta(0.5, 1.5);
        lw.scalars["w"] = beta(rng);
        lw.W = uniform_matrix(out, in, fan_bound(in), rng);
        break;
      }
    }
    w.layers.push_back(std::move(lw));
  }
  return w;
}

void validate_weights(const ModelWeights& w) {
  if (w.layers.empty()) throw Error(ErrorCode::ShapeError, "weights contain no layers");
  for (std::size_t l = 0; l < w.layers.size(); ++l) {
    const LayerWeights& lw = w.layers[l];
    const std::size_t in = lw.in, out = lw.out;
    if (in == 0 || out == 0) throw Error(ErrorCode::ShapeError, "layer dims must be positive");
    if (l > 0 && w.layers[l - 1].out != in) {
      throw Error(ErrorCode::ShapeError, "layer " + std::to_string(l) + " input dim " +
                                             std::to_string(in) + " does not chain with " +
                                             std::to_string(w.layers[l - 1].out));
    }
    const std::string where = "layer " + std::to_string(l) + " W";
    switch (w.model) {
      case ModelId::GCN:
      case ModelId::GraphSAGE:
        require_matrix(lw.W, out, in, where);
        break;
      case ModelId::PinSAGE:
        require_extra(lw, "Q", in, in, l);
        require_extra(lw, "q", 1, in, l);
        require_matrix(lw.W, out, 2 * in, where);
        break;
      case ModelId::GIN:
        require_matrix(lw.W, out, in, where);
        require_extra(lw, "W2", out, out, l);
        break;
      case ModelId::MoNet:
        require_extra(lw, "mu", 1, in, l);
        for (double s : require_extra(lw, "sigma", 1, in, l).data()) {
          if (!(s < 0.0)) throw Error(ErrorCode::ShapeError, "MoNet sigma entries must be negative");
        }
        require_matrix(lw.W, out, in, where);
        break;
      case ModelId::CommNet:
        require_matrix(lw.W, out, in, where);
        require_extra(lw, "W2", out, in, l);
        break;
      case ModelId::GAT:
        require_matrix(lw.W, out, in, where);
        if (lw.a.size() != 2 * out) {
          throw Error(ErrorCode::ShapeError, "layer " + std::to_string(l) +
                                                 " attention vector must have 2*out entries");
        }
        break;
      case ModelId::GGCN:
        require_extra(lw, "W1", in, in, l);
        require_extra(lw, "W2", in, in, l);
        require_matrix(lw.W, out, in, where);
        break;
      case ModelId::AGNN:
        require_scalar(lw, "w", l);
        require_matrix(lw.W, out, in, where);
        break;
    }
  }
}

namespace {

// ---------------------------------------------------------------------------
// Bundles

template <typename T>
struct CastLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  Matrix<T> W;
  Vec<T> a;
  std::map<std::string, Matrix<T>> extra;
  std::map<std::string, T> scalars;

  const Matrix<T>& x(const std::string& name) const { return extra.at(name); }
};

template <typename T>
class ZooBundle : public OperatorBundle<T> {
 public:
  explicit ZooBundle(const ModelWeights& w) {
    validate_weights(w);
    for (const auto& lw : w.layers) {
      CastLayer<T> c;
      c.in = lw.in;
      c.out = lw.out;
      c.W = lw.W.template cast<T>();
      for (double v : lw.a) c.a.push_back(static_cast<T>(v));
      for (const auto& [k, m] : lw.extra) c.extra.emplace(k, m.template cast<T>());
      for (const auto& [k, s] : lw.scalars) c.scalars.emplace(k, static_cast<T>(s));
      layers_.push_back(std::move(c));
    }
  }

  std::size_t num_layers() const override { return layers_.size(); }
  std::size_t input_dim(std::size_t l) const override { return layers_.at(l).in; }
  std::size_t output_dim(std::size_t l) const override { return layers_.at(l).out; }

  void f_nn(std::size_t /*layer*/, std::span<const T> h_u, std::span<T> out) const override {
    dense::require_same_dim(h_u.size(), out.size(), "f_nn");
    std::copy(h_u.begin(), h_u.end(), out.begin());
  }

 protected:
  const CastLayer<T>& L(std::size_t l) const { return layers_[l]; }

  void relu_linear(const Matrix<T>& w, std::span<const T> x, std::span<T> out) const {
    dense::matvec_into(w, x, out);
    dense::relu_inplace(out);
  }

 private:
  std::vector<CastLayer<T>> layers_;
};

/// Shared pieces of the count-context bundles (mean-style normalisation).
template <typename T>
class CountContextBundle : public ZooBundle<T> {
 public:
  using ZooBundle<T>::ZooBundle;

  CbnDirection cbn_direction() const override { return CbnDirection::Decreasing; }
  T empty_context(std::size_t) const override { return T(0); }
  T context_term(std::size_t, std::span<const T>) const override { return T(1); }

  void ms_cbn(std::size_t, T nct, std::span<T> x) const override {
    if (!(nct > T(0))) throw Error(ErrorCode::SingularContext, "count context must be positive");
    for (T& v : x) v /= nct;
  }
  void ms_cbn_inv(std::size_t, T nct, std::span<T> x) const override {
    if (!(nct > T(0))) throw Error(ErrorCode::SingularContext, "count context must be positive");
    for (T& v : x) v *= nct;
  }
  T sample_context(std::size_t, std::mt19937_64& rng) const override {
    return T(std::uniform_int_distribution<int>(1, 64)(rng));
  }
};

template <typename T>
class GcnBundle final : public CountContextBundle<T> {
 public:
  GcnBundle(const ModelWeights& w, GcnDegree degree)
      : CountContextBundle<T>(w), self_loop_(degree == GcnDegree::SelfLoop) {}

  std::string_view name() const override { return "GCN"; }
  BundleFlags flags() const override { return {false, true, true, false}; }

  void ms_local(std::size_t, std::span<const T>, std::span<const T>, const EdgeMeta& meta,
                std::span<T> out) const override {
    const std::size_t d = meta.src_out_degree + (self_loop_ ? 1 : 0);
    if (d == 0) throw Error(ErrorCode::SingularContext, "GCN source degree is zero");
    out[0] = T(1) / std::sqrt(T(d));
  }
  T empty_context(std::size_t) const override { return self_loop_ ? T(1) : T(0); }

  void ms_cbn(std::size_t, T nct, std::span<T> x) const override {
    if (!(nct > T(0))) throw Error(ErrorCode::SingularContext, "GCN context must be positive");
    const T s = std::sqrt(nct);
    for (T& v : x) v /= s;
  }
  void ms_cbn_inv(std::size_t, T nct, std::span<T> x) const override {
    if (!(nct > T(0))) throw Error(ErrorCode::SingularContext, "GCN context must be positive");
    const T s = std::sqrt(nct);
    for (T& v : x) v *= s;
  }

  void update(std::size_t l, std::span<const T>, std::span<const T> agg,
              std::span<T> out) const override {
    this->relu_linear(this->L(l).W, agg, out);
  }

 private:
  bool self_loop_;
};

template <typename T>
class SageBundle final : public CountContextBundle<T> {
 public:
  using CountContextBundle<T>::CountContextBundle;

  std::string_view name() const override { return "GraphSAGE"; }
  BundleFlags flags() const override { return {false, false, true, false}; }

  void ms_local(std::size_t, std::span<const T>, std::span<const T>, const EdgeMeta&,
                std::span<T> out) const override {
    out[0] = T(1);
  }
  void update(std::size_t l, std::span<const T>, std::span<const T> agg,
              std::span<T> out) const override {
    this->relu_linear(this->L(l).W, agg, out);
  }
};

template <typename T>
class PinSageBundle final : public CountContextBundle<T> {
 public:
  using CountContextBundle<T>::CountContextBundle;

  std::string_view name() const override { return "PinSAGE"; }
  BundleFlags flags() const override { return {false, false, true, true}; }
  std::size_t message_dim(std::size_t l) const override { return this->L(l).in; }
  std::size_t fnn_dim(std::size_t) const override { return 1; }

  void ms_local(std::size_t l, std::span<const T> h_u, std::span<const T>, const EdgeMeta&,
                std::span<T> out) const override {
    const auto& p = this->L(l);
    dense::matvec_into(p.x("Q"), h_u, out);
    auto q = p.x("q").row(0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = dense::relu(out[i] + q[i]);
  }
  void f_nn(std::size_t, std::span<const T>, std::span<T> out) const override { out[0] = T(1); }

  void update(std::size_t l, std::span<const T> h_prev, std::span<const T> agg,
              std::span<T> out) const override {
    Vec<T> cat(h_prev.begin(), h_prev.end());
    cat.insert(cat.end(), agg.begin(), agg.end());
    this->relu_linear(this->L(l).W, cat, out);
  }
};

template <typename T>
class GinBundle final : public ZooBundle<T> {
 public:
  using ZooBundle<T>::ZooBundle;

  std::string_view name() const override { return "GIN"; }
  BundleFlags flags() const override { return {false, false, false, true}; }

  void ms_local(std::size_t, std::span<const T>, std::span<const T>, const EdgeMeta&,
                std::span<T> out) const override {
    out[0] = T(1);
  }
  void update(std::size_t l, std::span<const T> h_prev, std::span<const T> agg,
              std::span<T> out) const override {
    const auto& p = this->L(l);
    Vec<T> s = dense::axpy<T>(T(1), h_prev, agg);
    Vec<T> hidden(p.out);
    this->relu_linear(p.W, s, hidden);
    dense::matvec_into<T>(p.x("W2"), hidden, out);
  }
};

template <typename T>
class MoNetBundle final : public ZooBundle<T> {
 public:
  using ZooBundle<T>::ZooBundle;

  std::string_view name() const override { return "MoNet"; }
  BundleFlags flags() const override { return {false, false, false, false}; }

  void ms_local(std::size_t l, std::span<const T> h_u, std::span<const T>, const EdgeMeta&,
                std::span<T> out) const override {
    const auto& p = this->L(l);
    auto mu = p.x("mu").row(0);
    auto sigma = p.x("sigma").row(0);
    T q = T(0);
    for (std::size_t i = 0; i < h_u.size(); ++i) {
      const T d = h_u[i] - mu[i];
      q += sigma[i] * d * d;
    }
    out[0] = dense::exp_elem(T(0.5) * q);
  }
  void update(std::size_t l, std::span<const T>, std::span<const T> agg,
              std::span<T> out) const override {
    this->relu_linear(this->L(l).W, agg, out);
  }
};

template <typename T>
class CommNetBundle final : public ZooBundle<T> {
 public:
  using ZooBundle<T>::ZooBundle;

  std::string_view name() const override { return "CommNet"; }
  BundleFlags flags() const override { return {false, false, false, true}; }

  void ms_local(std::size_t, std::span<const T>, std::span<const T>, const EdgeMeta&,
                std::span<T> out) const override {
    out[0] = T(1);
  }
  void update(std::size_t l, std::span<const T> h_prev, std::span<const T> agg,
              std::span<T> out) const override {
    const auto& p = this->L(l);
    dense::matvec_into(p.W, h_prev, out);
    Vec<T> other = dense::matvec<T>(p.x("W2"), agg);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += other[i];
  }
};

template <typename T>
class GatBundle final : public ZooBundle<T> {
 public:
  using ZooBundle<T>::ZooBundle;

  std::string_view name() const override { return "GAT"; }
  BundleFlags flags() const override { return {true, false, true, false}; }
  CbnDirection cbn_direction() const override { return CbnDirection::Decreasing; }
  std::size_t fnn_dim(std::size_t l) const override { return this->L(l).out; }

  void ms_local(std::size_t l, std::span<const T> h_u, std::span<const T> h_v, const EdgeMeta&,
                std::span<T> out) const override {
    const auto& p = this->L(l);
    Vec<T> zv = dense::matvec(p.W, h_v);
    Vec<T> zu = dense::matvec(p.W, h_u);
    T e = T(0);
    for (std::size_t i = 0; i < p.out; ++i) e += p.a[i] * zv[i];
    for (std::size_t i = 0; i < p.out; ++i) e += p.a[p.out + i] * zu[i];
    out[0] = dense::exp_elem(dense::leaky_relu(e, T(0.2)));
  }

  T empty_context(std::size_t) const override { return T(0); }
  T context_term(std::size_t, std::span<const T> mlc) const override { return mlc[0]; }

  void ms_cbn(std::size_t, T nct, std::span<T> x) const override {
    if (!(nct > T(0))) throw Error(ErrorCode::SingularContext, "attention sum must be positive");
    for (T& v : x) v /= nct;
  }
  void ms_cbn_inv(std::size_t, T nct, std::span<T> x) const override {
    if (!(nct > T(0))) throw Error(ErrorCode::SingularContext, "attention sum must be positive");
    for (T& v : x) v *= nct;
  }
  T sample_context(std::size_t, std::mt19937_64& rng) const override {
    return T(std::uniform_real_distribution<double>(1e-3, 10.0)(rng));
  }

  void f_nn(std::size_t l, std::span<const T> h_u, std::span<T> out) const override {
    dense::matvec_into(this->L(l).W, h_u, out);
  }
  void update(std::size_t, std::span<const T>, std::span<const T> agg,
              std::span<T> out) const override {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = dense::elu(agg[i]);
  }
};

template <typename T>
class GgcnBundle final : public ZooBundle<T> {
 public:
  using ZooBundle<T>::ZooBundle;

  std::string_view name() const override { return "GGCN"; }
  BundleFlags flags() const override { return {true, false, false, false}; }
  std::size_t message_dim(std::size_t l) const override { return this->L(l).in; }

  void ms_local(std::size_t l, std::span<const T> h_u, std::span<const T> h_v, const EdgeMeta&,
                std::span<T> out) const override {
    const auto& p = this->L(l);
    dense::matvec_into(p.x("W1"), h_u, out);
    Vec<T> dv = dense::matvec(p.x("W2"), h_v);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = dense::sigmoid(out[i] + dv[i]);
  }
  void update(std::size_t l, std::span<const T>, std::span<const T> agg,
              std::span<T> out) const override {
    this->relu_linear(this->L(l).W, agg, out);
  }
};

template <typename T>
class AgnnBundle final : public ZooBundle<T> {
 public:
  using ZooBundle<T>::ZooBundle;

  std::string_view name() const override { return "AGNN"; }
  BundleFlags flags() const override { return {true, false, false, false}; }

  void ms_local(std::size_t l, std::span<const T> h_u, std::span<const T> h_v, const EdgeMeta&,
                std::span<T> out) const override {
    const T nu = dense::norm2(h_u);
    const T nv = dense::norm2(h_v);
    const T w = this->L(l).scalars.at("w");
    out[0] = (nu == T(0) || nv == T(0)) ? T(0) : w * dense::dot(h_u, h_v) / (nu * nv);
  }
  void update(std::size_t l, std::span<const T>, std::span<const T> agg,
              std::span<T> out) const override {
    this->relu_linear(this->L(l).W, agg, out);
  }
};

template <typename T>
class RawMeanBundle final : public OperatorBundle<T> {
 public:
  explicit RawMeanBundle(std::size_t dim) : dim_(dim) {}

  std::string_view name() const override { return "raw-mean"; }
  BundleFlags flags() const override { return {}; }
  std::size_t num_layers() const override { return 1; }
  std::size_t input_dim(std::size_t) const override { return dim_; }
  std::size_t output_dim(std::size_t) const override { return dim_; }

  void ms_local(std::size_t, std::span<const T>, std::span<const T>, const EdgeMeta&,
                std::span<T> out) const override {
    out[0] = T(1);
  }
  void aggregate(std::size_t, std::span<T> acc, bool acc_valid,
                 std::span<const Signed<T>> items) const override {
    Vec<T> sum(acc.size(), T(0));
    std::size_t count = 0;
    if (acc_valid) {
      std::copy(acc.begin(), acc.end(), sum.begin());
      count = 1;
    }
    for (const auto& item : items) {
      dense::require_same_dim(item.value.size(), acc.size(), "aggregate");
      for (std::size_t i = 0; i < acc.size(); ++i) sum[i] += T(item.sign) * item.value[i];
      ++count;
    }
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = count ? sum[i] / T(count) : T(0);
  }
  void f_nn(std::size_t, std::span<const T> h_u, std::span<T> out) const override {
    std::copy(h_u.begin(), h_u.end(), out.begin());
  }
  void update(std::size_t, std::span<const T>, std::span<const T> agg,
              std::span<T> out) const override {
    std::copy(agg.begin(), agg.end(), out.begin());
  }

 private:
  std::size_t dim_;
};

}  // namespace

template <typename T>
std::unique_ptr<OperatorBundle<T>> make_bundle(const ModelWeights& w, BundleOptions options) {
  switch (w.model) {
    case ModelId::GCN: return std::make_unique<GcnBundle<T>>(w, options.gcn_degree);
    case ModelId::GraphSAGE: return std::make_unique<SageBundle<T>>(w);
    case ModelId::PinSAGE: return std::make_unique<PinSageBundle<T>>(w);
    case ModelId::GIN: return std::make_unique<GinBundle<T>>(w);
    case ModelId::MoNet: return std::make_unique<MoNetBundle<T>>(w);
    case ModelId::CommNet: return std::make_unique<CommNetBundle<T>>(w);
    case ModelId::GAT: return std::make_unique<GatBundle<T>>(w);
    case ModelId::GGCN: return std::make_unique<GgcnBundle<T>>(w);
    case ModelId::AGNN: return std::make_unique<AgnnBundle<T>>(w);
  }
  throw Error(ErrorCode::UnsupportedModel, "unknown model id");
}

template <typename T>
std::unique_ptr<OperatorBundle<T>> make_bundle(ModelId model, const std::vector<std::size_t>& dims,
                                               std::uint64_t seed, BundleOptions options) {
  return make_bundle<T>(random_weights(model, dims, seed), options);
}

template <typename T>
std::unique_ptr<OperatorBundle<T>> make_raw_mean_bundle(std::size_t dim) {
  return std::make_unique<RawMeanBundle<T>>(dim);
}

template <typename T>
LayerOutput<T> forward_layer_reference(const OperatorBundle<T>& bundle, const DynamicGraph& graph,
                                       const Matrix<T>& h_prev, std::size_t layer,
                                       std::size_t threads) {
  const std::size_t n = graph.vertex_count();
  dense::require_same_dim(h_prev.rows(), n, "forward_layer_reference rows");
  dense::require_same_dim(h_prev.cols(), bundle.input_dim(layer), "forward_layer_reference cols");
  LayerOutput<T> out{Matrix<T>(n, bundle.agg_dim(layer)), Vec<T>(n),
                     Matrix<T>(n, bundle.output_dim(layer))};
  auto h = [&](VertexId u) { return h_prev.row(u); };
  auto deg = [&](VertexId u) { return graph.out_degree(u); };
  parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
    std::vector<VertexId> nbrs;
    for (std::size_t i = b; i < e; ++i) {
      const auto v = static_cast<VertexId>(i);
      nbrs.clear();
      for (VertexId u : graph.in_neighbors(v)) nbrs.push_back(u);
      VertexAggregate<T> va = gather_vertex(bundle, layer, v, nbrs, h, deg);
      std::copy(va.agg.begin(), va.agg.end(), out.agg.row(v).begin());
      out.ctx[v] = va.ctx;
      bundle.update(layer, h_prev.row(v), out.agg.row(v), out.h.row(v));
    }
  });
  return out;
}

template <typename T>
std::vector<Matrix<T>> forward_reference(const OperatorBundle<T>& bundle,
                                         const DynamicGraph& graph, const Matrix<T>& features,
                                         std::size_t threads) {
  std::vector<Matrix<T>> hs;
  hs.push_back(features);
  for (std::size_t l = 0; l < bundle.num_layers(); ++l) {
    hs.push_back(forward_layer_reference(bundle, graph, hs.back(), l, threads).h);
  }
  return hs;
}

template <typename T>
Matrix<T> random_features(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix<T> m(n, dim);
  for (auto& x : m.data()) x = static_cast<T>(dist(rng));
  return m;
}

#define INCRT_INSTANTIATE(T)                                                                    \
  template std::unique_ptr<OperatorBundle<T>> make_bundle<T>(const ModelWeights&,               \
                                                             BundleOptions);                    \
  template std::unique_ptr<OperatorBundle<T>> make_bundle<T>(                                   \
      ModelId, const std::vector<std::size_t>&, std::uint64_t, BundleOptions);                  \
  template std::unique_ptr<OperatorBundle<T>> make_raw_mean_bundle<T>(std::size_t);             \
  template LayerOutput<T> forward_layer_reference<T>(const OperatorBundle<T>&,                  \
                                                     const DynamicGraph&, const Matrix<T>&,     \
                                                     std::size_t, std::size_t);                 \
  template std::vector<Matrix<T>> forward_reference<T>(const OperatorBundle<T>&,                \
                                                       const DynamicGraph&, const Matrix<T>&,   \
                                                       std::size_t);                            \
  template Matrix<T> random_features<T>(std::size_t, std::size_t, std::uint64_t);

INCRT_INSTANTIATE(float)
INCRT_INSTANTIATE(double)

#undef INCRT_INSTANTIATE

}  // namespace incrt
