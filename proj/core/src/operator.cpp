// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "incrt/operator.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace incrt {

template <typename T>
std::size_t OperatorBundle<T>::agg_dim(std::size_t layer) const {
  const std::size_t m = message_dim(layer);
  const std::size_t f = fnn_dim(layer);
  if (m == 1) return f;
  if (f == 1) return m;
  dense::require_same_dim(m, f, "agg_dim");
  return m;
}

template <typename T>
T OperatorBundle<T>::nbr_ctx(std::size_t layer, T old, std::span<const Signed<T>> messages) const {
  T acc = old;
  for (const auto& m : messages) acc += T(m.sign) * context_term(layer, m.value);
  return acc;
}

template <typename T>
void OperatorBundle<T>::aggregate(std::size_t /*layer*/, std::span<T> acc, bool acc_valid,
                                  std::span<const Signed<T>> items) const {
  if (!acc_valid) std::fill(acc.begin(), acc.end(), T(0));
  for (const auto& item : items) {
    dense::require_same_dim(item.value.size(), acc.size(), "aggregate");
    const T s = T(item.sign);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s * item.value[i];
  }
}

template <typename T>
void combine_payload(std::span<const T> mlc, std::span<const T> fnn, std::span<T> out) {
  if (mlc.size() == 1) {
    dense::require_same_dim(fnn.size(), out.size(), "payload");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mlc[0] * fnn[i];
  } else if (fnn.size() == 1) {
    dense::require_same_dim(mlc.size(), out.size(), "payload");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mlc[i] * fnn[0];
  } else {
    dense::require_same_dim(mlc.size(), fnn.size(), "payload");
    dense::require_same_dim(mlc.size(), out.size(), "payload");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mlc[i] * fnn[i];
  }
}

template <typename T>
Vec<T> compose_message(const OperatorBundle<T>& bundle, std::size_t layer, T nct,
                       std::span<const T> mlc) {
  Vec<T> out(mlc.begin(), mlc.end());
  bundle.ms_cbn(layer, nct, out);
  return out;
}

template <typename T>
Vec<T> invert_context(const OperatorBundle<T>& bundle, std::size_t layer, T nct,
                      std::span<const T> a) {
  Vec<T> out(a.begin(), a.end());
  bundle.ms_cbn_inv(layer, nct, out);
  return out;
}

namespace {

template <typename T>
double scaled_violation(std::span<const T> lhs, std::span<const T> rhs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double r = static_cast<double>(rhs[i]);
    const double d = std::abs(static_cast<double>(lhs[i]) - r) / std::max(1.0, std::abs(r));
    worst = std::max(worst, d);
  }
  return worst;
}

template <typename T>
std::string join(std::span<const T> v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ']';
  return os.str();
}

template <typename T>
void record(ConditionResult& c, double violation, double tol, const std::string& example) {
  c.max_violation = std::max(c.max_violation, violation);
  if (violation > tol && c.passed) {
    c.passed = false;
    c.counterexample = example;
  }
}

}  // namespace

template <typename T>
ConditionReport check_conditions(const OperatorBundle<T>& bundle, std::size_t trials, double tol,
                                 std::uint64_t seed) {
  ConditionReport report;
  report.bundle = std::string(bundle.name());
  report.trials = trials;
  report.tolerance = tol;
  report.conditions[0].name = "nbr_ctx partial == full";
  report.conditions[1].name = "aggregate partial == full";
  report.conditions[2].name = "ms_cbn distributes over aggregate";
  report.conditions[3].name = "ms_cbn invertible and monotone in context";

  // Fixed probe: the multiset {1, 2, 3} split as {1, 2} | {3}.
  {
    const T one[] = {T(1)}, two[] = {T(2)}, three[] = {T(3)};
    std::vector<Signed<T>> all = {{1, one}, {1, two}, {1, three}};
    std::vector<Signed<T>> left = {{1, one}, {1, two}};
    std::vector<Signed<T>> right = {{1, three}};
    T full[1], part[1];
    bundle.aggregate(0, full, false, all);
    bundle.aggregate(0, part, false, left);
    const T left_value = part[0];
    bundle.aggregate(0, part, true, right);
    std::ostringstream ex;
    ex << "aggregate({1, 2, 3}) = " << full[0] << " but aggregate(aggregate({1, 2}) = "
       << left_value << ", {3}) = " << part[0];
    record<T>(report.conditions[1], scaled_violation<T>(part, full), tol, ex.str());
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> positive(0.1, 1.0);
  std::uniform_int_distribution<std::size_t> edge_count(2, 32);
  std::uniform_int_distribution<std::size_t> degree(1, 32);

  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t layer = 0; layer < bundle.num_layers(); ++layer) {
      const std::size_t in = bundle.input_dim(layer);
      const std::size_t mdim = bundle.message_dim(layer);
      const std::size_t fdim = bundle.fnn_dim(layer);
      const std::size_t adim = bundle.agg_dim(layer);
      const std::size_t k = edge_count(rng);
      const std::size_t split = std::uniform_int_distribution<std::size_t>(1, k - 1)(rng);

      Vec<T> h_v(in);
      for (auto& x : h_v) x = T(unit(rng));
      std::vector<Vec<T>> mlc(k, Vec<T>(mdim));
      std::vector<Vec<T>> payload(k, Vec<T>(adim));
      Vec<T> h_u(in), fnn(fdim);
      for (std::size_t i = 0; i < k; ++i) {
        for (auto& x : h_u) x = T(unit(rng));
        EdgeMeta meta{degree(rng), k};
        bundle.ms_local(layer, h_u, h_v, meta, mlc[i]);
        bundle.f_nn(layer, h_u, fnn);
        combine_payload<T>(mlc[i], fnn, payload[i]);
      }
      auto as_signed = [](const std::vector<Vec<T>>& v, std::size_t b, std::size_t e) {
        std::vector<Signed<T>> out;
        for (std::size_t i = b; i < e; ++i) out.push_back({1, v[i]});
        return out;
      };

      // (1)
      {
        const T empty = bundle.empty_context(layer);
        const T full = bundle.nbr_ctx(layer, empty, as_signed(mlc, 0, k));
        const T left = bundle.nbr_ctx(layer, empty, as_signed(mlc, 0, split));
        const T part = bundle.nbr_ctx(layer, left, as_signed(mlc, split, k));
        const T lhs[] = {part}, rhs[] = {full};
        std::ostringstream ex;
        ex << "layer " << layer << ": nbr_ctx over " << k << " messages = " << full
           << ", split at " << split << " gives " << part;
        record<T>(report.conditions[0], scaled_violation<T>(lhs, rhs), tol, ex.str());
      }

      // (2)
      Vec<T> full(adim), part(adim);
      bundle.aggregate(layer, full, false, as_signed(payload, 0, k));
      {
        bundle.aggregate(layer, part, false, as_signed(payload, 0, split));
        bundle.aggregate(layer, part, true, as_signed(payload, split, k));
        std::ostringstream ex;
        ex << "layer " << layer << ": full " << join<T>(full) << " vs partial " << join<T>(part);
        record<T>(report.conditions[1], scaled_violation<T>(part, full), tol, ex.str());
      }

      // (3)
      const T z = bundle.sample_context(layer, rng);
      {
        std::vector<Vec<T>> combined = payload;
        for (auto& c : combined) bundle.ms_cbn(layer, z, c);
        Vec<T> lhs(adim);
        bundle.aggregate(layer, lhs, false, as_signed(combined, 0, k));
        Vec<T> rhs = full;
        bundle.ms_cbn(layer, z, rhs);
        std::ostringstream ex;
        ex << "layer " << layer << ", z = " << z << ": " << join<T>(lhs) << " vs "
           << join<T>(rhs);
        record<T>(report.conditions[2], scaled_violation<T>(lhs, rhs), tol, ex.str());
      }

      // (4)
      {
        Vec<T> round = full;
        bundle.ms_cbn(layer, z, round);
        bundle.ms_cbn_inv(layer, z, round);
        std::ostringstream ex;
        ex << "layer " << layer << ", z = " << z << ": inverse roundtrip drift";
        record<T>(report.conditions[3], scaled_violation<T>(round, full), tol, ex.str());

        const auto direction = bundle.cbn_direction();
        if (direction != CbnDirection::None) {
          T z1 = bundle.sample_context(layer, rng);
          T z2 = bundle.sample_context(layer, rng);
          if (z1 > z2) std::swap(z1, z2);
          if (z1 < z2) {
            Vec<T> m(adim);
            for (auto& x : m) x = T(positive(rng));
            Vec<T> y1 = m, y2 = m;
            bundle.ms_cbn(layer, z1, y1);
            bundle.ms_cbn(layer, z2, y2);
            bool ordered = true;
            for (std::size_t i = 0; i < adim; ++i) {
              ordered = ordered && (direction == CbnDirection::Decreasing ? y1[i] > y2[i]
                                                                          : y1[i] < y2[i]);
            }
            if (!ordered && report.conditions[3].passed) {
              report.conditions[3].passed = false;
              std::ostringstream mex;
              mex << "layer " << layer << ": ms_cbn not strictly ordered between z = " << z1
                  << " and z = " << z2;
              report.conditions[3].counterexample = mex.str();
            }
          }
        }
      }
    }
  }
  return report;
}

template class OperatorBundle<float>;
template class OperatorBundle<double>;
template void combine_payload<float>(std::span<const float>, std::span<const float>,
                                     std::span<float>);
template void combine_payload<double>(std::span<const double>, std::span<const double>,
                                      std::span<double>);
template Vec<float> compose_message<float>(const OperatorBundle<float>&, std::size_t, float,
                                           std::span<const float>);
template Vec<double> compose_message<double>(const OperatorBundle<double>&, std::size_t, double,
                                             std::span<const double>);
template Vec<float> invert_context<float>(const OperatorBundle<float>&, std::size_t, float,
                                          std::span<const float>);
template Vec<double> invert_context<double>(const OperatorBundle<double>&, std::size_t, double,
                                            std::span<const double>);
template ConditionReport check_conditions<float>(const OperatorBundle<float>&, std::size_t,
                                                 double, std::uint64_t);
template ConditionReport check_conditions<double>(const OperatorBundle<double>&, std::size_t,
                                                  double, std::uint64_t);

}  // namespace incrt
