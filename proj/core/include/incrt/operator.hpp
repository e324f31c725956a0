// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "incrt/dense.hpp"

namespace incrt {

/// Capability flags the engines and frontier builder dispatch on.
struct BundleFlags {
  /// ms_local reads the destination embedding; a destination whose own
  /// previous-layer embedding changed must be recomputed from its full
  /// neighbourhood.
  bool dest_dependent = false;
  /// ms_local reads the source out-degree, so a degree change invalidates
  /// every outgoing message of that source.
  bool src_degree_dependent = false;
  /// The bundle carries a non-trivial neighbour context (count, attention sum).
  bool has_nbr_ctx = false;
  /// update() reads the vertex's own previous-layer embedding, so a change of
  /// h^{l-1}_v alone changes h^l_v.
  bool update_uses_self = false;
};

/// Ordering of ms_cbn(z, m) in the scalar context z for fixed positive m.
enum class CbnDirection { None, Increasing, Decreasing };

/// Per-edge structural metadata handed to ms_local.
struct EdgeMeta {
  std::size_t src_out_degree = 0;
  std::size_t dst_in_degree = 0;
};

/// A signed value: +1 adds a contribution, -1 cancels an outdated one.
template <typename T>
struct Signed {
  int sign = 1;
  std::span<const T> value;
};

/// One GNN layer decomposed into seven operators:
///
///   mlc_uv = ms_local(h_u, h_v)                     per edge
///   nct_v  = nbr_ctx({mlc_uv})                      per destination
///   msg_uv = ms_cbn(nct_v, mlc_uv)
///   a_v    = aggregate({msg_uv * f_nn(h_u)})
///   h_v    = update(h_v, a_v)
///
/// plus ms_cbn_inv, the inverse of ms_cbn in its second argument. Contexts
/// are scalars. Local messages are either scalars (message_dim == 1) or
/// vectors; the per-edge payload mlc * f_nn(h_u) broadcasts a dimension-1
/// operand.
///
/// Layer indices are zero-based. Bundles are immutable after construction and
/// every method is safe to call concurrently.
template <typename T>
class OperatorBundle {
 public:
  virtual ~OperatorBundle() = default;

  virtual std::string_view name() const = 0;
  virtual BundleFlags flags() const = 0;
  virtual CbnDirection cbn_direction() const { return CbnDirection::None; }

  virtual std::size_t num_layers() const = 0;
  virtual std::size_t input_dim(std::size_t layer) const = 0;
  virtual std::size_t output_dim(std::size_t layer) const = 0;
  virtual std::size_t message_dim(std::size_t /*layer*/) const { return 1; }
  virtual std::size_t fnn_dim(std::size_t layer) const { return input_dim(layer); }
  std::size_t agg_dim(std::size_t layer) const;

  virtual void ms_local(std::size_t layer, std::span<const T> h_u, std::span<const T> h_v,
                        const EdgeMeta& meta, std::span<T> out) const = 0;

  /// Context of an empty neighbourhood.
  virtual T empty_context(std::size_t /*layer*/) const { return T(1); }
  /// Amount one edge with local message `mlc` adds to the context.
  virtual T context_term(std::size_t /*layer*/, std::span<const T> /*mlc*/) const { return T(0); }
  /// Partial context update: folds signed local messages into `old`.
  virtual T nbr_ctx(std::size_t layer, T old, std::span<const Signed<T>> messages) const;

  virtual void ms_cbn(std::size_t /*layer*/, T /*nct*/, std::span<T> /*x*/) const {}
  virtual void ms_cbn_inv(std::size_t /*layer*/, T /*nct*/, std::span<T> /*x*/) const {}

  /// Folds signed contributions into `acc`. When `acc_valid` is false the
  /// accumulator content is ignored and the result covers `items` only.
  virtual void aggregate(std::size_t layer, std::span<T> acc, bool acc_valid,
                         std::span<const Signed<T>> items) const;

  virtual void f_nn(std::size_t layer, std::span<const T> h_u, std::span<T> out) const = 0;
  virtual void update(std::size_t layer, std::span<const T> h_prev, std::span<const T> agg,
                      std::span<T> out) const = 0;

  /// Draws a context from the operator's valid domain (used by the
  /// condition checker).
  virtual T sample_context(std::size_t layer, std::mt19937_64& /*rng*/) const {
    return empty_context(layer);
  }
};

/// payload = mlc * f_nn(h_u), broadcasting a length-1 operand.
template <typename T>
void combine_payload(std::span<const T> mlc, std::span<const T> fnn, std::span<T> out);

/// msg = ms_cbn(nct, mlc)
template <typename T>
Vec<T> compose_message(const OperatorBundle<T>& bundle, std::size_t layer, T nct,
                       std::span<const T> mlc);

/// a_hat = ms_cbn_inv(nct, a)
template <typename T>
Vec<T> invert_context(const OperatorBundle<T>& bundle, std::size_t layer, T nct,
                      std::span<const T> a);

struct ConditionResult {
  std::string name;
  double max_violation = 0.0;
  bool passed = true;
  std::string counterexample;  // first failing instance, if any
};

/// Outcome of numerically probing the four reordering conditions:
///   1. nbr_ctx(Ml u Mr) == nbr_ctx(nbr_ctx(Ml), Mr)
///   2. aggregate(Xl u Xr) == aggregate(aggregate(Xl), Xr)
///   3. aggregate({ms_cbn(z, m)}) == ms_cbn(z, aggregate({m}))
///   4. ms_cbn_inv(z, ms_cbn(z, x)) == x, and ms_cbn monotone in z
struct ConditionReport {
  std::string bundle;
  std::size_t trials = 0;
  double tolerance = 0.0;
  std::array<ConditionResult, 4> conditions;

  bool passed() const {
    for (const auto& c : conditions) {
      if (!c.passed) return false;
    }
    return true;
  }
};

/// Violations are measured as |lhs - rhs| / max(1, |rhs|) element-wise.
/// Every layer of the bundle is probed in each trial; condition 2 also runs
/// a fixed probe on the scalar multiset {1, 2, 3} split as {1, 2} | {3}.
template <typename T>
ConditionReport check_conditions(const OperatorBundle<T>& bundle, std::size_t trials, double tol,
                                 std::uint64_t seed);

}  // namespace incrt
