// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "incrt/pma.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "incrt/error.hpp"

namespace incrt {

AdjacencyPma::AdjacencyPma(std::size_t vertex_count, PmaConfig config) : config_(config) {
  if (config_.segment_size < 4 || !std::has_single_bit(config_.segment_size)) {
    throw Error(ErrorCode::ConfigError, "pma: segment size must be a power of two >= 4");
  }
  if (!(config_.min_density > 0.0 && config_.min_density < config_.max_density &&
        config_.max_density < 1.0)) {
    throw Error(ErrorCode::ConfigError, "pma: density bounds must satisfy 0 < min < max < 1");
  }
  if (vertex_count >= (std::size_t(1) << 32) - 1) {
    throw Error(ErrorCode::ConfigError, "pma: vertex universe too large");
  }
  vertex_segment_.assign(vertex_count, 0);
  build({});
}

void AdjacencyPma::build(std::span<const std::pair<VertexId, VertexId>> pairs) {
  std::vector<std::uint64_t> keys;
  keys.reserve(pairs.size() + vertex_count());
  for (std::size_t v = 0; v < vertex_count(); ++v) keys.push_back(sentinel_key(VertexId(v)));
  for (auto [v, n] : pairs) {
    if (v >= vertex_count() || n >= vertex_count()) {
      throw Error(ErrorCode::InvalidVertex, "pma: vertex out of range");
    }
    keys.push_back(edge_key(v, n));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  const double target = 0.5 * (config_.min_density + config_.max_density);
  std::size_t segs = 1;
  while (double(keys.size()) > target * double(segs * config_.segment_size)) segs *= 2;
  layout(keys, segs);
  edge_count_ = keys.size() - vertex_count();
}

void AdjacencyPma::layout(std::span<const std::uint64_t> sorted_keys, std::size_t segment_count) {
  const std::size_t seg = config_.segment_size;
  slots_.assign(segment_count * seg, 0);
  counts_.assign(segment_count, 0);
  const std::size_t n = sorted_keys.size();
  std::size_t next = 0;
  for (std::size_t s = 0; s < segment_count; ++s) {
    std::size_t take = (s + 1) * n / segment_count - s * n / segment_count;
    std::uint64_t* dst = seg_begin(s);
    for (std::size_t i = 0; i < take; ++i) {
      std::uint64_t key = sorted_keys[next++];
      dst[i] = key;
      if (is_sentinel(key)) vertex_segment_[key >> 32] = std::uint32_t(s);
    }
    counts_[s] = std::uint32_t(take);
  }
  element_count_ = n;
}

double AdjacencyPma::density() const noexcept {
  return slots_.empty() ? 0.0 : double(element_count_) / double(slots_.size());
}

std::size_t AdjacencyPma::tree_height() const noexcept {
  return std::size_t(std::countr_zero(counts_.size()));
}

double AdjacencyPma::upper_threshold(std::size_t height) const noexcept {
  const std::size_t h_max = tree_height();
  const double t = h_max == 0 ? 1.0 : double(height) / double(h_max);
  return 1.0 + (config_.max_density - 1.0) * t;
}

double AdjacencyPma::lower_threshold(std::size_t height) const noexcept {
  const std::size_t h_max = tree_height();
  const double t = h_max == 0 ? 1.0 : double(height) / double(h_max);
  const double leaf = 0.5 * config_.min_density;
  return leaf + (config_.min_density - leaf) * t;
}

std::size_t AdjacencyPma::locate_insert(VertexId v, std::uint64_t key) const {
  std::size_t result = vertex_segment_[v];
  for (std::size_t t = result + 1; t < counts_.size(); ++t) {
    if (counts_[t] == 0) continue;
    if (seg_begin(t)[0] < key) {
      result = t;
    } else {
      break;
    }
  }
  return result;
}

std::size_t AdjacencyPma::locate_existing(VertexId v, std::uint64_t key) const {
  std::size_t result = vertex_segment_[v];
  for (std::size_t t = result + 1; t < counts_.size(); ++t) {
    if (counts_[t] == 0) continue;
    if (seg_begin(t)[0] <= key) {
      result = t;
    } else {
      break;
    }
  }
  const std::uint64_t* b = seg_begin(result);
  const std::uint64_t* e = b + counts_[result];
  const std::uint64_t* it = std::lower_bound(b, e, key);
  if (it != e && *it == key) return result;
  return static_cast<std::size_t>(-1);
}

bool AdjacencyPma::contains(VertexId v, VertexId nbr) const {
  if (v >= vertex_count() || nbr >= vertex_count()) {
    throw Error(ErrorCode::InvalidVertex, "pma: vertex out of range");
  }
  return locate_existing(v, edge_key(v, nbr)) != static_cast<std::size_t>(-1);
}

bool AdjacencyPma::insert(VertexId v, VertexId nbr) {
  if (contains(v, nbr)) return false;
  insert_key(v, edge_key(v, nbr));
  ++edge_count_;
  return true;
}

void AdjacencyPma::insert_key(VertexId v, std::uint64_t key) {
  const std::size_t seg = config_.segment_size;
  std::size_t s = locate_insert(v, key);
  if (counts_[s] >= seg) {
    rebalance_for_insert(s);
    s = locate_insert(v, key);
  }
  std::uint64_t* b = seg_begin(s);
  std::uint64_t* e = b + counts_[s];
  std::uint64_t* pos = std::lower_bound(b, e, key);
  std::move_backward(pos, e, e + 1);
  *pos = key;
  ++counts_[s];
  ++element_count_;
  if (density() > config_.max_density) resize_segments(counts_.size() * 2);
}

void AdjacencyPma::rebalance_for_insert(std::size_t s) {
  const std::size_t seg = config_.segment_size;
  const std::size_t h_max = tree_height();
  std::vector<std::uint64_t> scratch;
  for (std::size_t h = 1; h <= h_max; ++h) {
    const std::size_t m = std::size_t(1) << h;
    const std::size_t first = (s / m) * m;
    std::size_t count = 0;
    for (std::size_t t = first; t < first + m; ++t) count += counts_[t];
    const double limit = std::min(upper_threshold(h) * double(m * seg), double(m * (seg - 1)));
    if (double(count + 1) <= limit) {
      redistribute(first, m, scratch);
      return;
    }
  }
  resize_segments(counts_.size() * 2);
}

bool AdjacencyPma::erase(VertexId v, VertexId nbr) {
  if (v >= vertex_count() || nbr >= vertex_count()) {
    throw Error(ErrorCode::InvalidVertex, "pma: vertex out of range");
  }
  const std::uint64_t key = edge_key(v, nbr);
  const std::size_t s = locate_existing(v, key);
  if (s == static_cast<std::size_t>(-1)) return false;
  std::uint64_t* b = seg_begin(s);
  std::uint64_t* e = b + counts_[s];
  std::uint64_t* pos = std::lower_bound(b, e, key);
  std::move(pos + 1, e, pos);
  --counts_[s];
  --element_count_;
  --edge_count_;

  if (counts_.size() > 1 && density() < config_.min_density) {
    resize_segments(counts_.size() / 2);
  } else if (double(counts_[s]) < lower_threshold(0) * double(config_.segment_size)) {
    rebalance_after_erase(s);
  }
  return true;
}

void AdjacencyPma::rebalance_after_erase(std::size_t s) {
  const std::size_t seg = config_.segment_size;
  const std::size_t h_max = tree_height();
  std::vector<std::uint64_t> scratch;
  for (std::size_t h = 1; h <= h_max; ++h) {
    const std::size_t m = std::size_t(1) << h;
    const std::size_t first = (s / m) * m;
    std::size_t count = 0;
    for (std::size_t t = first; t < first + m; ++t) count += counts_[t];
    if (double(count) >= lower_threshold(h) * double(m * seg)) {
      redistribute(first, m, scratch);
      return;
    }
  }
}

void AdjacencyPma::redistribute(std::size_t first_seg, std::size_t seg_count,
                                std::vector<std::uint64_t>& scratch) {
  scratch.clear();
  for (std::size_t t = first_seg; t < first_seg + seg_count; ++t) {
    const std::uint64_t* b = seg_begin(t);
    scratch.insert(scratch.end(), b, b + counts_[t]);
  }
  const std::size_t n = scratch.size();
  std::size_t next = 0;
  for (std::size_t i = 0; i < seg_count; ++i) {
    const std::size_t s = first_seg + i;
    const std::size_t take = (i + 1) * n / seg_count - i * n / seg_count;
    std::uint64_t* dst = seg_begin(s);
    for (std::size_t k = 0; k < take; ++k) {
      const std::uint64_t key = scratch[next++];
      dst[k] = key;
      if (is_sentinel(key)) vertex_segment_[key >> 32] = std::uint32_t(s);
    }
    counts_[s] = std::uint32_t(take);
  }
}

void AdjacencyPma::resize_segments(std::size_t new_segment_count) {
  new_segment_count = std::max<std::size_t>(1, new_segment_count);
  std::vector<std::uint64_t> all;
  all.reserve(element_count_);
  for (std::size_t t = 0; t < counts_.size(); ++t) {
    const std::uint64_t* b = seg_begin(t);
    all.insert(all.end(), b, b + counts_[t]);
  }
  layout(all, new_segment_count);
}

std::string AdjacencyPma::check_invariants() const {
  std::size_t elements = 0;
  bool have_prev = false;
  std::uint64_t prev = 0;
  for (std::size_t s = 0; s < counts_.size(); ++s) {
    if (counts_[s] > config_.segment_size) return "segment overfull";
    const std::uint64_t* b = seg_begin(s);
    for (std::size_t i = 0; i < counts_[s]; ++i) {
      if (have_prev && b[i] <= prev) return "keys not strictly increasing";
      if (is_sentinel(b[i]) && vertex_segment_[b[i] >> 32] != s) return "stale sentinel segment";
      prev = b[i];
      have_prev = true;
    }
    elements += counts_[s];
  }
  if (elements != element_count_) return "element count mismatch";
  if (element_count_ != edge_count_ + vertex_count()) return "edge count mismatch";
  if (density() > config_.max_density + 1e-12) return "density above upper bound";
  if (counts_.size() > 1 && density() < config_.min_density - 1e-12) {
    return "density below lower bound";
  }
  return {};
}

AdjacencyPma::Range AdjacencyPma::neighbors(VertexId v) const {
  if (v >= vertex_count()) throw Error(ErrorCode::InvalidVertex, "pma: vertex out of range");
  const std::size_t s = vertex_segment_[v];
  const std::uint64_t* b = seg_begin(s);
  const std::uint64_t* e = b + counts_[s];
  const std::uint64_t* it = std::lower_bound(b, e, sentinel_key(v));
  return Range(Iterator(this, s, std::size_t(it - b) + 1));
}

AdjacencyPma::Iterator::Iterator(const AdjacencyPma* pma, std::size_t seg, std::size_t idx)
    : pma_(pma), seg_(seg), idx_(idx), done_(false) {
  settle();
}

void AdjacencyPma::Iterator::settle() {
  while (seg_ < pma_->counts_.size() && idx_ >= pma_->counts_[seg_]) {
    ++seg_;
    idx_ = 0;
  }
  if (seg_ >= pma_->counts_.size() || is_sentinel(pma_->seg_begin(seg_)[idx_])) done_ = true;
}

VertexId AdjacencyPma::Iterator::operator*() const {
  return VertexId((pma_->seg_begin(seg_)[idx_] & 0xffffffffULL) - 1);
}

AdjacencyPma::Iterator& AdjacencyPma::Iterator::operator++() {
  ++idx_;
  settle();
  return *this;
}

}  // namespace incrt
