// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <vector>

namespace incrt {

using VertexId = std::uint32_t;

struct PmaConfig {
  std::size_t segment_size = 64;
  double min_density = 0.25;   // root lower bound; leaves may go to half of it
  double max_density = 0.875;  // root upper bound; leaves may fill completely
};

/// Packed-memory-array adjacency: every neighbour run of every vertex lives
/// in one gapped sorted array of 64-bit keys. Each vertex owns a sentinel
/// key that precedes its run, so a run is "everything after my sentinel up
/// to the next sentinel". The array is split into fixed-size segments whose
/// elements are packed to the left; an implicit binary tree over segments
/// drives rebalancing with density thresholds that tighten towards the root.
class AdjacencyPma {
 public:
  explicit AdjacencyPma(std::size_t vertex_count = 0, PmaConfig config = {});

  /// Replaces the content with the given (vertex, neighbour) pairs.
  /// Pairs need not be sorted; duplicates are ignored.
  void build(std::span<const std::pair<VertexId, VertexId>> pairs);

  bool insert(VertexId v, VertexId nbr);
  bool erase(VertexId v, VertexId nbr);
  bool contains(VertexId v, VertexId nbr) const;

  std::size_t vertex_count() const noexcept { return vertex_segment_.size(); }
  std::size_t size() const noexcept { return edge_count_; }
  std::size_t capacity() const noexcept { return slots_.size(); }
  std::size_t segment_count() const noexcept { return counts_.size(); }
  std::size_t segment_size() const noexcept { return config_.segment_size; }
  std::size_t segment_fill(std::size_t s) const { return counts_[s]; }
  const PmaConfig& config() const noexcept { return config_; }

  /// Elements (edges plus sentinels) over capacity.
  double density() const noexcept;

  /// Checks ordering, sentinel bookkeeping and density bounds; returns an
  /// empty string when consistent, otherwise a description of the first
  /// violation. Intended for tests.
  std::string check_invariants() const;

  class Iterator {
   public:
    using value_type = VertexId;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::forward_iterator_tag;

    Iterator() = default;
    VertexId operator*() const;
    Iterator& operator++();
    Iterator operator++(int) {
      auto tmp = *this;
      ++*this;
      return tmp;
    }
    bool operator==(std::default_sentinel_t) const noexcept { return done_; }
    bool operator==(const Iterator& o) const noexcept {
      return done_ == o.done_ && (done_ || (seg_ == o.seg_ && idx_ == o.idx_));
    }

   private:
    friend class AdjacencyPma;
    Iterator(const AdjacencyPma* pma, std::size_t seg, std::size_t idx);
    void settle();

    const AdjacencyPma* pma_ = nullptr;
    std::size_t seg_ = 0;
    std::size_t idx_ = 0;
    bool done_ = true;
  };

  class Range {
   public:
    Iterator begin() const { return first_; }
    std::default_sentinel_t end() const { return {}; }

   private:
    friend class AdjacencyPma;
    explicit Range(Iterator first) : first_(first) {}
    Iterator first_;
  };

  /// Neighbours of v in ascending id order.
  Range neighbors(VertexId v) const;

 private:
  static constexpr std::uint64_t sentinel_key(VertexId v) { return std::uint64_t(v) << 32; }
  static constexpr std::uint64_t edge_key(VertexId v, VertexId n) {
    return (std::uint64_t(v) << 32) | (std::uint64_t(n) + 1);
  }
  static constexpr bool is_sentinel(std::uint64_t key) { return (key & 0xffffffffULL) == 0; }

  std::uint64_t* seg_begin(std::size_t s) { return slots_.data() + s * config_.segment_size; }
  const std::uint64_t* seg_begin(std::size_t s) const {
    return slots_.data() + s * config_.segment_size;
  }

  std::size_t tree_height() const noexcept;
  double upper_threshold(std::size_t height) const noexcept;
  double lower_threshold(std::size_t height) const noexcept;

  // Segment into which `key` (owned by vertex v) should be inserted.
  std::size_t locate_insert(VertexId v, std::uint64_t key) const;
  // Segment holding `key`, or npos.
  std::size_t locate_existing(VertexId v, std::uint64_t key) const;

  void insert_key(VertexId v, std::uint64_t key);
  void rebalance_for_insert(std::size_t seg);
  void rebalance_after_erase(std::size_t seg);
  void redistribute(std::size_t first_seg, std::size_t seg_count, std::vector<std::uint64_t>& scratch);
  void resize_segments(std::size_t new_segment_count);
  void layout(std::span<const std::uint64_t> sorted_keys, std::size_t segment_count);

  PmaConfig config_;
  std::vector<std::uint64_t> slots_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint32_t> vertex_segment_;
  std::size_t element_count_ = 0;  // edges + sentinels
  std::size_t edge_count_ = 0;
};

}  // namespace incrt
