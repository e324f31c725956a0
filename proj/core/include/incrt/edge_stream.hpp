// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "incrt/graph_store.hpp"

namespace incrt::edge_stream {

/// Text format, one event per LF-terminated line: `op,src,dst,ts` with op
/// `+` (insert) or `-` (delete) and decimal integers. Snapshots use the same
/// format restricted to `+`.
std::vector<EdgeUpdate> parse(std::istream& is, bool snapshot = false);
std::vector<EdgeUpdate> load(const std::filesystem::path& path, bool snapshot = false);

void write(std::ostream& os, std::span<const EdgeUpdate> events);
void save(const std::filesystem::path& path, std::span<const EdgeUpdate> events);

/// One past the largest vertex id mentioned, or 0 for an empty stream.
std::size_t infer_vertex_count(std::span<const EdgeUpdate> events);

}  // namespace incrt::edge_stream
