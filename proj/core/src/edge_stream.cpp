// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "incrt/edge_stream.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "incrt/error.hpp"

namespace incrt::edge_stream {
namespace {

template <typename U>
U parse_field(std::string_view text, std::size_t line_no) {
  U value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::FormatError, "edge stream line " + std::to_string(line_no) +
                                            ": bad integer '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<EdgeUpdate> parse(std::istream& is, bool snapshot) {
  std::vector<EdgeUpdate> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string_view rest(line);
    std::string_view fields[4];
    for (int i = 0; i < 4; ++i) {
      auto comma = rest.find(',');
      if (i < 3 && comma == std::string_view::npos) {
        throw Error(ErrorCode::FormatError,
                    "edge stream line " + std::to_string(line_no) + ": expected op,src,dst,ts");
      }
      fields[i] = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (!rest.empty()) {
      throw Error(ErrorCode::FormatError,
                  "edge stream line " + std::to_string(line_no) + ": trailing fields");
    }
    EdgeUpdate u;
    if (fields[0] == "+") {
      u.op = EdgeOp::Insert;
    } else if (fields[0] == "-") {
      if (snapshot) {
        throw Error(ErrorCode::FormatError,
                    "snapshot line " + std::to_string(line_no) + ": deletions not allowed");
      }
      u.op = EdgeOp::Delete;
    } else {
      throw Error(ErrorCode::FormatError,
                  "edge stream line " + std::to_string(line_no) + ": op must be + or -");
    }
    u.src = parse_field<VertexId>(fields[1], line_no);
    u.dst = parse_field<VertexId>(fields[2], line_no);
    u.ts = parse_field<std::uint64_t>(fields[3], line_no);
    out.push_back(u);
  }
  return out;
}

std::vector<EdgeUpdate> load(const std::filesystem::path& path, bool snapshot) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::FormatError, "cannot open edge stream " + path.string());
  return parse(is, snapshot);
}

void write(std::ostream& os, std::span<const EdgeUpdate> events) {
  for (const auto& u : events) {
    os << (u.op == EdgeOp::Insert ? '+' : '-') << ',' << u.src << ',' << u.dst << ',' << u.ts
       << '\n';
  }
}

void save(const std::filesystem::path& path, std::span<const EdgeUpdate> events) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::FormatError, "cannot write edge stream " + path.string());
  write(os, events);
}

std::size_t infer_vertex_count(std::span<const EdgeUpdate> events) {
  std::size_t n = 0;
  for (const auto& u : events) n = std::max<std::size_t>(n, std::max(u.src, u.dst) + std::size_t(1));
  return n;
}

}  // namespace incrt::edge_stream
