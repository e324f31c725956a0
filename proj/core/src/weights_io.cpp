// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "incrt/model_zoo.hpp"
#include "json.hpp"

namespace incrt {

using nlohmann::json;

namespace {

Matrix<double> matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::FormatError, what + ": expected rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  std::vector<double> data;
  data.reserve(rows * cols);
  for (const auto& r : j) {
    if (!r.is_array() || r.size() != cols) {
      throw Error(ErrorCode::FormatError, what + ": ragged matrix");
    }
    for (const auto& x : r) data.push_back(x.get<double>());
  }
  return Matrix<double>(rows, cols, std::move(data));
}

json matrix_to_json(const Matrix<double>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

}  // namespace

ModelWeights parse_weights(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("weights: ") + e.what());
  }
  try {
    ModelWeights w;
    w.model = parse_model(root.at("model").get<std::string>());
    for (const auto& jl : root.at("layers")) {
      LayerWeights lw;
      const auto dims = jl.at("dims").get<std::vector<std::size_t>>();
      if (dims.size() != 2) throw Error(ErrorCode::FormatError, "weights: dims must be [in, out]");
      lw.in = dims[0];
      lw.out = dims[1];
      if (jl.contains("W")) lw.W = matrix_from_json(jl["W"], "W");
      if (jl.contains("a")) lw.a = jl["a"].get<std::vector<double>>();
      if (jl.contains("scalars")) {
        for (const auto& [k, v] : jl["scalars"].items()) lw.scalars[k] = v.get<double>();
      }
      if (jl.contains("extra")) {
        for (const auto& [k, v] : jl["extra"].items()) lw.extra[k] = matrix_from_json(v, k);
      }
      w.layers.push_back(std::move(lw));
    }
    validate_weights(w);
    return w;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("weights: ") + e.what());
  }
}

std::string dump_weights(const ModelWeights& w) {
  json root;
  root["model"] = std::string(model_name(w.model));
  root["layers"] = json::array();
  for (const auto& lw : w.layers) {
    json jl;
    jl["dims"] = {lw.in, lw.out};
    if (!lw.W.empty()) jl["W"] = matrix_to_json(lw.W);
    if (!lw.a.empty()) jl["a"] = lw.a;
    if (!lw.scalars.empty()) jl["scalars"] = lw.scalars;
    if (!lw.extra.empty()) {
      json ex = json::object();
      for (const auto& [k, m] : lw.extra) ex[k] = matrix_to_json(m);
      jl["extra"] = ex;
    }
    root["layers"].push_back(std::move(jl));
  }
  return root.dump(2);
}

ModelWeights load_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FormatError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_weights(ss.str());
}

void save_weights(const std::filesystem::path& path, const ModelWeights& w) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FormatError, "cannot write " + path.string());
  out << dump_weights(w) << '\n';
}

}  // namespace incrt
