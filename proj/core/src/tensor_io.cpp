// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "incrt/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace incrt::nrtf {
namespace {

static_assert(std::endian::native == std::endian::little,
              "NRTF I/O assumes a little-endian host");

template <typename U>
void put(std::ostream& os, U v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(U));
}

template <typename U>
U get(std::istream& is) {
  U v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(U));
  if (!is) throw Error(ErrorCode::FormatError, "nrtf: truncated header or payload");
  return v;
}

template <typename T>
constexpr DType dtype_of() {
  return sizeof(T) == 4 ? DType::F32 : DType::F64;
}

}  // namespace

template <typename T>
void write(std::ostream& os, const Matrix<T>& m) {
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(dtype_of<T>()));
  put<std::uint64_t>(os, m.rows());
  put<std::uint64_t>(os, m.cols());
  auto data = m.data();
  os.write(reinterpret_cast<const char*>(data.data()),
           static_cast<std::streamsize>(data.size() * sizeof(T)));
  if (!os) throw Error(ErrorCode::FormatError, "nrtf: write failed");
}

template <typename T>
Matrix<T> read(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorCode::FormatError, "nrtf: bad magic");
  }
  auto version = get<std::uint32_t>(is);
  if (version != kVersion) {
    throw Error(ErrorCode::FormatError, "nrtf: unsupported version " + std::to_string(version));
  }
  auto dtype = get<std::uint8_t>(is);
  auto rows = get<std::uint64_t>(is);
  auto cols = get<std::uint64_t>(is);
  Matrix<T> m(rows, cols);
  auto out = m.data();
  if (dtype == static_cast<std::uint8_t>(DType::F32)) {
    std::vector<float> buf(out.size());
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 4));
    if (!is) throw Error(ErrorCode::FormatError, "nrtf: truncated payload");
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = static_cast<T>(buf[i]);
  } else if (dtype == static_cast<std::uint8_t>(DType::F64)) {
    std::vector<double> buf(out.size());
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 8));
    if (!is) throw Error(ErrorCode::FormatError, "nrtf: truncated payload");
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = static_cast<T>(buf[i]);
  } else {
    throw Error(ErrorCode::FormatError, "nrtf: unknown dtype " + std::to_string(dtype));
  }
  return m;
}

template <typename T>
void save(const std::filesystem::path& path, const Matrix<T>& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::FormatError, "nrtf: cannot open " + path.string());
  write(os, m);
}

template <typename T>
Matrix<T> load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::FormatError, "nrtf: cannot open " + path.string());
  return read<T>(is);
}

template void write<float>(std::ostream&, const Matrix<float>&);
template void write<double>(std::ostream&, const Matrix<double>&);
template Matrix<float> read<float>(std::istream&);
template Matrix<double> read<double>(std::istream&);
template void save<float>(const std::filesystem::path&, const Matrix<float>&);
template void save<double>(const std::filesystem::path&, const Matrix<double>&);
template Matrix<float> load<float>(const std::filesystem::path&);
template Matrix<double> load<double>(const std::filesystem::path&);

}  // namespace incrt::nrtf
