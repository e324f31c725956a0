// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "incrt/dense.hpp"

namespace incrt {

/// NRTF dense tensor container.
///
/// Layout (little-endian): magic "NRTF", u32 version (=1), u8 dtype
/// (0 = f32, 1 = f64), u64 rows, u64 cols, then rows*cols row-major values.
namespace nrtf {

inline constexpr char kMagic[4] = {'N', 'R', 'T', 'F'};
inline constexpr std::uint32_t kVersion = 1;

enum class DType : std::uint8_t { F32 = 0, F64 = 1 };

template <typename T>
void write(std::ostream& os, const Matrix<T>& m);

/// Reads a tensor of either dtype, converting to T.
template <typename T>
Matrix<T> read(std::istream& is);

template <typename T>
void save(const std::filesystem::path& path, const Matrix<T>& m);

template <typename T>
Matrix<T> load(const std::filesystem::path& path);

}  // namespace nrtf
}  // namespace incrt
