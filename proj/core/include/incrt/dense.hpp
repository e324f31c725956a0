// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "incrt/error.hpp"

namespace incrt {

/// Run precision. Verification runs use f64; f32 is available for
/// reduced-precision experiments.
enum class Precision { F32, F64 };

template <typename T>
using Vec = std::vector<T>;

/// Row-major dense matrix. Also used as the per-vertex embedding table
/// (one row per vertex).
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorCode::ShapeError, "matrix payload does not match rows*cols");
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  template <typename U>
  Matrix<U> cast() const {
    Matrix<U> out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data()[i] = static_cast<U>(data_[i]);
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

namespace dense {

inline void require_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw Error(ErrorCode::ShapeError, std::string(op) + ": dimension mismatch " +
                                           std::to_string(a) + " vs " + std::to_string(b));
  }
}

template <typename T>
void require_finite(std::span<const T> x, const char* op) {
  for (T v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NumericError, std::string(op) + ": non-finite value");
  }
}

/// out = W x, accumulating each row left to right.
template <typename T>
void matvec_into(const Matrix<T>& w, std::span<const T> x, std::span<T> out) {
  require_same_dim(w.cols(), x.size(), "matvec");
  require_same_dim(w.rows(), out.size(), "matvec");
  for (std::size_t r = 0; r < w.rows(); ++r) {
    auto wr = w.row(r);
    T acc = T(0);
    for (std::size_t c = 0; c < wr.size(); ++c) acc += wr[c] * x[c];
    out[r] = acc;
  }
  require_finite<T>(out, "matvec");
}

template <typename T>
Vec<T> matvec(const Matrix<T>& w, std::span<const T> x) {
  Vec<T> out(w.rows());
  matvec_into<T>(w, x, out);
  return out;
}

/// y + alpha * x
template <typename T>
Vec<T> axpy(T alpha, std::span<const T> x, std::span<const T> y) {
  require_same_dim(x.size(), y.size(), "axpy");
  Vec<T> out(y.begin(), y.end());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::fma(alpha, x[i], out[i]);
  return out;
}

/// y += alpha * x, in place.
template <typename T>
void axpy_inplace(T alpha, std::span<const T> x, std::span<T> y) {
  require_same_dim(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  require_same_dim(a.size(), b.size(), "dot");
  T acc = T(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <typename T>
T norm2(std::span<const T> a) {
  return std::sqrt(dot(a, a));
}

template <typename T>
void scale_inplace(T s, std::span<T> x) {
  for (T& v : x) v *= s;
}

// Element-wise activations. All reject non-finite input.

template <typename T>
T relu(T x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::NumericError, "relu: non-finite input");
  return x > T(0) ? x : T(0);
}

template <typename T>
T leaky_relu(T x, T slope = T(0.2)) {
  if (!std::isfinite(x)) throw Error(ErrorCode::NumericError, "leaky_relu: non-finite input");
  return x > T(0) ? x : slope * x;
}

template <typename T>
T elu(T x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::NumericError, "elu: non-finite input");
  return x > T(0) ? x : std::expm1(x);
}

template <typename T>
T exp_elem(T x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::NumericError, "exp: non-finite input");
  T y = std::exp(x);
  if (!std::isfinite(y)) throw Error(ErrorCode::NumericError, "exp: overflow");
  return y;
}

template <typename T>
T sigmoid(T x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::NumericError, "sigmoid: non-finite input");
  return T(1) / (T(1) + std::exp(-x));
}

template <typename T, typename F>
void apply_inplace(std::span<T> x, F&& f) {
  for (T& v : x) v = f(v);
}

template <typename T>
void relu_inplace(std::span<T> x) {
  apply_inplace(x, [](T v) { return relu(v); });
}

/// Largest absolute element-wise difference; shapes must agree.
template <typename T>
double max_abs_diff(std::span<const T> a, std::span<const T> b) {
  require_same_dim(a.size(), b.size(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
  }
  return m;
}

}  // namespace dense
}  // namespace incrt
