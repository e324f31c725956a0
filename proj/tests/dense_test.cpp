// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "incrt/dense.hpp"

namespace incrt {
namespace {

using V = std::vector<double>;

TEST(Matvec, IdentityReturnsInput) {
  const V x{1, 2, 3};
  EXPECT_EQ(dense::matvec<double>(Matrix<double>::identity(3), x), x);
}

TEST(Matvec, ZeroMatrixGivesZeroVector) {
  const V x{1, -2, 3};
  EXPECT_EQ(dense::matvec<double>(Matrix<double>(2, 3), x), (V{0, 0}));
}

TEST(Matvec, MatchesTripleLoop) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix<double> w(8, 8);
    V x(8);
    for (double& v : w.data()) v = u(rng);
    for (double& v : x) v = u(rng);
    const V got = dense::matvec<double>(w, x);
    for (std::size_t r = 0; r < 8; ++r) {
      double ref = 0;
      for (std::size_t c = 0; c < 8; ++c) ref += w(r, c) * x[c];
      EXPECT_NEAR(got[r], ref, 1e-12);
    }
  }
}

TEST(Matvec, ShapeMismatchThrows) {
  const V x{1, 2};
  try {
    dense::matvec<double>(Matrix<double>(2, 3), x);
    FAIL() << "expected ShapeError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeError);
  }
}

TEST(Matvec, NonFiniteOutputThrows) {
  Matrix<double> w(1, 1, std::numeric_limits<double>::max());
  const V x{10.0};
  EXPECT_THROW(dense::matvec<double>(w, x), Error);
}

TEST(Activations, ScalarValues) {
  EXPECT_EQ(dense::relu(-1.0), 0.0);
  EXPECT_EQ(dense::relu(2.5), 2.5);
  EXPECT_DOUBLE_EQ(dense::leaky_relu(-1.0, 0.2), -0.2);
  EXPECT_EQ(dense::exp_elem(0.0), 1.0);
  EXPECT_DOUBLE_EQ(dense::sigmoid(0.0), 0.5);
  EXPECT_DOUBLE_EQ(dense::elu(-1.0), std::exp(-1.0) - 1.0);
  EXPECT_EQ(dense::elu(3.0), 3.0);
}

TEST(Activations, NonFiniteInputIsNumericError) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto f : {+[](double x) { return dense::relu(x); },
                 +[](double x) { return dense::sigmoid(x); },
                 +[](double x) { return dense::exp_elem(x); }}) {
    try {
      f(nan);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NumericError);
    }
  }
  EXPECT_THROW(dense::exp_elem(1000.0), Error);
}

TEST(Axpy, Identities) {
  const V x{1.5, -2, 4};
  const V zero(3, 0.0);
  EXPECT_EQ(dense::axpy<double>(1.0, x, zero), x);
  EXPECT_EQ(dense::axpy<double>(-1.0, x, x), zero);
}

TEST(Axpy, MatchesScalarLoop) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10, 10);
  V x(64), y(64);
  for (double& v : x) v = u(rng);
  for (double& v : y) v = u(rng);
  const double alpha = u(rng);
  const V got = dense::axpy<double>(alpha, x, y);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(got[i], y[i] + alpha * x[i], 1e-12);
  V inplace = y;
  dense::axpy_inplace<double>(alpha, x, inplace);
  EXPECT_EQ(inplace, got);
}

TEST(Axpy, LengthMismatchThrows) {
  const V a{1, 2}, b{1, 2, 3};
  EXPECT_THROW(dense::axpy<double>(1.0, a, b), Error);
}

TEST(MaxAbsDiff, MixedSigns) {
  const V a{1, -2, 3}, b{1.5, 2, 3};
  EXPECT_DOUBLE_EQ(dense::max_abs_diff<double>(a, b), 4.0);
}

TEST(MatrixTest, PayloadSizeChecked) {
  EXPECT_THROW(Matrix<double>(2, 2, std::vector<double>{1, 2, 3}), Error);
  Matrix<double> m(2, 2, std::vector<double>{1, 2, 3, 4});
  EXPECT_EQ(m(1, 0), 3.0);
  EXPECT_EQ(m.cast<float>()(1, 1), 4.0f);
}

}  // namespace
}  // namespace incrt
