#pragma once

#include <optional>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "matg/matg.hpp"

namespace matg::test {

inline Eigen::Matrix3d to_eigen(const Matrix& m) {
  Eigen::Matrix3d e = Eigen::Matrix3d::Zero();
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) e(i, j) = m(i, j);
  return e;
}

inline Matrix random_spd(int n, Rng& rng) {
  const Matrix g = random_gaussian(n, rng);
  return transpose(g) * g + 0.1 * Matrix::identity(n);
}

/// Random matrix with det > 0 and moderate condition number.
inline Matrix random_invertible(int n, Rng& rng) {
  for (;;) {
    const Matrix m = Matrix::identity(n) + random_gaussian(n, rng, 0.5);
    if (det(m) > 0.2) return m;
  }
}

/// Runs f and returns the code of the matg::Error it throws.
template <class F>
std::optional<ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace matg::test

#define EXPECT_MATG_ERROR(expr, error) \
  EXPECT_EQ(::matg::test::error_code_of([&] { (void)(expr); }), std::optional<::matg::ErrorCode>(::matg::ErrorCode::error))
