#include "support.hpp"

namespace matg {
namespace {

using test::to_eigen;

TEST(Linalg, SymmetricEigenvaluesMatchEigen) {
  Rng rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    for (int n : {2, 3}) {
      const Matrix c = test::random_spd(n, rng);
      const EigSym e = eig_sym(c);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(to_eigen(c).topLeftCorner(n, n));
      for (int k = 0; k < n; ++k) EXPECT_NEAR(e.values[k], ref.eigenvalues()(k), 1e-10 * ref.eigenvalues().maxCoeff());
      // columns are orthonormal eigenvectors
      EXPECT_LT(orthogonality_defect(e.vectors), 1e-10);
      for (int k = 0; k < n; ++k) {
        const Vec v = e.vectors.col(k);
        const Vec r = c * v - e.values[k] * v;
        EXPECT_LT(norm(r), 1e-9 * e.values[n - 1]);
      }
    }
  }
}

TEST(Linalg, RepeatedEigenvaluesKeepOrthonormalFrame) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix q = random_rotation(3, rng);
    for (const Matrix& d : {Matrix::diag({2, 2, 1}), Matrix::diag({1, 3, 3}), Matrix::diag({4, 4, 4})}) {
      const Matrix c = q * d * transpose(q);
      const EigSym e = eig_sym(0.5 * (c + transpose(c)));
      EXPECT_LT(orthogonality_defect(e.vectors), 1e-9);
      EXPECT_TRUE(approx_equal(e.vectors * Matrix::diag(e.values) * transpose(e.vectors), c, 1e-9));
    }
  }
}

TEST(Linalg, EigRejectsNonSymmetric) {
  EXPECT_THROW(eig_sym(Matrix::rows({1, 2, 0, 1})), Error);
}

TEST(Linalg, PolarFactorsReassemble) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial)
    for (int n : {2, 3}) {
      const Matrix m = test::random_invertible(n, rng);
      const Polar r = polar_right(m);
      const Polar l = polar_left(m);
      EXPECT_TRUE(approx_equal(r.rotation * r.stretch, m, 1e-10));
      EXPECT_TRUE(approx_equal(l.stretch * l.rotation, m, 1e-10));
      EXPECT_TRUE(is_orthogonal(r.rotation, 1e-10));
      EXPECT_GT(det(r.rotation), 0);
      EXPECT_TRUE(approx_equal(r.stretch, transpose(r.stretch), 1e-12));
      EXPECT_GT(eig_sym(r.stretch).values[0], 0);
      EXPECT_TRUE(approx_equal(r.rotation, l.rotation, 1e-10));
    }
}

TEST(Linalg, RotationsAndInverse) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec a = random_unit(3, rng);
    const Matrix r = rotation3(a, 0.7 * trial);
    EXPECT_TRUE(is_orthogonal(r));
    EXPECT_NEAR(det(r), 1.0, 1e-12);
    EXPECT_LT(norm(r * a - a), 1e-12);
    const Matrix m = test::random_invertible(3, rng);
    EXPECT_TRUE(approx_equal(inverse(m) * m, Matrix::identity(3), 1e-10));
    EXPECT_NEAR(det(m), to_eigen(m).determinant(), 1e-12 * std::abs(det(m)) + 1e-14);
  }
  EXPECT_THROW(inverse(Matrix::diag({1, 0})), Error);
}

TEST(Linalg, RandomRotationsAreProper) {
  Rng rng(5);
  for (int n : {2, 3})
    for (int k = 0; k < 100; ++k) {
      const Matrix q = random_rotation(n, rng);
      EXPECT_TRUE(is_orthogonal(q, 1e-12));
      EXPECT_NEAR(det(q), 1.0, 1e-12);
    }
}

}  // namespace
}  // namespace matg
