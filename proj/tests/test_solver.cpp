#include <cstdlib>

#include "support.hpp"

namespace matg {
namespace {

/// min over rotations Q of |p_hat - p Q|, the distance modulo the symmetry of
/// an isotropic first material.
double gauge_distance(const Matrix& p_hat, const Matrix& p) {
  const Matrix q = polar_right(transpose(p) * p_hat).rotation;
  return frobenius(p_hat - p * q);
}

TEST(Solver, ObjectiveGradientMatchesFiniteDifferences) {
  Rng rng(31);
  const auto m1 = ConstitutiveModel::mooney_rivlin(3, 0.5, 0.2, 1.0);
  const auto m2 = m1.precomposed(test::random_invertible(3, rng));
  const SampleSet s = make_training_samples(3, 24, 5);
  const Matrix p = test::random_invertible(3, rng);
  const auto [value, grad] = transplant_objective(m1, m2, s, p);
  EXPECT_GT(value, 0);
  const double h = 1e-6;
  double worst = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Matrix pp = p, pm = p;
      pp(i, j) += h;
      pm(i, j) -= h;
      const double fd = (transplant_objective(m1, m2, s, pp).first - transplant_objective(m1, m2, s, pm).first) / (2 * h);
      worst = std::max(worst, std::abs(fd - grad(i, j)) / std::max(1.0, std::abs(fd)));
    }
  EXPECT_LT(worst, 1e-5);
}

TEST(Solver, RecoversPlantedTransplant) {
  const auto nh = ConstitutiveModel::neo_hookean(3, 1, 1);
  const Matrix planted = planted_transplant();
  const TransplantSolution s = solve_transplant(nh, nh.precomposed(planted));
  ASSERT_TRUE(s.converged);
  EXPECT_LT(s.residual, 1e-8);
  EXPECT_LT(gauge_distance(s.p, planted), 1e-6);
}

TEST(Solver, RecoversPlanarTransplant) {
  Rng rng(32);
  const auto svk = ConstitutiveModel::st_venant_kirchhoff(2, 1.0, 0.5);
  const Matrix planted = Matrix::diag({1.1, 0.9}) * rotation2(0.4);
  const TransplantSolution s = solve_transplant(svk, svk.precomposed(planted));
  ASSERT_TRUE(s.converged);
  EXPECT_LT(gauge_distance(s.p, planted), 1e-6);
}

TEST(Solver, DifferentMaterialsDoNotConverge) {
  const TransplantSolution s =
      solve_transplant(ConstitutiveModel::neo_hookean(3, 1, 1), ConstitutiveModel::neo_hookean(3, 2, 1));
  EXPECT_FALSE(s.converged);
  EXPECT_GT(s.residual, 1e-4);
}

TEST(Solver, TransplantsCompose) {
  Rng rng(33);
  const auto m1 = ConstitutiveModel::neo_hookean(3, 1, 1);
  const auto m2 = m1.precomposed(Matrix::diag({1.1, 1.0, 0.95}));
  const auto m3 = m2.precomposed(Matrix::identity(3) + random_gaussian(3, rng, 0.05));
  const TransplantSolution s12 = solve_transplant(m1, m2), s23 = solve_transplant(m2, m3);
  ASSERT_TRUE(s12.converged);
  ASSERT_TRUE(s23.converged);
  const SampleSet held = make_holdout_samples(3, 40, 99);
  EXPECT_LT(transplant_rms(m1, m3, held, s23.p * s12.p), 1e-8);
}

TEST(Solver, Deterministic) {
  const auto nh = ConstitutiveModel::neo_hookean(3, 1, 1);
  const auto other = nh.precomposed(planted_transplant());
  const TransplantSolution a = solve_transplant(nh, other), b = solve_transplant(nh, other);
  EXPECT_EQ(a.p.a, b.p.a);
  EXPECT_EQ(a.residual, b.residual);
  setenv("MATG_THREADS", "1", 1);
  const TransplantSolution c = solve_transplant(nh, other);
  unsetenv("MATG_THREADS");
  EXPECT_EQ(a.p.a, c.p.a);
}

TEST(Solver, SampledSymmetryGroups) {
  const SampleSet s = make_training_samples(3, 24, 7);
  const auto nh = ConstitutiveModel::neo_hookean(3, 1, 1);
  EXPECT_EQ(sample_symmetry_group(nh, s).group.kind(), GroupKind::SpecialOrthogonal);
  // psi(F D) with distinct stretches: rotations commuting with D^2
  const MatrixGroup ortho = sample_symmetry_group(nh.precomposed(Matrix::diag({1, 2, 3})), s).group;
  EXPECT_EQ(ortho.kind(), GroupKind::Finite);
  EXPECT_EQ(ortho.order(), 4u);
  const MatrixGroup ti = sample_symmetry_group(nh.precomposed(Matrix::diag({1, 1, 2})), s).group;
  EXPECT_EQ(ti.kind(), GroupKind::AxisRotation);
  EXPECT_TRUE(ti.axis_reversal());
}

TEST(Solver, SymbolizesNumericBodies) {
  for (const auto& f : body_fixtures()) {
    if (f.body.all_symbolic()) continue;
    const SymbolizeReport r = symbolize_body(f.body);
    ASSERT_TRUE(r.body.all_symbolic());
    const bool same = r.body.point(0).symbolic().material == r.body.point(1).symbolic().material;
    EXPECT_EQ(same, f.name == "numeric_planted") << f.name;
  }
}

}  // namespace
}  // namespace matg
