#include "support.hpp"

namespace matg {
namespace {

TEST(MaterialBody, VertexAndArrowSetsFollowTransplants) {
  const BodyGrid body = plate_contorted();
  const MaterialGroupoid g = build_material_groupoid(body);
  Rng rng(21);
  for (std::size_t x = 0; x < body.size(); x += 3)
    for (std::size_t y = 0; y < body.size(); y += 4) {
      const Matrix px = body.point(x).symbolic().transplant, py = body.point(y).symbolic().transplant;
      const auto& set = g.arrows(ObjectId{x}, ObjectId{y});
      ASSERT_TRUE(set.has_value());
      EXPECT_TRUE(set->contains(py * inverse(px)));
      EXPECT_FALSE(set->contains(px * inverse(py)) && x != y && !approx_equal(px, py));
    }
  // composition of arrows stays inside the composite hom set
  const Matrix a = g.arrows(ObjectId{0}, ObjectId{1})->representative;
  const Matrix b = g.arrows(ObjectId{1}, ObjectId{7})->representative;
  EXPECT_TRUE(g.arrows(ObjectId{0}, ObjectId{7})->contains(b * a));
}

TEST(MaterialBody, ConjugatedArchetypeIsNormalized) {
  const Matrix h = Matrix::diag({2.0, 0.5});
  MaterialPoint p;
  p.data = SymbolicData{conjugate(MatrixGroup::special_orthogonal(2), h), rotation2(0.3), "m"};
  const BodyGrid body(2, {1, 1, 1}, {p});
  const MaterialGroupoid g = build_material_groupoid(body);
  Rng rng(22);
  const Matrix pt = rotation2(0.3) * h;
  for (int i = 0; i < 20; ++i) {
    const Matrix q = random_rotation(2, rng);
    EXPECT_TRUE(contains(g.vertex(ObjectId{0}), pt * q * inverse(pt)));
  }
}

TEST(MaterialBody, UniformityFollowsMaterialLabels) {
  for (const auto& f : composite_fixtures()) {
    EXPECT_TRUE(is_uniform(build_material_groupoid(f.a)).uniform) << f.name;
    EXPECT_TRUE(is_uniform(build_material_groupoid(f.b)).uniform) << f.name;
  }
  MaterialPoint p, q;
  p.data = SymbolicData{MatrixGroup::trivial(2), Matrix::identity(2), "a"};
  q.data = SymbolicData{MatrixGroup::trivial(2), Matrix::identity(2), "b"};
  q.pos = {1, 0, 0};
  const auto v = is_uniform(build_material_groupoid(BodyGrid(2, {2, 1, 1}, {p, q})));
  EXPECT_FALSE(v.uniform);
  EXPECT_EQ(v.components.size(), 2u);
}

TEST(MaterialBody, HomogeneityVerdicts) {
  EXPECT_EQ(is_discretely_homogeneous(build_material_groupoid(plate_iso_homog())).verdict, Homogeneity::Homogeneous);
  EXPECT_EQ(is_discretely_homogeneous(build_material_groupoid(plate_contorted())).verdict, Homogeneity::Inhomogeneous);
  // quarter-turn rotations lie in the symmetry group: the gauge undoes them
  const auto c4 = build_material_groupoid(cyclic_plate("c4", 4, [](double x, double y) { return 90 * x + 180 * y; }, 4, 3));
  const auto v = is_discretely_homogeneous(c4);
  EXPECT_EQ(v.verdict, Homogeneity::Homogeneous);
  EXPECT_EQ(v.method, "finite gauge search");
  EXPECT_LT(max_plaquette_defect(c4.body(), v.field), 1e-9);
  const auto twisted = build_material_groupoid(cyclic_plate("c4t", 4, [](double x, double) { return 30 * x; }, 3, 3));
  EXPECT_EQ(is_discretely_homogeneous(twisted).verdict, Homogeneity::Inhomogeneous);
}

TEST(MaterialBody, NodeBudgetGivesInconclusive) {
  const auto c4 = build_material_groupoid(cyclic_plate("c4", 4, [](double x, double) { return 90 * x; }, 4, 4));
  HomogeneityOptions opt;
  opt.node_budget = 1;
  EXPECT_EQ(is_discretely_homogeneous(c4, opt).verdict, Homogeneity::Inconclusive);
}

TEST(MaterialBody, RejectsInvalidBodies) {
  MaterialPoint p, q;
  p.data = SymbolicData{MatrixGroup::trivial(2), Matrix::identity(2), "a"};
  q.data = SymbolicData{MatrixGroup::special_orthogonal(2), Matrix::identity(2), "a"};
  q.pos = {1, 0, 0};
  EXPECT_MATG_ERROR(build_material_groupoid(BodyGrid(2, {2, 1, 1}, {p, q})), InvalidBody);
  q.pos = {0, 0, 0};
  EXPECT_MATG_ERROR(BodyGrid(2, {2, 1, 1}, {p, q}), InvalidBody);
  q.pos = {3, 0, 0};
  EXPECT_MATG_ERROR(BodyGrid(2, {2, 1, 1}, {p, q}), InvalidBody);
  MaterialPoint r;
  r.data = NumericData{ConstitutiveModel::neo_hookean(2, 1, 1)};
  r.pos = {1, 0, 0};
  EXPECT_MATG_ERROR(build_material_groupoid(BodyGrid(2, {2, 1, 1}, {p, r})), MixedModes);
  MaterialPoint s;
  s.data = SymbolicData{MatrixGroup::trivial(2), Matrix::diag({1.0, 0.0}), "a"};
  EXPECT_MATG_ERROR(BodyGrid(2, {1, 1, 1}, {s}), SingularMatrix);
}

}  // namespace
}  // namespace matg
