#include <set>

#include "support.hpp"

namespace matg {
namespace {

TEST(Groupoid, BundledFixturesSatisfyAxioms) {
  for (const auto& f : finite_fixtures()) {
    const AxiomReport r = check_axioms(f.groupoid);
    EXPECT_EQ(r.violations, 0u) << f.name << (r.messages.empty() ? "" : ": " + r.messages.front());
    EXPECT_GT(r.checks, 0u);
  }
}

TEST(Groupoid, PairGroupoidComposition) {
  const FiniteGroupoid g = make_pair_groupoid(3);
  EXPECT_EQ(g.arrow_count(), 9u);
  const Arrow a = g.hom(ObjectId{0}, ObjectId{1}).front();
  const Arrow b = g.hom(ObjectId{1}, ObjectId{2}).front();
  const Arrow ba = g.compose(b, a);  // first a, then b
  EXPECT_EQ(ba.source, ObjectId{0});
  EXPECT_EQ(ba.target, ObjectId{2});
  EXPECT_MATG_ERROR(g.compose(a, b), NotComposable);
  EXPECT_EQ(g.compose(g.inverse(a), a).id, g.identity(ObjectId{0}).id);
}

TEST(Groupoid, ActionGroupoidOrbitsAndIsotropy) {
  const FiniteGroupoid g = split_orbit_groupoid();
  const auto comps = transitivity_components(g);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].size(), 2u);
  EXPECT_EQ(comps[1].size(), 3u);
  EXPECT_FALSE(is_transitive(g));
  // group of order 6 = 2 x 3; isotropy at a point of the 3-orbit has order 2
  EXPECT_EQ(vertex_group(g, ObjectId{2}).size(), 2u);
  EXPECT_EQ(vertex_group(g, ObjectId{0}).size(), 3u);
  EXPECT_TRUE(is_transitive(square_symmetry_groupoid()));
}

TEST(Groupoid, RejectsInvalidActions) {
  // table that is not a group (no identity)
  EXPECT_MATG_ERROR(make_action_groupoid({"a", "b"}, {{1, 1}, {1, 1}}, {{0}, {0}}, 1), InvalidAction);
  // action incompatible with the product of Z2
  EXPECT_MATG_ERROR(make_action_groupoid({"e", "s"}, {{0, 1}, {1, 0}}, {{0, 1, 2}, {1, 2, 0}}, 3), InvalidAction);
}

TEST(Groupoid, UnknownIdsThrow) {
  const FiniteGroupoid g = make_pair_groupoid(2);
  EXPECT_MATG_ERROR(g.arrow(99), UnknownArrow);
  EXPECT_MATG_ERROR(g.identity(ObjectId{5}), UnknownObject);
}

TEST(Groupoid, VertexGroupsAreConjugateAlongArrows) {
  for (const auto& f : finite_fixtures()) {
    const FiniteGroupoid& g = f.groupoid;
    for (const Arrow& z : g.arrows()) {
      const auto map = conjugate_vertex_groups(g, z);
      const auto source = vertex_group(g, z.source);
      const auto target = vertex_group(g, z.target);
      ASSERT_EQ(map.size(), source.size()) << f.name;
      std::set<std::size_t> image;
      for (const auto& [from, to] : map) {
        const Arrow t = g.arrow(to);
        EXPECT_EQ(t.source, z.target);
        EXPECT_EQ(t.target, z.target);
        image.insert(to);
        if (z.payload) {
          const Matrix expect = *z.payload * *g.arrow(from).payload * inverse(*z.payload);
          EXPECT_TRUE(approx_equal(expect, *t.payload, kPayloadTol)) << f.name;
        }
      }
      EXPECT_EQ(image.size(), target.size()) << f.name;
    }
  }
}

TEST(Groupoid, FromMatricesClosesUnderProducts) {
  const FiniteGroupoid g = FiniteGroupoid::from_matrices(2, {{0, 1, rotation2(std::numbers::pi / 2)}});
  // hom sets: (0,0) {I}, (0,1) {R}, (1,0) {R^-1}, (1,1) {I}
  EXPECT_EQ(g.arrow_count(), 4u);
  EXPECT_EQ(check_axioms(g).violations, 0u);
  const FiniteGroupoid c4 = make_group_groupoid({rotation2(std::numbers::pi / 2)});
  EXPECT_EQ(c4.arrow_count(), 4u);
  EXPECT_MATG_ERROR(FiniteGroupoid::from_matrices(1, {{0, 0, rotation2(1.0)}}, 64), NotClosed);
}

TEST(Groupoid, MatrixClosureMatchesMaterialArrows) {
  const MaterialGroupoid mg = build_material_groupoid(cyclic_plate("c4", 4, [](double x, double y) { return 15 * x + 5 * y; }, 2, 2));
  const FiniteGroupoid g = materialize(mg);
  EXPECT_EQ(g.arrow_count(), 4u * 4u * 4u);
  for (const Arrow& a : g.arrows()) EXPECT_TRUE(mg.arrows(a.source, a.target)->contains(*a.payload));
  EXPECT_TRUE(g.has_payloads());
}

}  // namespace
}  // namespace matg
