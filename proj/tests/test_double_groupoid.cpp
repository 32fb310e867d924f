#include <set>

#include "support.hpp"

namespace matg {
namespace {

const CompositeFixture& composite(const std::string& name) {
  static const auto all = composite_fixtures();
  for (const auto& f : all)
    if (f.name == name) return f;
  throw std::runtime_error("no fixture " + name);
}

MaterialArrow random_arrow(const MaterialGroupoid& g, ObjectId x, ObjectId y, Rng& rng) {
  return MaterialArrow{x, y, random_member(g.arrows(x, y)->form(), rng)};
}

TEST(DoubleGroupoid, SquareValidation) {
  const auto& f = composite("contorted_plates");
  const MaterialGroupoid h = build_material_groupoid(f.a), v = build_material_groupoid(f.b);
  const MaterialDoubleGroupoid dg(MaterialSide{&h}, MaterialSide{&v}, SquarePredicate::Commuting);
  const ObjectId x{0}, y{1}, z{2};
  Rng rng(41);
  const MaterialArrow s = random_arrow(h, x, y, rng);
  const MaterialArrow s_hat = random_arrow(v, x, z, rng);
  EXPECT_MATG_ERROR(dg.make_square(s, s, s_hat, s_hat), CornerMismatch);
  const auto sq = fill_corner(dg, s, s_hat);
  ASSERT_TRUE(sq.has_value());
  MaterialArrow bad = sq->t;
  bad.m = 1.5 * bad.m;
  EXPECT_MATG_ERROR(dg.make_square(bad, sq->s, sq->t_hat, sq->s_hat), NotCommuting);
  EXPECT_MATG_ERROR(fill_corner(dg, s, MaterialArrow{y, z, s_hat.m}), CornerMismatch);
}

TEST(DoubleGroupoid, UnitLawsOnFiniteFixtures) {
  for (const auto& f : finite_double_fixtures()) {
    const FiniteDoubleGroupoid dg(FiniteSide{&f.h}, FiniteSide{&f.v}, f.predicate);
    for (const auto& a : enumerate_squares(dg)) {
      EXPECT_TRUE(dg.same_square(dg.compose_h(dg.horizontal_identity(a.t_hat), a), a)) << f.name;
      EXPECT_TRUE(dg.same_square(dg.compose_h(a, dg.horizontal_identity(a.s_hat)), a)) << f.name;
      EXPECT_TRUE(dg.same_square(dg.compose_v(dg.vertical_identity(a.t), a), a)) << f.name;
      EXPECT_TRUE(dg.same_square(dg.compose_v(a, dg.vertical_identity(a.s)), a)) << f.name;
    }
  }
}

TEST(DoubleGroupoid, InterchangeHoldsExhaustively) {
  for (const auto& f : finite_double_fixtures()) {
    const FiniteDoubleGroupoid dg(FiniteSide{&f.h}, FiniteSide{&f.v}, f.predicate);
    const InterchangeReport r = check_interchange_exhaustive(dg);
    EXPECT_GT(r.blocks, 0u) << f.name;
    EXPECT_EQ(r.violations, 0u) << f.name;
  }
}

TEST(DoubleGroupoid, MaterialCriteriaAgreeWithEnumeration) {
  const BodyGrid straight = cyclic_plate("s", 2, [](double, double) { return 0.0; }, 2, 1);
  const BodyGrid twisted = cyclic_plate("t", 2, [](double x, double) { return 30 * x; }, 2, 1);
  const BodyGrid quarter = cyclic_plate("q", 4, [](double, double) { return 0.0; }, 2, 1);
  const std::vector<std::pair<BodyGrid, BodyGrid>> pairs{
      {straight, twisted}, {straight, straight}, {straight, quarter}, {quarter, straight}};
  for (const auto& [a, b] : pairs) {
    const MaterialGroupoid ma = build_material_groupoid(a), mb = build_material_groupoid(b);
    const FiniteGroupoid fa = materialize(ma), fb = materialize(mb);
    for (SquarePredicate p : {SquarePredicate::Commuting, SquarePredicate::Coarse}) {
      const MaterialDoubleGroupoid mdg(MaterialSide{&ma}, MaterialSide{&mb}, p);
      const FiniteDoubleGroupoid fdg(FiniteSide{&fa}, FiniteSide{&fb}, p);
      const LocalTriviality lm = is_locally_trivial(mdg), lf = is_locally_trivial(fdg);
      EXPECT_EQ(lm.horizontal, lf.horizontal) << a.name() << "/" << b.name();
      EXPECT_EQ(lm.vertical, lf.vertical) << a.name() << "/" << b.name();
    }
    const MaterialDoubleGroupoid mdg(MaterialSide{&ma}, MaterialSide{&mb}, SquarePredicate::Commuting);
    const FiniteDoubleGroupoid fdg(FiniteSide{&fa}, FiniteSide{&fb}, SquarePredicate::Commuting);
    const MaterialGroupoid mcore = core_groupoid(mdg);
    const FiniteCore fcore = core_groupoid(fdg);
    EXPECT_EQ(check_axioms(fcore.groupoid).violations, 0u);
    const FiniteGroupoid mcore_arrows = materialize(mcore);
    EXPECT_EQ(mcore_arrows.arrow_count(), fcore.groupoid.arrow_count());
    for (const Arrow& c : fcore.groupoid.arrows()) {
      const auto& set = mcore.arrows(c.source, c.target);
      ASSERT_TRUE(set.has_value());
      EXPECT_TRUE(set->contains(*c.payload));
    }
  }
  // straight vs quarter: H ⊆ V only
  const MaterialGroupoid ms = build_material_groupoid(straight), mq = build_material_groupoid(quarter);
  const LocalTriviality lt = is_locally_trivial(MaterialDoubleGroupoid(MaterialSide{&ms}, MaterialSide{&mq}, SquarePredicate::Commuting));
  EXPECT_FALSE(lt.horizontal);
  EXPECT_TRUE(lt.vertical);
}

TEST(DoubleGroupoid, ProbesMatchExactCriterion) {
  Rng rng(42);
  for (const auto& f : composite_fixtures()) {
    if (f.a.dim() != 2) continue;
    const MaterialGroupoid h = build_material_groupoid(f.a), v = build_material_groupoid(f.b);
    const MaterialDoubleGroupoid dg(MaterialSide{&h}, MaterialSide{&v}, SquarePredicate::Commuting);
    const LocalTriviality lt = is_locally_trivial(dg);
    const ProbeReport p = probe_local_triviality(dg, 300, rng);
    // sampling can miss an open configuration, never invent one
    if (lt.horizontal) {
      EXPECT_EQ(p.cup_failures, 0u) << f.name;
    }
    if (lt.vertical) {
      EXPECT_EQ(p.bracket_failures, 0u) << f.name;
    }
  }
  const auto& f = composite("homogeneous_plates");
  const MaterialGroupoid h = build_material_groupoid(f.a), v = build_material_groupoid(f.b);
  const ProbeReport p =
      probe_local_triviality(MaterialDoubleGroupoid(MaterialSide{&h}, MaterialSide{&v}, SquarePredicate::Commuting), 300, rng);
  EXPECT_GT(p.bracket_failures, 0u);
}

TEST(DoubleGroupoid, FilledCornersAreCommutingSquares) {
  Rng rng(43);
  for (const std::string name : {"homogeneous_plates", "contorted_plates", "locally_trivial", "isotropy_loss", "stress_free_loss"}) {
    const auto& f = composite(name);
    const MaterialGroupoid h = build_material_groupoid(f.a), v = build_material_groupoid(f.b);
    const MaterialDoubleGroupoid dg(MaterialSide{&h}, MaterialSide{&v}, SquarePredicate::Commuting);
    const bool always = is_locally_trivial(dg).horizontal;
    std::uniform_int_distribution<std::size_t> pick(0, h.size() - 1);
    for (int k = 0; k < 50; ++k) {
      const ObjectId br{pick(rng)}, bl{pick(rng)}, tr{pick(rng)};
      const MaterialArrow s = random_arrow(h, br, bl, rng), s_hat = random_arrow(v, br, tr, rng);
      const auto sq = fill_corner(dg, s, s_hat);
      if (always) {
        EXPECT_TRUE(sq.has_value()) << name;
      }
      if (!sq) continue;
      EXPECT_TRUE(dg.horizontal().belongs(sq->t)) << name;
      EXPECT_TRUE(dg.vertical().belongs(sq->t_hat)) << name;
      EXPECT_TRUE(approx_equal(sq->t.m * sq->s_hat.m, sq->t_hat.m * sq->s.m, 1e-8)) << name;
    }
  }
}

}  // namespace
}  // namespace matg
