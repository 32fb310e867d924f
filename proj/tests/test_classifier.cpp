#include <Eigen/Dense>

#include "support.hpp"

namespace matg {
namespace {

struct Expected {
  std::string name;
  bool uniform;
  Homogeneity homogeneity;
  StressFree stress_free;
  std::size_t components;
  std::string cls;
};

const std::vector<Expected> kExpected{
    {"homogeneous_plates", true, Homogeneity::Homogeneous, StressFree::Exists, 1, "trivial"},
    {"contorted_plates", true, Homogeneity::Inhomogeneous, StressFree::Exists, 1, "trivial"},
    {"uniformity_loss", false, Homogeneity::Inhomogeneous, StressFree::Exists, 25, "trivial"},
    {"stress_free_loss", true, Homogeneity::Homogeneous, StressFree::NotExists, 1, "trivial"},
    {"locally_trivial", true, Homogeneity::Homogeneous, StressFree::NotExists, 1, "isotropic"},
    {"laminate", false, Homogeneity::Inhomogeneous, StressFree::Exists, 5, "trivial"},
    {"isotropy_loss", true, Homogeneity::Homogeneous, StressFree::NotExists, 1, "discrete_other"},
    {"orthotropic_block", true, Homogeneity::Homogeneous, StressFree::NotExists, 1, "orthotropic"},
};

const CompositeFixture& composite(const std::string& name) {
  static const auto all = composite_fixtures();
  for (const auto& f : all)
    if (f.name == name) return f;
  throw std::runtime_error("no fixture " + name);
}

TEST(Classifier, FixtureVerdicts) {
  for (const auto& e : kExpected) {
    const auto& f = composite(e.name);
    const CompositeReport r = analyze_composite(f.a, f.b);
    EXPECT_EQ(r.uniform, e.uniform) << e.name;
    EXPECT_EQ(r.homogeneity.verdict, e.homogeneity) << e.name;
    EXPECT_EQ(r.stress_free_configuration, e.stress_free) << e.name;
    EXPECT_EQ(r.components.size(), e.components) << e.name;
    EXPECT_EQ(class_summary(r.pointwise_class), e.cls) << e.name;
  }
}

TEST(Classifier, SelfIntersectionIsIdentity) {
  for (const auto& f : composite_fixtures())
    for (const BodyGrid* body : {&f.a, &f.b}) {
      const MaterialGroupoid g = build_material_groupoid(*body);
      const MaterialGroupoid z = intersect_material_groupoids(g, g);
      for (std::size_t x = 0; x < g.size(); x += 2)
        for (std::size_t y = 0; y < g.size(); y += 3) {
          const auto& a = g.arrows(ObjectId{x}, ObjectId{y});
          const auto& b = z.arrows(ObjectId{x}, ObjectId{y});
          ASSERT_EQ(a.has_value(), b.has_value()) << f.name;
          if (a) {
            EXPECT_TRUE(same_arrow_set(*a, *b)) << f.name;
          }
        }
    }
}

TEST(Classifier, CompositeIsSymmetricInItsConstituents) {
  for (const auto& f : composite_fixtures()) {
    const CompositeReport ab = analyze_composite(f.a, f.b), ba = analyze_composite(f.b, f.a);
    EXPECT_EQ(ab.uniform, ba.uniform) << f.name;
    EXPECT_EQ(ab.components, ba.components) << f.name;
    EXPECT_EQ(ab.homogeneity.verdict, ba.homogeneity.verdict) << f.name;
    EXPECT_EQ(ab.stress_free_configuration, ba.stress_free_configuration) << f.name;
    EXPECT_EQ(class_summary(ab.pointwise_class), class_summary(ba.pointwise_class)) << f.name;
    EXPECT_EQ(ab.locally_trivial.horizontal, ba.locally_trivial.vertical) << f.name;
    EXPECT_EQ(ab.locally_trivial.vertical, ba.locally_trivial.horizontal) << f.name;
  }
}

TEST(Classifier, UniformityMatchesCoreTransitivity) {
  for (const auto& f : composite_fixtures())
    for (Orientation o : {Orientation::Special, Orientation::Full}) {
      CompositeOptions opt;
      opt.orientation = o;
      const CompositeReport r = analyze_composite(f.a, f.b, opt);
      EXPECT_EQ(r.uniform, r.core_transitive) << f.name;
    }
}

TEST(Classifier, StructureGroupIsIntersectionOfVertexGroups) {
  for (const auto& f : composite_fixtures()) {
    const MaterialGroupoid a = build_material_groupoid(f.a), b = build_material_groupoid(f.b);
    const MaterialGroupoid z = intersect_material_groupoids(a, b);
    for (std::size_t x = 0; x < z.size(); ++x) {
      const ObjectId id{x};
      EXPECT_TRUE(same_group(z.vertex(id), intersect(a.vertex(id), b.vertex(id)))) << f.name << " point " << x;
    }
  }
}

TEST(Classifier, OrientationDoublesDiscreteGroups) {
  const auto& f = composite("orthotropic_block");
  CompositeOptions opt;
  const MaterialGroupoid a = build_material_groupoid(f.a), b = build_material_groupoid(f.b);
  EXPECT_EQ(intersect_material_groupoids(a, b).vertex(ObjectId{0}).order(), 4u);
  const MaterialGroupoid ao = build_material_groupoid(with_orientation(f.a, Orientation::Full));
  const MaterialGroupoid bo = build_material_groupoid(with_orientation(f.b, Orientation::Full));
  EXPECT_EQ(intersect_material_groupoids(ao, bo).vertex(ObjectId{0}).order(), 8u);
}

TEST(Classifier, RejectsMismatchedGrids) {
  EXPECT_MATG_ERROR(analyze_composite(plate_iso_homog(), composite("orthotropic_block").a), BodyMismatch);
}

// --- brute-force oracle for the pointwise class --------------------------------

using E3 = Eigen::Matrix3d;

/// Q lies in SO(3) ∩ P SO(3) P^-1 exactly when P^-1 Q P is orthogonal.
bool in_composite_group(const E3& q, const E3& p_inv, const E3& p) {
  const E3 m = p_inv * q * p;
  return (m.transpose() * m - E3::Identity()).norm() < 1e-6;
}

E3 axis_rotation(const Eigen::Vector3d& axis, double angle) { return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix(); }

TEST(Classifier, PointwiseClassMatchesSampling) {
  const auto& f = composite("pointwise_slab");
  const CompositeReport r = analyze_composite(f.a, f.b);
  Rng rng(51);
  std::uniform_real_distribution<double> angle(0.05, 2 * std::numbers::pi - 0.05);
  for (std::size_t x = 0; x < f.b.size(); ++x) {
    const E3 p = test::to_eigen(f.b.point(x).symbolic().transplant);
    const E3 p_inv = p.inverse();
    const Eigen::SelfAdjointEigenSolver<E3> es(p * p.transpose());
    const E3 vecs = es.eigenvectors();
    const Eigen::Vector3d vals = es.eigenvalues();

    int haar_pass = 0;
    const int haar = 40000;
    for (int k = 0; k < haar; ++k) haar_pass += in_composite_group(test::to_eigen(random_rotation(3, rng)), p_inv, p);
    // 20000 random-angle and 1 half-turn probe per eigenvector
    std::array<bool, 3> spins{}, flips{};
    for (int i = 0; i < 3; ++i) {
      bool all = true;
      for (int k = 0; k < 20000 && all; ++k) all = in_composite_group(axis_rotation(vecs.col(i), angle(rng)), p_inv, p);
      spins[i] = all;
      flips[i] = in_composite_group(axis_rotation(vecs.col(i), std::numbers::pi), p_inv, p);
    }
    SymmetryClass::Label oracle;
    if (haar_pass == haar)
      oracle = SymmetryClass::Label::Isotropic;
    else if (spins[0] || spins[1] || spins[2])
      oracle = SymmetryClass::Label::TransverselyIsotropic;
    else if (flips[0] && flips[1] && flips[2])
      oracle = SymmetryClass::Label::Orthotropic;
    else
      oracle = SymmetryClass::Label::Trivial;
    if (oracle != SymmetryClass::Label::Isotropic) {
      EXPECT_EQ(haar_pass, 0) << "point " << x;
    }

    const SymmetryClass& c = r.pointwise_class[x];
    ASSERT_EQ(to_string(c.label), to_string(oracle)) << "point " << x;
    if (oracle == SymmetryClass::Label::TransverselyIsotropic) {
      // the simple eigenvalue carries the axis
      const int simple = std::abs(vals[0] - vals[1]) < 1e-9 * vals[2] ? 2 : 0;
      const Eigen::Vector3d axis(c.axis[0], c.axis[1], c.axis[2]);
      EXPECT_NEAR(std::abs(axis.dot(vecs.col(simple))), 1.0, 1e-9) << "point " << x;
    }
    if (oracle == SymmetryClass::Label::Orthotropic) {
      const E3 frame = test::to_eigen(c.frame);
      EXPECT_NEAR(frame.determinant(), 1.0, 1e-9);
      for (int i = 0; i < 3; ++i) EXPECT_NEAR((frame.transpose() * vecs.col(i)).cwiseAbs().maxCoeff(), 1.0, 1e-9);
    }
  }
}

}  // namespace
}  // namespace matg
