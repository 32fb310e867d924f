#pragma once

// Bundled bodies, composites and finite groupoids.
//
// Plates are 5x5 grids; the point at grid index (i, j) has coordinates
// x = i + 1, y = j + 1. Angles are in degrees.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "matg/double_groupoid.hpp"
#include "matg/material_body.hpp"

namespace matg {

struct BodyFixture {
  std::string name;
  std::string description;
  BodyGrid body;
};

struct CompositeFixture {
  std::string name;
  std::string description;
  BodyGrid a;
  BodyGrid b;
};

struct FiniteFixture {
  std::string name;
  FiniteGroupoid groupoid;
};

struct FiniteDoubleFixture {
  std::string name;
  FiniteGroupoid h;
  FiniteGroupoid v;
  SquarePredicate predicate;
};

inline double degrees(double d) { return d * std::numbers::pi / 180.0; }

using PointRule = std::function<SymbolicData(double x, double y)>;

inline BodyGrid make_plate(const std::string& name, const PointRule& rule, int nx = 5, int ny = 5) {
  std::vector<MaterialPoint> pts;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      MaterialPoint p;
      p.pos = {i, j, 0};
      p.data = rule(i + 1.0, j + 1.0);
      pts.push_back(std::move(p));
    }
  return BodyGrid(2, {nx, ny, 1}, std::move(pts), name);
}

inline BodyGrid make_block(const std::string& name, std::array<int, 3> shape,
                           const std::function<SymbolicData(int, int, int)>& rule) {
  std::vector<MaterialPoint> pts;
  for (int k = 0; k < shape[2]; ++k)
    for (int j = 0; j < shape[1]; ++j)
      for (int i = 0; i < shape[0]; ++i) {
        MaterialPoint p;
        p.pos = {i, j, k};
        p.data = rule(i, j, k);
        pts.push_back(std::move(p));
      }
  return BodyGrid(3, shape, std::move(pts), name);
}

namespace detail {

inline SymbolicData sym(MatrixGroup g, Matrix p, std::string material) {
  return SymbolicData{std::move(g), p, std::move(material)};
}

inline Matrix diag2(double a, double b) { return Matrix::diag({a, b}); }
inline Matrix diag3(double a, double b, double c) { return Matrix::diag({a, b, c}); }

}  // namespace detail

// --- single bodies ------------------------------------------------------------

inline BodyGrid plate_iso_homog() {
  return make_plate("plate_iso_homog", [](double, double) {
    return detail::sym(MatrixGroup::special_orthogonal(2), Matrix::identity(2), "iso");
  });
}

/// Trivial symmetry with a rotation field varying along x.
inline BodyGrid plate_contorted() {
  return make_plate("plate_contorted", [](double x, double) {
    return detail::sym(MatrixGroup::trivial(2), rotation2(degrees(10 * x)), "aelotropic");
  });
}

// --- composites ---------------------------------------------------------------

inline std::vector<CompositeFixture> composite_fixtures() {
  using detail::sym;
  const MatrixGroup so2 = MatrixGroup::special_orthogonal(2);
  const MatrixGroup triv2 = MatrixGroup::trivial(2);
  const Matrix i2 = Matrix::identity(2);
  std::vector<CompositeFixture> out;

  out.push_back({"homogeneous_plates", "isotropic plate with an aelotropic plate in the same straight configuration",
                 make_plate("homogeneous_plates_a", [&](double, double) { return sym(so2, i2, "iso"); }),
                 make_plate("homogeneous_plates_b", [&](double, double) { return sym(triv2, i2, "aelo"); })});

  out.push_back({"contorted_plates", "isotropic plate with a plate of contorted aelotropy",
                 make_plate("contorted_plates_a", [&](double, double) { return sym(so2, i2, "iso"); }),
                 make_plate("contorted_plates_b",
                            [&](double x, double) { return sym(triv2, rotation2(degrees(10 * x)), "aelo"); })});

  out.push_back({"uniformity_loss", "two aelotropic plates with mismatched rotation fields",
                 make_plate("uniformity_loss_a",
                            [&](double, double y) { return sym(triv2, rotation2(degrees(-12 * y)), "aelo_a"); }),
                 make_plate("uniformity_loss_b",
                            [&](double x, double) { return sym(triv2, rotation2(degrees(10 * x)), "aelo_b"); })});

  out.push_back({"stress_free_loss", "stretched isotropic plate attached to an aelotropic plate",
                 make_plate("stress_free_loss_a",
                            [&](double, double) {
                              return sym(conjugate(so2, detail::diag2(1.0, 4.0 / 3.0)), i2, "iso");
                            }),
                 make_plate("stress_free_loss_b", [&](double, double) { return sym(triv2, i2, "aelo"); })});

  out.push_back({"locally_trivial", "isotropic plate and a uniformly dilated copy of it",
                 make_plate("locally_trivial_a", [&](double, double) { return sym(so2, i2, "iso"); }),
                 make_plate("locally_trivial_b", [&](double, double) { return sym(so2, 1.05 * i2, "iso"); })});

  out.push_back({"laminate", "straight aelotropic plate with one whose rotation varies along x",
                 make_plate("laminate_a", [&](double, double) { return sym(triv2, i2, "aelo_a"); }),
                 make_plate("laminate_b",
                            [&](double x, double) { return sym(triv2, rotation2(degrees(10 * x)), "aelo_b"); })});

  out.push_back({"isotropy_loss", "isotropic plate with a plate of stretched, rotated isotropic material",
                 make_plate("isotropy_loss_a", [&](double, double) { return sym(so2, i2, "iso"); }),
                 make_plate("isotropy_loss_b",
                            [&](double x, double y) {
                              const Matrix h = detail::diag2(0.5, 1.0) * rotation2(degrees(10 * x + 7 * y + 2 * y * y));
                              return sym(conjugate(so2, h), i2, "iso");
                            })});

  const MatrixGroup so3 = MatrixGroup::special_orthogonal(3);
  out.push_back({"orthotropic_block", "isotropic block with an orthotropically stretched isotropic block",
                 make_block("orthotropic_block_a", {3, 3, 3},
                            [&](int, int, int) { return sym(so3, Matrix::identity(3), "iso"); }),
                 make_block("orthotropic_block_b", {3, 3, 3},
                            [&](int, int, int) { return sym(so3, detail::diag3(1, 2, 3), "iso"); })});

  // one slab, nine points: the three normalizer branches plus generic stretches
  const std::vector<Matrix> stretches{
      detail::diag3(1, 2, 3),
      detail::diag3(2, 2, 1),
      3.0 * Matrix::identity(3),
      rotation3(normalized(Vec::of({1, 1, 0})), 0.4) * detail::diag3(2, 2, 1),
      rotation3(normalized(Vec::of({1, 2, 3})), 0.9) * detail::diag3(1, 1.5, 2.5),
      Matrix::rows({1, 0.3, 0, 0, 1, 0, 0, 0, 1}),
      detail::diag3(1, 1, 4) * rotation3(normalized(Vec::of({0, 1, 1})), 1.1),
      detail::diag3(0.5, 0.5, 0.5) * rotation3(normalized(Vec::of({1, 0, 1})), 0.3),
      Matrix::rows({2, 0.1, 0, 0.1, 2, 0, 0, 0, 2}),
  };
  out.push_back({"pointwise_slab", "isotropic slab with an isotropic slab stretched differently at every point",
                 make_block("pointwise_slab_a", {3, 3, 1},
                            [&](int, int, int) { return sym(so3, Matrix::identity(3), "iso"); }),
                 make_block("pointwise_slab_b", {3, 3, 1}, [&](int i, int j, int) {
                   return sym(so3, stretches[static_cast<std::size_t>(3 * j + i)], "iso");
                 })});
  return out;
}

// --- bodies, including numeric ones ------------------------------------------

inline BodyGrid numeric_pair(const std::string& name, const ConstitutiveModel& a, const ConstitutiveModel& b) {
  std::vector<MaterialPoint> pts(2);
  pts[0].pos = {0, 0, 0};
  pts[0].data = NumericData{a};
  pts[1].pos = {1, 0, 0};
  pts[1].data = NumericData{b};
  return BodyGrid(3, {2, 1, 1}, std::move(pts), name);
}

inline Matrix planted_transplant() { return detail::diag3(1.2, 1 / 1.2, 1); }

inline std::vector<BodyFixture> body_fixtures() {
  const ConstitutiveModel nh = ConstitutiveModel::neo_hookean(3, 1, 1);
  return {
      {"plate_iso_homog", "isotropic plate in a straight configuration", plate_iso_homog()},
      {"plate_contorted", "aelotropic plate with a rotation field along x", plate_contorted()},
      {"numeric_planted", "neo-Hookean point and the same material seen through diag(1.2, 1/1.2, 1)",
       numeric_pair("numeric_planted", nh, nh.precomposed(planted_transplant()))},
      {"numeric_different", "neo-Hookean points with different shear moduli",
       numeric_pair("numeric_different", nh, ConstitutiveModel::neo_hookean(3, 2, 1))},
  };
}

// --- finite groupoids -------------------------------------------------------

namespace detail {

using Perm = std::vector<std::size_t>;

/// Closure of permutation generators with product and action tables.
inline FiniteGroupoid permutation_action(const std::vector<Perm>& gens, std::size_t n_points) {
  Perm id(n_points);
  for (std::size_t i = 0; i < n_points; ++i) id[i] = i;
  std::vector<Perm> elems{id};
  auto after = [](const Perm& g, const Perm& h) {  // g ∘ h
    Perm r(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) r[i] = g[h[i]];
    return r;
  };
  for (std::size_t k = 0; k < elems.size(); ++k)
    for (const Perm& g : gens) {
      const Perm c = after(g, elems[k]);
      if (std::find(elems.begin(), elems.end(), c) == elems.end()) elems.push_back(c);
    }
  const std::size_t k = elems.size();
  std::vector<std::vector<std::size_t>> product(k, std::vector<std::size_t>(k));
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < k; ++a) {
    labels.push_back("g" + std::to_string(a));
    for (std::size_t b = 0; b < k; ++b)
      product[a][b] = static_cast<std::size_t>(std::find(elems.begin(), elems.end(), after(elems[a], elems[b])) - elems.begin());
  }
  return make_action_groupoid(labels, product, elems, n_points);
}

}  // namespace detail

inline FiniteGroupoid square_symmetry_groupoid() {
  // dihedral group of the square on its four corners
  return detail::permutation_action({{1, 2, 3, 0}, {3, 2, 1, 0}}, 4);
}

inline FiniteGroupoid square_rotation_groupoid() { return detail::permutation_action({{1, 2, 3, 0}}, 4); }

inline FiniteGroupoid triangle_groupoid() { return detail::permutation_action({{1, 2, 0}, {1, 0, 2}}, 3); }

/// Two disjoint orbits: swap on {0,1}, 3-cycle on {2,3,4}.
inline FiniteGroupoid split_orbit_groupoid() { return detail::permutation_action({{1, 0, 2, 3, 4}, {0, 1, 3, 4, 2}}, 5); }

/// nx x ny plate with the cyclic group of `order` rotations and rotation field theta (degrees).
inline BodyGrid cyclic_plate(const std::string& name, int order, const std::function<double(double, double)>& theta, int nx,
                             int ny) {
  const MatrixGroup c = MatrixGroup::generated(2, {rotation2(2 * std::numbers::pi / order)});
  return make_plate(name, [&](double x, double y) { return SymbolicData{c, rotation2(degrees(theta(x, y))), "cyclic"}; }, nx, ny);
}

inline std::vector<FiniteFixture> finite_fixtures() {
  std::vector<FiniteFixture> out;
  out.push_back({"pair_4", make_pair_groupoid(4)});
  out.push_back({"square_symmetry", square_symmetry_groupoid()});
  out.push_back({"square_rotation", square_rotation_groupoid()});
  out.push_back({"triangle", triangle_groupoid()});
  out.push_back({"split_orbits", split_orbit_groupoid()});
  std::vector<Matrix> rotations;
  for (const Matrix& m : frame_sign_matrices(Matrix::identity(3)))
    if (det(m) > 0) rotations.push_back(m);
  out.push_back({"orthotropic_group", make_group_groupoid(rotations)});
  out.push_back({"quarter_turn_straight",
                 materialize(build_material_groupoid(cyclic_plate("qt_straight", 4, [](double, double) { return 0.0; }, 2, 2)))});
  out.push_back({"quarter_turn_twisted",
                 materialize(build_material_groupoid(cyclic_plate("qt_twisted", 4, [](double x, double y) { return 90 * x + 30 * (y - 1); }, 2, 2)))});
  return out;
}

inline std::vector<FiniteDoubleFixture> finite_double_fixtures() {
  std::vector<FiniteDoubleFixture> out;
  out.push_back({"pair_pair", make_pair_groupoid(4), make_pair_groupoid(4), SquarePredicate::Coarse});
  out.push_back({"cyclic_cyclic", square_rotation_groupoid(), square_rotation_groupoid(), SquarePredicate::Coarse});
  out.push_back({"pair_cyclic", make_pair_groupoid(4), square_rotation_groupoid(), SquarePredicate::Coarse});
  out.push_back({"pair_triangle", make_pair_groupoid(3), triangle_groupoid(), SquarePredicate::Coarse});
  const FiniteGroupoid straight =
      materialize(build_material_groupoid(cyclic_plate("ht_straight", 2, [](double, double) { return 0.0; }, 2, 1)));
  const FiniteGroupoid twisted =
      materialize(build_material_groupoid(cyclic_plate("ht_twisted", 2, [](double x, double) { return 30 * x; }, 2, 1)));
  out.push_back({"half_turn_coarse", straight, twisted, SquarePredicate::Coarse});
  out.push_back({"half_turn_commuting", straight, twisted, SquarePredicate::Commuting});
  out.push_back({"half_turn_commuting_self", straight, straight, SquarePredicate::Commuting});
  return out;
}

}  // namespace matg
