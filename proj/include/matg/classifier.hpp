#pragma once

// Binary composites: intersection of the constituent material groupoids, the
// commuting material double groupoid over them and the verdicts derived from both.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "matg/double_groupoid.hpp"
#include "matg/material_body.hpp"
#include "matg/parallel.hpp"

namespace matg {

enum class StressFree { Exists, NotExists, Unknown };

inline std::string to_string(StressFree s) {
  switch (s) {
    case StressFree::Exists: return "exists";
    case StressFree::NotExists: return "not_exists";
    case StressFree::Unknown: return "unknown";
  }
  return "?";
}

/// Tolerance on the stretch of the relative transplants.
inline constexpr double kStressFreeTol = 1e-8;

inline void require_same_grid(const BodyGrid& a, const BodyGrid& b) {
  if (a.dim() != b.dim() || a.shape() != b.shape() || a.size() != b.size())
    throw Error(ErrorCode::BodyMismatch, "constituents are not defined on the same body grid");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.point(i).pos != b.point(i).pos)
      throw Error(ErrorCode::BodyMismatch, "constituents list point " + std::to_string(i) + " at different positions");
}

/// Composite groupoid: arrows(X,Y) = a.arrows(X,Y) ∩ b.arrows(X,Y).
inline MaterialGroupoid intersect_material_groupoids(const MaterialGroupoid& a, const MaterialGroupoid& b,
                                                     double eig_tol = kEigTol,
                                                     std::vector<std::string>* warnings = nullptr) {
  require_same_grid(a.body(), b.body());
  const std::size_t n = a.size();
  std::vector<std::optional<CosetArrowSet>> arrows(n * n);
  std::vector<std::vector<std::string>> notes(n);
  parallel_for(n, [&](std::size_t x) {
    for (std::size_t y = 0; y < n; ++y) {
      const auto& sa = a.arrows(ObjectId{x}, ObjectId{y});
      const auto& sb = b.arrows(ObjectId{x}, ObjectId{y});
      if (sa && sb) arrows[x * n + y] = intersect_arrow_sets(*sa, *sb, eig_tol, &notes[x]);
    }
  });
  if (warnings)
    for (auto& w : notes)
      for (auto& s : w)
        if (std::find(warnings->begin(), warnings->end(), s) == warnings->end()) warnings->push_back(std::move(s));
  return MaterialGroupoid(a.body(), std::move(arrows), a.numeric_origin() || b.numeric_origin());
}

/// Replaces SO(n) archetypes by O(n) and admits reflections in axis groups.
inline MatrixGroup with_orientation(const MatrixGroup& g, Orientation o) {
  if (o == Orientation::Special) return g;
  switch (g.kind()) {
    case GroupKind::SpecialOrthogonal: return MatrixGroup::orthogonal(g.dim());
    case GroupKind::AxisRotation: return MatrixGroup::axis_rotation(g.axis(), g.axis_reversal(), true);
    case GroupKind::Conjugated: return conjugate(with_orientation(g.base(), o), g.conjugator());
    default: return g;
  }
}

inline BodyGrid with_orientation(const BodyGrid& body, Orientation o) {
  if (o == Orientation::Special) return body;
  std::vector<MaterialPoint> pts = body.points();
  for (auto& p : pts)
    if (p.is_symbolic()) {
      SymbolicData s = p.symbolic();
      s.group = with_orientation(s.group, o);
      p.data = s;
    }
  return BodyGrid(body.dim(), body.shape(), std::move(pts), body.name());
}

/// Symmetry class at x of the composite. When both archetypes are SO/O the
/// class follows from the normalizer of the relative transplant; axes and
/// frames are mapped into the body by the first transplant.
inline SymmetryClass pointwise_class(const MaterialGroupoid& a, const MaterialGroupoid& b, const MaterialGroupoid& z,
                                     ObjectId x, double eig_tol, std::vector<std::string>* warnings) {
  const auto& pa = a.body().point(x.index);
  const auto& pb = b.body().point(x.index);
  if (pa.is_symbolic() && pb.is_symbolic()) {
    const SymbolicData da = normalized(pa.symbolic());
    const SymbolicData db = normalized(pb.symbolic());
    auto orthogonal_type = [](const MatrixGroup& g) {
      return g.kind() == GroupKind::SpecialOrthogonal || g.kind() == GroupKind::Orthogonal;
    };
    if (orthogonal_type(da.group) && orthogonal_type(db.group)) {
      SymmetryClass c = classify_normalizer(inverse(da.transplant) * db.transplant, eig_tol, warnings);
      if (c.label == SymmetryClass::Label::TransverselyIsotropic) c.axis = normalized(da.transplant * c.axis);
      if (c.label == SymmetryClass::Label::Orthotropic || c.label == SymmetryClass::Label::DiscreteOther)
        c.frame = da.transplant * c.frame;
      return c;
    }
  }
  return classify_group(z.vertex(x));
}

struct ConstituentSummary {
  bool uniform = false;
  std::size_t components = 0;
  Homogeneity homogeneity = Homogeneity::Inconclusive;
};

struct CompositeOptions {
  double eig_tol = kEigTol;
  Orientation orientation = Orientation::Special;
  HomogeneityOptions homogeneity;
};

struct CompositeReport {
  bool uniform = false;
  std::vector<std::vector<ObjectId>> components;
  std::vector<SymmetryClass> pointwise_class;  // indexed by point
  std::vector<std::string> vertex_groups;      // descriptor of G_X ∩ Ĝ_X per point
  bool core_transitive = false;
  LocalTriviality locally_trivial;
  StressFree stress_free_configuration = StressFree::Unknown;
  HomogeneityVerdict homogeneity;
  ConstituentSummary constituents[2];
  std::vector<std::string> warnings;
};

/// Stress-free rule: every relative transplant Pb^-1 Pa is a pure rotation.
inline StressFree stress_free_configuration(const BodyGrid& a, const BodyGrid& b, bool numeric_origin) {
  if (!a.all_symbolic() || !b.all_symbolic()) return StressFree::Unknown;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Matrix pa = normalized(a.point(i).symbolic()).transplant;
    const Matrix pb = normalized(b.point(i).symbolic()).transplant;
    const Polar p = polar_right(inverse(pb) * pa);
    if (max_abs(p.stretch - Matrix::identity(a.dim())) > kStressFreeTol)
      return numeric_origin ? StressFree::Unknown : StressFree::NotExists;
  }
  return StressFree::Exists;
}

inline ConstituentSummary summarize(const MaterialGroupoid& g, const HomogeneityOptions& opt) {
  const UniformityVerdict u = is_uniform(g);
  return ConstituentSummary{u.uniform, u.components.size(), is_discretely_homogeneous(g, opt).verdict};
}

/// Full composite analysis over the constituents a (horizontal) and b (vertical).
/// Throws ConsistencyFailure when uniformity and transitivity of the core disagree.
inline CompositeReport analyze_composite(const MaterialGroupoid& a, const MaterialGroupoid& b,
                                         const CompositeOptions& opt = {}) {
  require_same_grid(a.body(), b.body());
  CompositeReport r;
  const MaterialGroupoid z = intersect_material_groupoids(a, b, opt.eig_tol, &r.warnings);
  const UniformityVerdict u = is_uniform(z);
  r.uniform = u.uniform;
  r.components = u.components;

  const MaterialDoubleGroupoid dg(MaterialSide{&a}, MaterialSide{&b}, SquarePredicate::Commuting);
  const MaterialGroupoid core = core_groupoid(dg, opt.eig_tol);
  r.core_transitive = is_uniform(core).uniform;
  if (r.uniform != r.core_transitive)
    throw Error(ErrorCode::ConsistencyFailure, std::string("composite is ") + (r.uniform ? "uniform" : "not uniform") +
                                                   " but the core of its double groupoid is " +
                                                   (r.core_transitive ? "transitive" : "not transitive"));
  r.locally_trivial = is_locally_trivial(dg, opt.eig_tol);

  const std::size_t n = z.size();
  r.pointwise_class.resize(n);
  r.vertex_groups.resize(n);
  std::vector<std::vector<std::string>> notes(n);
  parallel_for(n, [&](std::size_t i) {
    r.pointwise_class[i] = pointwise_class(a, b, z, ObjectId{i}, opt.eig_tol, &notes[i]);
    r.vertex_groups[i] = z.vertex(ObjectId{i}).describe();
  });
  for (auto& w : notes)
    for (auto& s : w)
      if (std::find(r.warnings.begin(), r.warnings.end(), s) == r.warnings.end()) r.warnings.push_back(std::move(s));

  r.stress_free_configuration = stress_free_configuration(a.body(), b.body(), z.numeric_origin());
  r.homogeneity = is_discretely_homogeneous(z, opt.homogeneity);
  r.constituents[0] = summarize(a, opt.homogeneity);
  r.constituents[1] = summarize(b, opt.homogeneity);
  return r;
}

/// Body-level entry: builds both groupoids under the requested orientation.
inline CompositeReport analyze_composite(const BodyGrid& a, const BodyGrid& b, const CompositeOptions& opt = {}) {
  const MaterialGroupoid ga = build_material_groupoid(with_orientation(a, opt.orientation));
  const MaterialGroupoid gb = build_material_groupoid(with_orientation(b, opt.orientation));
  return analyze_composite(ga, gb, opt);
}

/// One label for the whole body, or "mixed".
inline std::string class_summary(const std::vector<SymmetryClass>& cls) {
  if (cls.empty()) return "none";
  for (const auto& c : cls)
    if (c.label != cls.front().label) return "mixed";
  return to_string(cls.front().label);
}

struct BodyReport {
  bool uniform = false;
  std::vector<std::vector<ObjectId>> components;
  HomogeneityVerdict homogeneity;
  std::vector<SymmetryClass> pointwise_class;
  std::vector<std::string> vertex_groups;
  std::vector<std::string> warnings;
};

inline BodyReport analyze_body(const MaterialGroupoid& g, const HomogeneityOptions& opt = {}) {
  BodyReport r;
  const UniformityVerdict u = is_uniform(g);
  r.uniform = u.uniform;
  r.components = u.components;
  r.homogeneity = is_discretely_homogeneous(g, opt);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& p = g.body().point(i);
    if (p.is_symbolic()) {
      // classify the archetype, then carry axes into the body
      const SymbolicData d = normalized(p.symbolic());
      SymmetryClass c = classify_group(d.group);
      if (c.label == SymmetryClass::Label::TransverselyIsotropic) c.axis = normalized(d.transplant * c.axis);
      if (c.label == SymmetryClass::Label::Orthotropic) c.frame = d.transplant * c.frame;
      r.pointwise_class.push_back(c);
    } else {
      r.pointwise_class.push_back(classify_group(g.vertex(ObjectId{i})));
    }
    r.vertex_groups.push_back(g.vertex(ObjectId{i}).describe());
  }
  return r;
}

}  // namespace matg
