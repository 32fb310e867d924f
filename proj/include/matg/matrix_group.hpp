#pragma once

// Symbolic descriptors for closed subgroups of GL(n), n in {2,3}:
// Trivial, Finite, SO(n), O(n), AxisRot and Conjugated(base, A) = A base A^-1.
//
// The family is closed under every intersection computed here; continuous
// groups are never sampled into lists.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matg/linalg.hpp"

namespace matg {

/// Relative tolerance for eigenvalue multiplicity decisions.
inline constexpr double kEigTol = 1e-6;
/// Tolerance for membership of products of several matrices in a group.
inline constexpr double kMemberTol = 1e-8;

enum class GroupKind { Trivial, Finite, SpecialOrthogonal, Orthogonal, AxisRotation, Conjugated };

enum class Orientation { Special, Full };  // archetype SO(n) or O(n)

class MatrixGroup;
MatrixGroup conjugate(const MatrixGroup& g, const Matrix& a);
bool contains(const MatrixGroup& g, const Matrix& m, double tol = kPayloadTol);

class MatrixGroup {
 public:
  static MatrixGroup trivial(int n) { return MatrixGroup(GroupKind::Trivial, n); }

  static MatrixGroup special_orthogonal(int n) {
    check_dim(n);
    return MatrixGroup(GroupKind::SpecialOrthogonal, n);
  }

  static MatrixGroup orthogonal(int n) {
    check_dim(n);
    return MatrixGroup(GroupKind::Orthogonal, n);
  }

  /// Orthogonal maps fixing the unit axis a (3D only). With `axis_reversal`
  /// a -> -a is also allowed; with `improper`, det = -1 is allowed.
  static MatrixGroup axis_rotation(const Vec& axis, bool axis_reversal = false, bool improper = false) {
    if (axis.n != 3) throw Error(ErrorCode::DimensionMismatch, "axis rotation groups are 3D only");
    const double l = norm(axis);
    if (l < 1e-12) throw Error(ErrorCode::InvalidBody, "axis rotation needs a nonzero axis");
    MatrixGroup g(GroupKind::AxisRotation, 3);
    g.axis_ = canonical_axis((1.0 / l) * axis);
    g.reversal_ = axis_reversal;
    g.improper_ = improper;
    return g;
  }

  /// Finite group from its complete element list. The list must contain I and
  /// be closed under products and inverses; duplicates are removed.
  static MatrixGroup finite(std::vector<Matrix> elements) {
    if (elements.empty()) throw Error(ErrorCode::NotClosed, "finite group needs at least the identity");
    const int n = elements.front().n;
    check_dim(n);
    std::vector<Matrix> uniq;
    for (const Matrix& m : elements) {
      if (m.n != n) throw Error(ErrorCode::DimensionMismatch, "finite group elements of mixed dimension");
      if (index_of(uniq, m) < 0) uniq.push_back(m);
    }
    if (index_of(uniq, Matrix::identity(n)) < 0)
      throw Error(ErrorCode::NotClosed, "finite group does not contain the identity");
    for (const Matrix& x : uniq) {
      if (!is_invertible(x) || index_of(uniq, inverse(x)) < 0)
        throw Error(ErrorCode::NotClosed, "finite group not closed under inverses");
      for (const Matrix& y : uniq)
        if (index_of(uniq, x * y) < 0) throw Error(ErrorCode::NotClosed, "finite group not closed under products");
    }
    return from_trusted_list(std::move(uniq), n);
  }

  /// Closure of a generator set; throws NotClosed past `max_order` elements.
  static MatrixGroup generated(int n, const std::vector<Matrix>& generators, std::size_t max_order = 512) {
    check_dim(n);
    std::vector<Matrix> elems{Matrix::identity(n)};
    for (const Matrix& g : generators)
      if (index_of(elems, g) < 0) elems.push_back(g);
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        for (const Matrix& p : {elems[i] * elems[j], elems[j] * elems[i]}) {
          if (index_of(elems, p) < 0) {
            elems.push_back(p);
            if (elems.size() > max_order) throw Error(ErrorCode::NotClosed, "generated group is not finite");
          }
        }
      }
    }
    return from_trusted_list(std::move(elems), n);
  }

  GroupKind kind() const { return kind_; }
  int dim() const { return n_; }
  const std::vector<Matrix>& elements() const { return elements_; }
  const Vec& axis() const { return axis_; }
  bool axis_reversal() const { return reversal_; }
  bool improper() const { return improper_; }
  const MatrixGroup& base() const { return *base_; }
  const Matrix& conjugator() const { return conj_; }
  const Matrix& conjugator_inverse() const { return conj_inv_; }

  /// Trivial or Finite.
  bool is_discrete() const { return kind_ == GroupKind::Trivial || kind_ == GroupKind::Finite; }
  std::size_t order() const {
    if (kind_ == GroupKind::Trivial) return 1;
    if (kind_ == GroupKind::Finite) return elements_.size();
    return 0;  // infinite
  }

  /// Element list of a discrete group (Trivial gives {I}).
  std::vector<Matrix> element_list() const {
    if (kind_ == GroupKind::Trivial) return {Matrix::identity(n_)};
    return elements_;
  }

  /// (Lie dimension, number of connected components).
  std::pair<int, std::size_t> signature() const {
    switch (kind_) {
      case GroupKind::Trivial: return {0, 1};
      case GroupKind::Finite: return {0, elements_.size()};
      case GroupKind::SpecialOrthogonal: return {n_ * (n_ - 1) / 2, 1};
      case GroupKind::Orthogonal: return {n_ * (n_ - 1) / 2, 2};
      case GroupKind::AxisRotation: return {1, static_cast<std::size_t>((reversal_ ? 2 : 1) * (improper_ ? 2 : 1))};
      case GroupKind::Conjugated: return base_->signature();
    }
    return {0, 0};
  }

  std::string describe() const;

 private:
  friend MatrixGroup conjugate(const MatrixGroup& g, const Matrix& a);
  friend MatrixGroup finite_or_trivial(std::vector<Matrix> elements, int n);

  MatrixGroup(GroupKind k, int n) : kind_(k), n_(n), axis_(Vec::zero(n)), conj_(Matrix::identity(n)), conj_inv_(Matrix::identity(n)) {}

  static void check_dim(int n) {
    if (n != 2 && n != 3) throw Error(ErrorCode::DimensionMismatch, "only dimensions 2 and 3 are supported");
  }

  static int index_of(const std::vector<Matrix>& xs, const Matrix& m) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (approx_equal(xs[i], m)) return static_cast<int>(i);
    return -1;
  }

  // Sign-normalize so equal lines give equal descriptors.
  static Vec canonical_axis(Vec a) {
    for (int i = 0; i < a.n; ++i) {
      if (std::abs(a[i]) > 1e-12) {
        if (a[i] < 0) a = -1.0 * a;
        break;
      }
    }
    return a;
  }

  static MatrixGroup from_trusted_list(std::vector<Matrix> elems, int n) {
    if (elems.size() <= 1) return trivial(n);
    MatrixGroup g(GroupKind::Finite, n);
    g.elements_ = std::move(elems);
    return g;
  }

  GroupKind kind_;
  int n_;
  std::vector<Matrix> elements_;
  Vec axis_;
  bool reversal_ = false;
  bool improper_ = false;
  std::shared_ptr<const MatrixGroup> base_;
  Matrix conj_;
  Matrix conj_inv_;
};

/// Finite group from a list already known to be a group (e.g. a filtered
/// subgroup); only deduplicates.
inline MatrixGroup finite_or_trivial(std::vector<Matrix> elements, int n) {
  std::vector<Matrix> uniq;
  for (Matrix& m : elements)
    if (MatrixGroup::index_of(uniq, m) < 0) uniq.push_back(std::move(m));
  return MatrixGroup::from_trusted_list(std::move(uniq), n);
}

/// {a g a^-1 : g in g}. Orthogonal (or conformal) conjugators keep SO/O fixed
/// and rotate AxisRot axes; finite groups conjugate element-wise; other
/// conjugators wrap the group, flattening nested conjugations.
inline MatrixGroup conjugate(const MatrixGroup& g, const Matrix& a) {
  if (a.n != g.dim()) throw Error(ErrorCode::DimensionMismatch, "conjugator dimension differs from group");
  if (!is_invertible(a)) throw Error(ErrorCode::SingularConjugator, "conjugator is singular");
  const Matrix a_inv = inverse(a);
  switch (g.kind()) {
    case GroupKind::Trivial: return g;
    case GroupKind::Finite: {
      std::vector<Matrix> es;
      es.reserve(g.elements().size());
      for (const Matrix& m : g.elements()) es.push_back(a * m * a_inv);
      return finite_or_trivial(std::move(es), g.dim());
    }
    case GroupKind::Conjugated: return conjugate(g.base(), a * g.conjugator());
    default: break;
  }
  if (is_conformal(a)) {
    const Matrix q = (1.0 / std::pow(std::abs(det(a)), 1.0 / a.n)) * a;  // orthogonal up to roundoff
    if (g.kind() == GroupKind::AxisRotation)
      return MatrixGroup::axis_rotation(normalized(q * g.axis()), g.axis_reversal(), g.improper());
    return g;
  }
  MatrixGroup c(GroupKind::Conjugated, g.dim());
  c.base_ = std::make_shared<const MatrixGroup>(g);
  c.conj_ = a;
  c.conj_inv_ = a_inv;
  return c;
}

inline bool contains(const MatrixGroup& g, const Matrix& m, double tol) {
  if (m.n != g.dim()) throw Error(ErrorCode::DimensionMismatch, "matrix dimension differs from group");
  switch (g.kind()) {
    case GroupKind::Trivial: return frobenius(m - Matrix::identity(m.n)) < tol;
    case GroupKind::Finite:
      for (const Matrix& e : g.elements())
        if (frobenius(m - e) < tol) return true;
      return false;
    case GroupKind::SpecialOrthogonal: return orthogonality_defect(m) < tol && det(m) > 0;
    case GroupKind::Orthogonal: return orthogonality_defect(m) < tol;
    case GroupKind::AxisRotation: {
      if (orthogonality_defect(m) >= tol) return false;
      if (!g.improper() && det(m) <= 0) return false;
      const Vec ma = m * g.axis();
      if (norm(ma - g.axis()) < tol) return true;
      return g.axis_reversal() && norm(ma + g.axis()) < tol;
    }
    case GroupKind::Conjugated: return contains(g.base(), g.conjugator_inverse() * m * g.conjugator(), tol);
  }
  return false;
}

inline std::string MatrixGroup::describe() const {
  switch (kind_) {
    case GroupKind::Trivial: return "Trivial";
    case GroupKind::Finite: return "Finite(order " + std::to_string(elements_.size()) + ")";
    case GroupKind::SpecialOrthogonal: return "SO(" + std::to_string(n_) + ")";
    case GroupKind::Orthogonal: return "O(" + std::to_string(n_) + ")";
    case GroupKind::AxisRotation: {
      char buf[96];
      std::snprintf(buf, sizeof buf, "AxisRot(%.6g, %.6g, %.6g%s%s)", axis_[0], axis_[1], axis_[2],
                    reversal_ ? ", reversal" : "", improper_ ? ", improper" : "");
      return buf;
    }
    case GroupKind::Conjugated: return "Conjugated(" + base_->describe() + ", " + to_string(conj_) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Symmetry classes and orthogonal normalizers

struct SymmetryClass {
  enum class Label { Isotropic, TransverselyIsotropic, Orthotropic, DiscreteOther, Trivial };
  Label label = Label::Trivial;
  Vec axis = Vec::zero(3);             // TransverselyIsotropic only
  Matrix frame = Matrix::identity(3);  // Orthotropic only (columns)
};

inline std::string to_string(SymmetryClass::Label l) {
  switch (l) {
    case SymmetryClass::Label::Isotropic: return "isotropic";
    case SymmetryClass::Label::TransverselyIsotropic: return "transversely_isotropic";
    case SymmetryClass::Label::Orthotropic: return "orthotropic";
    case SymmetryClass::Label::DiscreteOther: return "discrete_other";
    case SymmetryClass::Label::Trivial: return "trivial";
  }
  return "?";
}

/// Orthogonal matrices commuting with a symmetric positive definite C,
/// grouped by eigenvalue multiplicity.
struct Normalizer {
  MatrixGroup group;               // subgroup of O(n)
  EigSym eig;                      // of C
  std::vector<int> block;          // block id per eigenvalue, ascending
  int distinct = 0;                // number of distinct eigenvalue blocks
  std::vector<std::string> warnings;
};

/// Sign matrices diag(+-1, ...) expressed in the orthonormal frame `v`.
inline std::vector<Matrix> frame_sign_matrices(const Matrix& v) {
  const int n = v.n;
  std::vector<Matrix> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec d{n, {}};
    for (int i = 0; i < n; ++i) d[i] = (mask >> i) & 1 ? -1.0 : 1.0;
    out.push_back(v * Matrix::diag(d) * transpose(v));
  }
  return out;
}

inline Normalizer orthogonal_normalizer(const Matrix& c, double eig_tol = kEigTol) {
  Normalizer r{MatrixGroup::trivial(c.n), eig_sym(c), {}, 0, {}};
  const int n = c.n;
  const double top = std::abs(r.eig.values[n - 1]);
  r.block.assign(static_cast<std::size_t>(n), 0);
  for (int i = 1; i < n; ++i) {
    const double gap = (r.eig.values[i] - r.eig.values[i - 1]) / top;
    const bool merged = gap <= eig_tol;
    r.block[static_cast<std::size_t>(i)] = r.block[static_cast<std::size_t>(i - 1)] + (merged ? 0 : 1);
    if (merged && gap > 1e-12) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "near-degenerate eigenvalues %.12g and %.12g merged (relative gap %.3g <= %.3g); coarser class reported",
                    r.eig.values[i - 1], r.eig.values[i], gap, eig_tol);
      r.warnings.emplace_back(buf);
    } else if (!merged && gap <= 100 * eig_tol) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "eigenvalues %.12g and %.12g nearly coincide (relative gap %.3g); classification is sensitive to the tolerance",
                    r.eig.values[i - 1], r.eig.values[i], gap);
      r.warnings.emplace_back(buf);
    }
  }
  r.distinct = r.block[static_cast<std::size_t>(n - 1)] + 1;
  if (r.distinct == 1) {
    r.group = MatrixGroup::orthogonal(n);
  } else if (r.distinct == n) {
    r.group = finite_or_trivial(frame_sign_matrices(r.eig.vectors), n);
  } else {
    // n == 3 with one double eigenvalue: the single one names the axis
    const int single = r.block[0] == r.block[1] ? 2 : 0;
    r.group = MatrixGroup::axis_rotation(r.eig.vectors.col(single), true, true);
  }
  return r;
}

namespace detail {

// Intersection of two unconjugated descriptors from
// {Trivial, Finite, SO, O, AxisRot}.
inline MatrixGroup plain_intersect(const MatrixGroup& a, const MatrixGroup& b) {
  const int n = a.dim();
  if (a.kind() == GroupKind::Trivial || b.kind() == GroupKind::Trivial) return MatrixGroup::trivial(n);
  if (a.kind() == GroupKind::Finite || b.kind() == GroupKind::Finite) {
    const MatrixGroup& f = a.kind() == GroupKind::Finite ? a : b;
    const MatrixGroup& o = a.kind() == GroupKind::Finite ? b : a;
    std::vector<Matrix> keep;
    for (const Matrix& m : f.elements())
      if (contains(o, m, kMemberTol)) keep.push_back(m);
    return finite_or_trivial(std::move(keep), n);
  }
  const auto proper_only = [](const MatrixGroup& g) { return g.kind() == GroupKind::SpecialOrthogonal; };
  if (a.kind() != GroupKind::AxisRotation && b.kind() != GroupKind::AxisRotation) {
    return proper_only(a) || proper_only(b) ? MatrixGroup::special_orthogonal(n) : MatrixGroup::orthogonal(n);
  }
  if (a.kind() != GroupKind::AxisRotation || b.kind() != GroupKind::AxisRotation) {
    const MatrixGroup& ax = a.kind() == GroupKind::AxisRotation ? a : b;
    const MatrixGroup& other = a.kind() == GroupKind::AxisRotation ? b : a;
    return MatrixGroup::axis_rotation(ax.axis(), ax.axis_reversal(), ax.improper() && !proper_only(other));
  }
  const double c = dot(a.axis(), b.axis());
  if (std::abs(std::abs(c) - 1.0) < 1e-9) {
    return MatrixGroup::axis_rotation(a.axis(), a.axis_reversal() && b.axis_reversal(), a.improper() && b.improper());
  }
  // Non-parallel axes: every common element preserves both lines, hence the
  // frame (a, b_perp, a x b_perp) up to signs.
  const Vec e1 = a.axis();
  const Vec e2 = normalized(b.axis() - c * e1);
  const Vec e3 = cross(e1, e2);
  std::vector<Matrix> keep;
  for (const Matrix& m : frame_sign_matrices(Matrix::from_columns(e1, e2, e3)))
    if (contains(a, m, kMemberTol) && contains(b, m, kMemberTol)) keep.push_back(m);
  return finite_or_trivial(std::move(keep), 3);
}

struct Unconjugated {
  MatrixGroup base;
  Matrix a;
};

inline Unconjugated split(const MatrixGroup& g) {
  if (g.kind() == GroupKind::Conjugated) return {g.base(), g.conjugator()};
  return {g, Matrix::identity(g.dim())};
}

}  // namespace detail

/// g1 ∩ g2. Conjugated orthogonal-type pairs are reduced with the left polar
/// factor H = S U of the relative conjugator:
///   B1 ∩ H B2 H^-1 = B1 ∩ N(H H^T) ∩ U B2 U^T.
inline MatrixGroup intersect(const MatrixGroup& g1, const MatrixGroup& g2, double eig_tol = kEigTol,
                             std::vector<std::string>* warnings = nullptr) {
  if (g1.dim() != g2.dim()) throw Error(ErrorCode::DimensionMismatch, "intersecting groups of different dimension");
  const int n = g1.dim();
  if (g1.kind() == GroupKind::Trivial || g2.kind() == GroupKind::Trivial) return MatrixGroup::trivial(n);
  if (g1.is_discrete() || g2.is_discrete()) {
    const MatrixGroup& f = g1.is_discrete() ? g1 : g2;
    const MatrixGroup& o = g1.is_discrete() ? g2 : g1;
    std::vector<Matrix> keep;
    for (const Matrix& m : f.elements())
      if (contains(o, m, kMemberTol)) keep.push_back(m);
    return finite_or_trivial(std::move(keep), n);
  }
  const auto [b1, a1] = detail::split(g1);
  const auto [b2, a2] = detail::split(g2);
  const Matrix h = inverse(a1) * a2;
  const Polar p = polar_left(h);
  const Normalizer nz = orthogonal_normalizer(h * transpose(h), eig_tol);
  if (warnings) warnings->insert(warnings->end(), nz.warnings.begin(), nz.warnings.end());
  const MatrixGroup b2_rot = conjugate(b2, p.rotation);
  const MatrixGroup r = detail::plain_intersect(detail::plain_intersect(b1, nz.group), b2_rot);
  return conjugate(r, a1);
}

/// a ⊆ b, decided by comparing (dimension, components) of a ∩ b and a.
inline bool is_subgroup(const MatrixGroup& a, const MatrixGroup& b, double eig_tol = kEigTol) {
  return intersect(a, b, eig_tol).signature() == a.signature();
}

inline bool same_group(const MatrixGroup& a, const MatrixGroup& b, double eig_tol = kEigTol) {
  return is_subgroup(a, b, eig_tol) && is_subgroup(b, a, eig_tol);
}

/// A random member; continuous parts are Haar distributed.
inline Matrix random_element(const MatrixGroup& g, Rng& rng) {
  const int n = g.dim();
  std::uniform_int_distribution<int> coin(0, 1);
  switch (g.kind()) {
    case GroupKind::Trivial: return Matrix::identity(n);
    case GroupKind::Finite: {
      std::uniform_int_distribution<std::size_t> pick(0, g.elements().size() - 1);
      return g.elements()[pick(rng)];
    }
    case GroupKind::SpecialOrthogonal: return random_rotation(n, rng);
    case GroupKind::Orthogonal: {
      Matrix r = random_rotation(n, rng);
      if (coin(rng)) {
        Matrix f = Matrix::identity(n);
        f(0, 0) = -1;
        r = r * f;
      }
      return r;
    }
    case GroupKind::AxisRotation: {
      std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
      const Vec a = g.axis();
      const Vec p = any_perpendicular(a);
      Matrix r = rotation3(a, ang(rng));
      if (g.axis_reversal() && coin(rng)) r = r * rotation3(p, std::numbers::pi);
      if (g.improper() && coin(rng)) r = r * (Matrix::identity(3) - 2.0 * outer(p, p));
      return r;
    }
    case GroupKind::Conjugated: return g.conjugator() * random_element(g.base(), rng) * g.conjugator_inverse();
  }
  return Matrix::identity(n);
}

/// Symmetry class of a normalizer computed from C = h h^T, which is the
/// matrix whose commutant decides SO ∩ h SO h^-1.
inline SymmetryClass classify_normalizer(const Matrix& h, double eig_tol = kEigTol,
                                         std::vector<std::string>* warnings = nullptr) {
  if (!is_invertible(h)) throw Error(ErrorCode::SingularMatrix, "classify_normalizer needs an invertible matrix");
  const Normalizer nz = orthogonal_normalizer(h * transpose(h), eig_tol);
  if (warnings) warnings->insert(warnings->end(), nz.warnings.begin(), nz.warnings.end());
  SymmetryClass c;
  c.axis = Vec::zero(h.n);
  c.frame = Matrix::identity(h.n);
  if (nz.distinct == 1) {
    c.label = SymmetryClass::Label::Isotropic;
  } else if (h.n == 2) {
    c.label = SymmetryClass::Label::DiscreteOther;
    c.frame = nz.eig.vectors;
  } else if (nz.distinct == 3) {
    c.label = SymmetryClass::Label::Orthotropic;
    c.frame = nz.eig.vectors;
    if (det(c.frame) < 0)
      for (int i = 0; i < 3; ++i) c.frame(i, 2) = -c.frame(i, 2);
  } else {
    c.label = SymmetryClass::Label::TransverselyIsotropic;
    c.axis = nz.group.axis();
  }
  return c;
}

/// Symmetry class of an arbitrary descriptor.
inline SymmetryClass classify_group(const MatrixGroup& g) {
  SymmetryClass c;
  c.axis = Vec::zero(g.dim());
  c.frame = Matrix::identity(g.dim());
  switch (g.kind()) {
    case GroupKind::Trivial: c.label = SymmetryClass::Label::Trivial; return c;
    case GroupKind::SpecialOrthogonal:
    case GroupKind::Orthogonal: c.label = SymmetryClass::Label::Isotropic; return c;
    case GroupKind::AxisRotation:
      c.label = SymmetryClass::Label::TransverselyIsotropic;
      c.axis = g.axis();
      return c;
    case GroupKind::Conjugated: {
      SymmetryClass b = classify_group(g.base());
      if (b.label == SymmetryClass::Label::TransverselyIsotropic) b.axis = normalized(g.conjugator() * b.axis);
      return b;
    }
    case GroupKind::Finite: break;
  }
  c.label = SymmetryClass::Label::DiscreteOther;
  if (g.dim() != 3) return c;
  // orthotropic: pi-rotations about three mutually orthogonal axes present
  std::vector<Vec> axes;
  for (const Matrix& m : g.elements()) {
    if (orthogonality_defect(m) > kMemberTol || det(m) < 0 || std::abs(trace(m) + 1) > 1e-8) continue;
    // pi-rotation: m = 2 a a^T - I
    const Matrix s = 0.5 * (m + Matrix::identity(3));
    int best = 0;
    for (int j = 1; j < 3; ++j)
      if (s(j, j) > s(best, best)) best = j;
    axes.push_back(normalized(s.col(best)));
  }
  const std::size_t order = g.elements().size();
  if (axes.size() == 3 && (order == 4 || order == 8) && std::abs(dot(axes[0], axes[1])) < 1e-8 &&
      std::abs(dot(axes[0], axes[2])) < 1e-8 && std::abs(dot(axes[1], axes[2])) < 1e-8) {
    c.label = SymmetryClass::Label::Orthotropic;
    c.frame = Matrix::from_columns(axes[0], axes[1], axes[2]);
    if (det(c.frame) < 0) c.frame = Matrix::from_columns(axes[0], axes[2], axes[1]);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Two-sided cosets L·G·R and their intersections

/// The set {left * g * right : g in group}.
struct CosetForm {
  Matrix left;
  MatrixGroup group;
  Matrix right;
};

inline CosetForm unconjugated(CosetForm c) {
  if (c.group.kind() == GroupKind::Conjugated) {
    c.left = c.left * c.group.conjugator();
    c.right = c.group.conjugator_inverse() * c.right;
    MatrixGroup b = c.group.base();
    c.group = std::move(b);
  }
  return c;
}

inline bool coset_contains(const CosetForm& c, const Matrix& m, double tol = kMemberTol) {
  return contains(c.group, inverse(c.left) * m * inverse(c.right), tol);
}

inline Matrix random_member(const CosetForm& c, Rng& rng) { return c.left * random_element(c.group, rng) * c.right; }

namespace detail {

// g must map u to +w, or to +-w when `either_sign`.
struct LineConstraint {
  Vec u;
  Vec w;
  bool either_sign;
};

struct OrthoProblem {
  int n;
  std::vector<LineConstraint> lines;
  int det_sign = 0;  // 0 free, else required det
  bool infeasible = false;

  void require_det(int s) {
    if (det_sign != 0 && det_sign != s) infeasible = true;
    det_sign = s;
  }
};

inline Vec rot90(const Vec& v) { return Vec::of({-v[1], v[0]}); }

// One orthogonal g meeting the prescribed line images and det sign.
inline std::optional<Matrix> solve_orthogonal(const OrthoProblem& p) {
  if (p.infeasible) return std::nullopt;
  const std::size_t m = p.lines.size();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    bool skip = false;
    std::vector<Vec> us, ws;
    for (std::size_t i = 0; i < m; ++i) {
      const bool neg = (mask >> i) & 1u;
      if (neg && !p.lines[i].either_sign) {
        skip = true;
        break;
      }
      us.push_back(p.lines[i].u);
      ws.push_back(neg ? -1.0 * p.lines[i].w : p.lines[i].w);
    }
    if (skip) continue;
    bool gram_ok = true;
    for (std::size_t i = 0; i < m && gram_ok; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        if (std::abs(dot(us[i], us[j]) - dot(ws[i], ws[j])) > 1e-7) {
          gram_ok = false;
          break;
        }
    if (!gram_ok) continue;
    std::vector<Vec> es, fs;
    for (std::size_t i = 0; i < m && static_cast<int>(es.size()) < p.n; ++i) {
      Vec e = us[i], f = ws[i];
      for (std::size_t k = 0; k < es.size(); ++k) {
        const double c = dot(us[i], es[k]);
        e = e - c * es[k];
        f = f - c * fs[k];
      }
      const double le = norm(e);
      if (le < 1e-6) continue;
      es.push_back((1.0 / le) * e);
      fs.push_back(normalized(f));
    }
    const int want = p.det_sign == 0 ? 1 : p.det_sign;
    if (es.empty()) {
      es.push_back(Vec::unit(p.n, 0));
      fs.push_back(Vec::unit(p.n, 0));
    }
    if (p.n == 2) {
      if (es.size() == 1) {
        es.push_back(rot90(es[0]));
        fs.push_back(static_cast<double>(want) * rot90(fs[0]));
      }
    } else {
      if (es.size() == 1) {
        es.push_back(any_perpendicular(es[0]));
        fs.push_back(any_perpendicular(fs[0]));
      }
      if (es.size() == 2) {
        es.push_back(cross(es[0], es[1]));
        fs.push_back(static_cast<double>(want) * cross(fs[0], fs[1]));
      }
    }
    Matrix g = Matrix::zero(p.n);
    for (std::size_t k = 0; k < es.size(); ++k) g = g + outer(fs[k], es[k]);
    if (p.det_sign != 0 && det(g) * p.det_sign < 0) continue;
    return g;
  }
  return std::nullopt;
}

// Constraints saying x·g·y lies in the plain orthogonal-type group b, where
// x and y are orthogonal.
inline void add_membership(OrthoProblem& p, const MatrixGroup& b, const Matrix& x, const Matrix& y) {
  const int sign = det(x) * det(y) > 0 ? 1 : -1;
  switch (b.kind()) {
    case GroupKind::SpecialOrthogonal: p.require_det(sign); break;
    case GroupKind::Orthogonal: break;
    case GroupKind::AxisRotation:
      // x g y a = +-a  <=>  g (y a) = +-(x^T a)
      p.lines.push_back({y * b.axis(), transpose(x) * b.axis(), b.axis_reversal()});
      if (!b.improper()) p.require_det(sign);
      break;
    default: throw Error(ErrorCode::UnsupportedPair, "coset solver expects an orthogonal-type group");
  }
}

}  // namespace detail

/// Some element of the intersection of two cosets, or nothing when they are
/// disjoint. Discrete groups are enumerated; for two orthogonal-type groups
/// the problem K g L ∈ G_b, g ∈ G_a (K = Lb^-1 La, L = Ra Rb^-1) reduces to
/// prescribed line images of an orthogonal g.
inline std::optional<Matrix> coset_witness(const CosetForm& ca, const CosetForm& cb, double eig_tol = kEigTol) {
  const CosetForm a = unconjugated(ca);
  const CosetForm b = unconjugated(cb);
  if (a.group.dim() != b.group.dim()) throw Error(ErrorCode::DimensionMismatch, "coset dimensions differ");
  const int n = a.group.dim();
  if (a.group.is_discrete() || b.group.is_discrete()) {
    const bool a_small = a.group.is_discrete() && (!b.group.is_discrete() || a.group.order() <= b.group.order());
    const CosetForm& f = a_small ? a : b;
    const CosetForm& o = a_small ? b : a;
    for (const Matrix& g : f.group.element_list()) {
      const Matrix x = f.left * g * f.right;
      if (coset_contains(o, x)) return x;
    }
    return std::nullopt;
  }
  const Matrix k = inverse(b.left) * a.left;
  const Matrix l = a.right * inverse(b.right);
  const Normalizer nz = orthogonal_normalizer(transpose(k) * k, eig_tol);
  const EigSym& ek = nz.eig;
  const EigSym el = eig_sym(inverse(l * transpose(l)));
  const double top = std::max(ek.values[n - 1], el.values[n - 1]);
  for (int i = 0; i < n; ++i)
    if (std::abs(ek.values[i] - el.values[i]) > 1e-8 * top) return std::nullopt;
  const Matrix ok = polar_right(k).rotation;
  const Matrix ol = polar_left(l).rotation;

  detail::OrthoProblem p{n, {}, 0, false};
  detail::add_membership(p, a.group, Matrix::identity(n), Matrix::identity(n));
  detail::add_membership(p, b.group, ok, ol);
  // g must carry eigenspaces of (L L^T)^-1 onto the matching ones of K^T K
  for (int i = 0; i < n; ++i) {
    int count = 0;
    for (int j = 0; j < n; ++j) count += nz.block[static_cast<std::size_t>(j)] == nz.block[static_cast<std::size_t>(i)];
    if (count == 1) p.lines.push_back({el.vectors.col(i), ek.vectors.col(i), true});
  }
  const auto g = detail::solve_orthogonal(p);
  if (!g) return std::nullopt;
  if (!contains(a.group, *g, 1e-7) || !contains(b.group, k * *g * l, 1e-7)) return std::nullopt;
  return a.left * *g * a.right;
}

}  // namespace matg
