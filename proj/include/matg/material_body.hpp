#pragma once

// Discretized bodies and their material groupoids.
//
// A symbolic point carries an archetype group G and a transplant P(X) with
// psi_X(F) = psi_archetype(F P(X)). Then
//   vertex(X)      = P(X) G P(X)^-1
//   arrows(X -> Y) = P(Y) G P(X)^-1 = [P(Y) P(X)^-1] vertex(X).

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "matg/constitutive.hpp"
#include "matg/groupoid.hpp"
#include "matg/matrix_group.hpp"

namespace matg {

struct SymbolicData {
  MatrixGroup group;
  Matrix transplant;
  std::string material = "default";
};

struct NumericData {
  ConstitutiveModel model;
};

struct MaterialPoint {
  ObjectId id;
  std::array<int, 3> pos{};
  std::variant<SymbolicData, NumericData> data{NumericData{}};

  bool is_symbolic() const { return std::holds_alternative<SymbolicData>(data); }
  const SymbolicData& symbolic() const { return std::get<SymbolicData>(data); }
  const NumericData& numeric() const { return std::get<NumericData>(data); }
};

/// Grid plaquette: four point indices in cyclic order.
using Plaquette = std::array<std::size_t, 4>;

class BodyGrid {
 public:
  BodyGrid() = default;

  /// Validates positions against the grid shape and renumbers ids by order.
  BodyGrid(int dim, std::array<int, 3> shape, std::vector<MaterialPoint> points, std::string name = {})
      : dim_(dim), shape_(shape), points_(std::move(points)), name_(std::move(name)) {
    if (dim != 2 && dim != 3) throw Error(ErrorCode::InvalidBody, "body dimension must be 2 or 3");
    for (int k = 0; k < 3; ++k) {
      if (shape_[static_cast<std::size_t>(k)] < 1) throw Error(ErrorCode::InvalidBody, "grid extents must be positive");
      if (k >= dim && shape_[static_cast<std::size_t>(k)] != 1)
        throw Error(ErrorCode::InvalidBody, "grid has more directions than the body dimension");
    }
    if (points_.empty()) throw Error(ErrorCode::InvalidBody, "body has no points");
    index_.assign(static_cast<std::size_t>(shape_[0] * shape_[1] * shape_[2]), npos);
    for (std::size_t i = 0; i < points_.size(); ++i) {
      MaterialPoint& p = points_[i];
      p.id = ObjectId{i};
      for (int k = 0; k < 3; ++k)
        if (p.pos[static_cast<std::size_t>(k)] < 0 || p.pos[static_cast<std::size_t>(k)] >= shape_[static_cast<std::size_t>(k)])
          throw Error(ErrorCode::InvalidBody, "point " + std::to_string(i) + " lies outside the grid");
      std::size_t& slot = index_[cell(p.pos)];
      if (slot != npos) throw Error(ErrorCode::InvalidBody, "two points share grid position");
      slot = i;
      if (p.is_symbolic()) {
        const SymbolicData& s = p.symbolic();
        if (s.group.dim() != dim || s.transplant.n != dim)
          throw Error(ErrorCode::DimensionMismatch, "point " + std::to_string(i) + " data does not match the body dimension");
        if (!is_invertible(s.transplant)) throw Error(ErrorCode::SingularMatrix, "point " + std::to_string(i) + " transplant is singular");
      } else if (p.numeric().model.dim != dim) {
        throw Error(ErrorCode::DimensionMismatch, "point " + std::to_string(i) + " model does not match the body dimension");
      }
    }
  }

  int dim() const { return dim_; }
  const std::array<int, 3>& shape() const { return shape_; }
  const std::vector<MaterialPoint>& points() const { return points_; }
  const MaterialPoint& point(std::size_t i) const { return points_.at(i); }
  std::size_t size() const { return points_.size(); }
  const std::string& name() const { return name_; }

  bool all_symbolic() const {
    for (const auto& p : points_)
      if (!p.is_symbolic()) return false;
    return true;
  }
  bool any_symbolic() const {
    for (const auto& p : points_)
      if (p.is_symbolic()) return true;
    return false;
  }

  std::optional<std::size_t> at(std::array<int, 3> pos) const {
    for (int k = 0; k < 3; ++k)
      if (pos[static_cast<std::size_t>(k)] < 0 || pos[static_cast<std::size_t>(k)] >= shape_[static_cast<std::size_t>(k)]) return std::nullopt;
    const std::size_t i = index_[cell(pos)];
    if (i == npos) return std::nullopt;
    return i;
  }

  /// Grid edges (i < j) between points one step apart along an axis.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (int k = 0; k < 3; ++k) {
        auto q = points_[i].pos;
        ++q[static_cast<std::size_t>(k)];
        if (auto j = at(q)) out.emplace_back(i, *j);
      }
    return out;
  }

  /// All unit squares in the coordinate planes whose four corners exist.
  std::vector<Plaquette> plaquettes() const {
    std::vector<Plaquette> out;
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          auto pa = points_[i].pos, pb = points_[i].pos, pab = points_[i].pos;
          ++pa[static_cast<std::size_t>(a)];
          ++pb[static_cast<std::size_t>(b)];
          ++pab[static_cast<std::size_t>(a)];
          ++pab[static_cast<std::size_t>(b)];
          auto ja = at(pa), jb = at(pb), jab = at(pab);
          if (ja && jb && jab) out.push_back({i, *ja, *jab, *jb});
        }
    return out;
  }

  /// Position of point i as an n-vector (unit grid spacing).
  Vec position(std::size_t i) const {
    Vec v{dim_, {}};
    for (int k = 0; k < dim_; ++k) v[k] = points_[i].pos[static_cast<std::size_t>(k)];
    return v;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t cell(const std::array<int, 3>& p) const {
    return static_cast<std::size_t>((p[2] * shape_[1] + p[1]) * shape_[0] + p[0]);
  }

  int dim_ = 2;
  std::array<int, 3> shape_{1, 1, 1};
  std::vector<MaterialPoint> points_;
  std::vector<std::size_t> index_;
  std::string name_;
};

/// Symbolic data with a conjugated archetype folded into the transplant:
/// (Conjugated(B, A), P) -> (B, P A). Arrow sets are unchanged.
inline SymbolicData normalized(const SymbolicData& s) {
  if (s.group.kind() != GroupKind::Conjugated) return s;
  return SymbolicData{s.group.base(), s.transplant * s.group.conjugator(), s.material};
}

/// The coset representative * source_group of maps X -> Y.
struct CosetArrowSet {
  ObjectId source;
  ObjectId target;
  Matrix representative;
  MatrixGroup source_group;

  CosetForm form() const { return CosetForm{representative, source_group, Matrix::identity(representative.n)}; }

  bool contains(const Matrix& m, double tol = kMemberTol) const {
    return matg::contains(source_group, inverse(representative) * m, tol);
  }

  MatrixGroup target_group() const { return conjugate(source_group, representative); }

  CosetArrowSet inverse_set() const {
    return CosetArrowSet{target, source, inverse(representative), target_group()};
  }
};

/// after ∘ before, i.e. first `before` (X -> Y) then `after` (Y -> Z).
inline CosetArrowSet compose(const CosetArrowSet& after, const CosetArrowSet& before) {
  if (before.target != after.source) throw Error(ErrorCode::NotComposable, "arrow sets do not share the middle point");
  return CosetArrowSet{before.source, after.target, after.representative * before.representative, before.source_group};
}

/// Set equality of two arrow sets.
inline bool same_arrow_set(const CosetArrowSet& a, const CosetArrowSet& b, double eig_tol = kEigTol) {
  return a.source == b.source && a.target == b.target && same_group(a.source_group, b.source_group, eig_tol) &&
         a.contains(b.representative);
}

/// a ∩ b as a coset of the intersected source groups, or nothing when empty.
inline std::optional<CosetArrowSet> intersect_arrow_sets(const CosetArrowSet& a, const CosetArrowSet& b,
                                                         double eig_tol = kEigTol, std::vector<std::string>* warnings = nullptr) {
  if (a.source != b.source || a.target != b.target) throw Error(ErrorCode::BodyMismatch, "arrow sets join different points");
  const auto w = coset_witness(a.form(), b.form(), eig_tol);
  if (!w) return std::nullopt;
  return CosetArrowSet{a.source, a.target, *w, intersect(a.source_group, b.source_group, eig_tol, warnings)};
}

class MaterialGroupoid {
 public:
  /// Assembles a groupoid from per-pair arrow sets (row = source, col = target),
  /// checking that loops are present and existence is closed under composition.
  MaterialGroupoid(BodyGrid body, std::vector<std::optional<CosetArrowSet>> arrows, bool numeric_origin = false)
      : body_(std::move(body)), arrows_(std::move(arrows)), numeric_origin_(numeric_origin) {
    const std::size_t n = body_.size();
    if (arrows_.size() != n * n) throw Error(ErrorCode::BodyMismatch, "arrow table does not match the body size");
    for (std::size_t x = 0; x < n; ++x) {
      const auto& loop = arrows_[x * n + x];
      if (!loop) throw Error(ErrorCode::ConsistencyFailure, "missing loop arrows at point " + std::to_string(x));
      vertex_.push_back(loop->source_group);
    }
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (!arrows_[x * n + y]) continue;
        for (std::size_t z = 0; z < n; ++z)
          if (arrows_[y * n + z] && !arrows_[x * n + z])
            throw Error(ErrorCode::ConsistencyFailure, "arrow sets are not closed under composition");
      }
  }

  const BodyGrid& body() const { return body_; }
  std::size_t size() const { return body_.size(); }
  bool numeric_origin() const { return numeric_origin_; }

  const std::optional<CosetArrowSet>& arrows(ObjectId x, ObjectId y) const {
    if (x.index >= size() || y.index >= size()) throw Error(ErrorCode::UnknownObject, "point not in body");
    return arrows_[x.index * size() + y.index];
  }

  const MatrixGroup& vertex(ObjectId x) const {
    if (x.index >= size()) throw Error(ErrorCode::UnknownObject, "point not in body");
    return vertex_[x.index];
  }

  int dim() const { return body_.dim(); }

 private:
  BodyGrid body_;
  std::vector<std::optional<CosetArrowSet>> arrows_;
  std::vector<MatrixGroup> vertex_;
  bool numeric_origin_ = false;
};

/// Material groupoid of an all-symbolic body. Points are isomorphic exactly
/// when they carry the same material label; one label must use one archetype.
inline MaterialGroupoid build_material_groupoid(const BodyGrid& body, bool numeric_origin = false) {
  if (!body.all_symbolic())
    throw Error(ErrorCode::MixedModes, "body has numeric points; recover transplants with the isomorphism solver first");
  const std::size_t n = body.size();
  std::vector<SymbolicData> data;
  data.reserve(n);
  for (const auto& p : body.points()) data.push_back(normalized(p.symbolic()));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < x; ++y)
      if (data[x].material == data[y].material && !same_group(data[x].group, data[y].group))
        throw Error(ErrorCode::InvalidBody, "material '" + data[x].material + "' uses two different archetype groups");
  std::vector<MatrixGroup> vertex;
  std::vector<Matrix> p_inv;
  for (const auto& d : data) {
    vertex.push_back(conjugate(d.group, d.transplant));
    p_inv.push_back(inverse(d.transplant));
  }
  std::vector<std::optional<CosetArrowSet>> arrows(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (data[x].material == data[y].material)
        arrows[x * n + y] = CosetArrowSet{ObjectId{x}, ObjectId{y}, data[y].transplant * p_inv[x], vertex[x]};
  return MaterialGroupoid(body, std::move(arrows), numeric_origin);
}

struct UniformityVerdict {
  bool uniform = false;
  std::vector<std::vector<ObjectId>> components;
};

inline std::vector<std::vector<ObjectId>> transitivity_components(const MaterialGroupoid& mg) {
  const std::size_t n = mg.size();
  UnionFind uf(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (mg.arrows(ObjectId{x}, ObjectId{y})) uf.unite(x, y);
  std::vector<std::vector<ObjectId>> out;
  for (const auto& b : uf.blocks()) {
    std::vector<ObjectId> block;
    for (std::size_t i : b) block.push_back(ObjectId{i});
    out.push_back(std::move(block));
  }
  return out;
}

inline UniformityVerdict is_uniform(const MaterialGroupoid& mg) {
  UniformityVerdict v;
  v.components = transitivity_components(mg);
  v.uniform = v.components.size() == 1;
  return v;
}

// ---------------------------------------------------------------------------
// Discrete homogeneity

enum class Homogeneity { Homogeneous, Inhomogeneous, Inconclusive };

inline std::string to_string(Homogeneity h) {
  switch (h) {
    case Homogeneity::Homogeneous: return "homogeneous";
    case Homogeneity::Inhomogeneous: return "inhomogeneous";
    case Homogeneity::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct HomogeneityOptions {
  double tol = 1e-9;              // relative closure defect
  std::size_t node_budget = 2000000;
};

struct HomogeneityVerdict {
  Homogeneity verdict = Homogeneity::Inconclusive;
  std::string method;
  std::vector<Matrix> selection;  // g(X) in vertex(X0), when homogeneous
  std::vector<Matrix> field;      // Q(X) = T(X) g(X), when homogeneous
  double max_defect = 0;          // of the reported (or ungauged) field
  std::size_t nodes = 0;
};

/// Relative closure failure of the coframe W = Q^-1 around one plaquette,
/// integrated with the trapezoid rule along the four edges.
inline double plaquette_defect(const BodyGrid& body, const Plaquette& q, const std::vector<Matrix>& coframe) {
  Vec circ = Vec::zero(body.dim());
  double scale = 1.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t a = q[k], b = q[(k + 1) % 4];
    const Vec step = body.position(b) - body.position(a);
    circ = circ + 0.5 * ((coframe[a] * step) + (coframe[b] * step));
    scale = std::max(scale, frobenius(coframe[a]));
  }
  return norm(circ) / scale;
}

inline double max_plaquette_defect(const BodyGrid& body, const std::vector<Matrix>& field) {
  std::vector<Matrix> w;
  w.reserve(field.size());
  for (const Matrix& q : field) w.push_back(inverse(q));
  double worst = 0;
  for (const Plaquette& q : body.plaquettes()) worst = std::max(worst, plaquette_defect(body, q, w));
  return worst;
}

/// Searches for a gauge g(X) in vertex(X0) making the field of isomorphisms
/// Q(X) = T(X) g(X) from X0 integrable (every plaquette closes).
inline HomogeneityVerdict is_discretely_homogeneous(const MaterialGroupoid& mg, const HomogeneityOptions& opt = {}) {
  HomogeneityVerdict v;
  if (!is_uniform(mg).uniform) {
    v.verdict = Homogeneity::Inhomogeneous;
    v.method = "not uniform";
    return v;
  }
  const BodyGrid& body = mg.body();
  const std::size_t n = mg.size();
  const int d = mg.dim();
  std::vector<Matrix> t;
  for (std::size_t x = 0; x < n; ++x) t.push_back(mg.arrows(ObjectId{0}, ObjectId{x})->representative);
  // the base point's own representative may be any loop; rebase it to I
  const Matrix t0_inv = inverse(t[0]);
  for (Matrix& m : t) m = m * t0_inv;
  const MatrixGroup& g0 = mg.vertex(ObjectId{0});
  const auto plaquettes = body.plaquettes();

  auto accept = [&](std::vector<Matrix> sel, std::string method) {
    v.field.clear();
    for (std::size_t x = 0; x < n; ++x) v.field.push_back(t[x] * sel[x]);
    v.max_defect = max_plaquette_defect(body, v.field);
    if (v.max_defect >= opt.tol) return false;
    v.verdict = Homogeneity::Homogeneous;
    v.selection = std::move(sel);
    v.method = std::move(method);
    return true;
  };

  if (accept(std::vector<Matrix>(n, Matrix::identity(d)), "ungauged")) return v;
  const double ungauged_defect = v.max_defect;

  if (g0.is_discrete()) {
    const std::vector<Matrix> elems = g0.element_list();
    std::vector<std::vector<std::size_t>> closing(n);  // plaquettes completed at index x
    for (std::size_t k = 0; k < plaquettes.size(); ++k) {
      const auto& q = plaquettes[k];
      closing[*std::max_element(q.begin(), q.end())].push_back(k);
    }
    std::vector<Matrix> w(n, Matrix::identity(d));
    std::vector<std::size_t> choice(n, 0);
    w[0] = inverse(t[0]);
    std::size_t nodes = 0;
    bool budget_hit = false;
    // iterative depth-first search over positions 1..n-1
    std::size_t x = 1;
    choice.assign(n, 0);
    bool found = n == 1;
    while (!found && x >= 1 && !budget_hit) {
      if (choice[x] == elems.size()) {
        choice[x] = 0;
        --x;
        if (x == 0) break;
        ++choice[x];
        continue;
      }
      if (++nodes > opt.node_budget) {
        budget_hit = true;
        break;
      }
      w[x] = inverse(t[x] * elems[choice[x]]);
      bool ok = true;
      for (std::size_t k : closing[x])
        if (plaquette_defect(body, plaquettes[k], w) >= opt.tol) {
          ok = false;
          break;
        }
      if (!ok) {
        ++choice[x];
        continue;
      }
      if (x + 1 == n) {
        found = true;
        break;
      }
      ++x;
    }
    v.nodes = nodes;
    if (found) {
      std::vector<Matrix> sel(n, Matrix::identity(d));
      for (std::size_t i = 1; i < n; ++i) sel[i] = elems[choice[i]];
      if (accept(std::move(sel), "finite gauge search")) {
        v.nodes = nodes;
        return v;
      }
    }
    v.max_defect = ungauged_defect;
    v.verdict = budget_hit ? Homogeneity::Inconclusive : Homogeneity::Inhomogeneous;
    v.method = budget_hit ? "finite gauge search: node budget exhausted" : "finite gauge search exhausted";
    return v;
  }

  // Continuous orthogonal-type vertex group A B A^-1: gauge each point so that
  // T(X) A b(X) is a pure stretch, b(X) = R(X)^T from T A = V R.
  const MatrixGroup base = g0.kind() == GroupKind::Conjugated ? g0.base() : g0;
  const Matrix a = g0.kind() == GroupKind::Conjugated ? g0.conjugator() : Matrix::identity(d);
  const Matrix a_inv = inverse(a);
  std::vector<Matrix> sel;
  bool gauge_ok = true;
  for (std::size_t x = 0; x < n && gauge_ok; ++x) {
    const Matrix b = transpose(polar_left(t[x] * a).rotation);
    gauge_ok = contains(base, b, kMemberTol);
    sel.push_back(a * b * a_inv);
  }
  if (gauge_ok && accept(sel, "polar stretch gauge")) return v;
  v.max_defect = ungauged_defect;
  v.verdict = Homogeneity::Inconclusive;
  v.method = "continuous vertex group: no integrable gauge found";
  return v;
}

/// Every arrow of a groupoid whose vertex groups are discrete, as a finite
/// matrix groupoid (NotClosed beyond `max_arrows`).
inline FiniteGroupoid materialize(const MaterialGroupoid& mg, std::size_t max_arrows = 4096) {
  const std::size_t n = mg.size();
  std::vector<Arrow> arrows;
  for (std::size_t x = 0; x < n; ++x) {
    if (!mg.vertex(ObjectId{x}).is_discrete())
      throw Error(ErrorCode::UnsupportedDescriptor, "cannot enumerate arrows of a continuous vertex group");
    for (std::size_t y = 0; y < n; ++y) {
      const auto& s = mg.arrows(ObjectId{x}, ObjectId{y});
      if (!s) continue;
      for (const Matrix& g : s->source_group.element_list())
        arrows.push_back(Arrow{arrows.size(), ObjectId{x}, ObjectId{y}, s->representative * g, {}});
      if (arrows.size() > max_arrows) throw Error(ErrorCode::NotClosed, "material groupoid has too many arrows to enumerate");
    }
  }
  // identities first per object is not required; locate products by lookup
  const auto& ar = arrows;
  return FiniteGroupoid::from_rule(n, arrows, [&ar](std::size_t u, std::size_t v) {
    const Matrix p = *ar[u].payload * *ar[v].payload;
    for (std::size_t i = 0; i < ar.size(); ++i)
      if (ar[i].source == ar[v].source && ar[i].target == ar[u].target && approx_equal(*ar[i].payload, p, kMemberTol)) return i;
    return FiniteGroupoid::npos;
  });
}

}  // namespace matg
