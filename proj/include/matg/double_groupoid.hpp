#pragma once

// Double groupoids of squares over a horizontal side groupoid H and a
// vertical side groupoid V sharing one object set.
//
//          t
//   TL <-------- TR
//    ^            ^
//  t̂ |            | ŝ
//    |            |
//   BL <-------- BR
//          s
//
// s, t are H-arrows, t̂, ŝ are V-arrows; BR is the common source of s and ŝ.
// A commuting square satisfies t·ŝ = t̂·s on payloads.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matg/groupoid.hpp"
#include "matg/material_body.hpp"

namespace matg {

enum class SquarePredicate { Coarse, Commuting };

template <class A>
struct Square {
  A t;      // top, TR -> TL
  A s;      // bottom, BR -> BL
  A t_hat;  // left, BL -> TL
  A s_hat;  // right, BR -> TR
};

// --- side adapters ---------------------------------------------------------

/// Side backed by an explicit finite groupoid; arrows compare by id.
struct FiniteSide {
  using arrow_type = Arrow;
  const FiniteGroupoid* g;

  Arrow compose(const Arrow& u, const Arrow& v) const { return g->compose(u, v); }
  Arrow identity(ObjectId x) const { return g->identity(x); }
  Arrow inverse(const Arrow& u) const { return g->inverse(u); }
  static ObjectId source(const Arrow& a) { return a.source; }
  static ObjectId target(const Arrow& a) { return a.target; }
  static bool same(const Arrow& a, const Arrow& b) { return a.id == b.id && a.source == b.source && a.target == b.target; }
  static const Matrix& payload(const Arrow& a) {
    if (!a.payload) throw Error(ErrorCode::NotCommuting, "commuting squares need matrix payloads");
    return *a.payload;
  }
};

/// One arrow of a material groupoid: a concrete matrix between two points.
struct MaterialArrow {
  ObjectId source;
  ObjectId target;
  Matrix m;
};

/// Side backed by the coset arrow sets of a material groupoid.
struct MaterialSide {
  using arrow_type = MaterialArrow;
  const MaterialGroupoid* g;

  MaterialArrow compose(const MaterialArrow& u, const MaterialArrow& v) const {
    if (v.target != u.source) throw Error(ErrorCode::NotComposable, "material arrows do not share the middle point");
    return {v.source, u.target, u.m * v.m};
  }
  MaterialArrow identity(ObjectId x) const { return {x, x, Matrix::identity(g->dim())}; }
  MaterialArrow inverse(const MaterialArrow& u) const { return {u.target, u.source, matg::inverse(u.m)}; }
  static ObjectId source(const MaterialArrow& a) { return a.source; }
  static ObjectId target(const MaterialArrow& a) { return a.target; }
  static bool same(const MaterialArrow& a, const MaterialArrow& b) {
    return a.source == b.source && a.target == b.target && approx_equal(a.m, b.m);
  }
  static const Matrix& payload(const MaterialArrow& a) { return a.m; }

  bool belongs(const MaterialArrow& a) const {
    const auto& set = g->arrows(a.source, a.target);
    return set && set->contains(a.m);
  }
};

template <class Side>
class DoubleGroupoid {
 public:
  using A = typename Side::arrow_type;
  using Sq = Square<A>;

  DoubleGroupoid(Side horizontal, Side vertical, SquarePredicate predicate)
      : h_(horizontal), v_(vertical), predicate_(predicate) {}

  const Side& horizontal() const { return h_; }
  const Side& vertical() const { return v_; }
  SquarePredicate predicate() const { return predicate_; }

  /// Validates corners and, for commuting squares, t·ŝ = t̂·s.
  Sq make_square(const A& t, const A& s, const A& t_hat, const A& s_hat) const {
    if (Side::source(s) != Side::source(s_hat) || Side::target(s) != Side::source(t_hat) ||
        Side::target(s_hat) != Side::source(t) || Side::target(t) != Side::target(t_hat))
      throw Error(ErrorCode::CornerMismatch, "square sides do not meet at four corners");
    if (predicate_ == SquarePredicate::Commuting) {
      const Matrix lhs = Side::payload(t) * Side::payload(s_hat);
      const Matrix rhs = Side::payload(t_hat) * Side::payload(s);
      if (!approx_equal(lhs, rhs)) throw Error(ErrorCode::NotCommuting, "square does not commute: t s_hat != t_hat s");
    }
    return Sq{t, s, t_hat, s_hat};
  }

  bool is_square(const A& t, const A& s, const A& t_hat, const A& s_hat) const {
    try {
      make_square(t, s, t_hat, s_hat);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  /// a to the left of b, glued along a.ŝ = b.t̂.
  Sq compose_h(const Sq& a, const Sq& b) const {
    if (!Side::same(a.s_hat, b.t_hat)) throw Error(ErrorCode::NotComposable, "horizontal product needs a shared vertical edge");
    return Sq{h_.compose(a.t, b.t), h_.compose(a.s, b.s), a.t_hat, b.s_hat};
  }

  /// a on top of b, glued along a.s = b.t.
  Sq compose_v(const Sq& a, const Sq& b) const {
    if (!Side::same(a.s, b.t)) throw Error(ErrorCode::NotComposable, "vertical product needs a shared horizontal edge");
    return Sq{a.t, b.s, v_.compose(a.t_hat, b.t_hat), v_.compose(a.s_hat, b.s_hat)};
  }

  /// Unit for compose_h along the vertical arrow e.
  Sq horizontal_identity(const A& e) const {
    return Sq{h_.identity(Side::target(e)), h_.identity(Side::source(e)), e, e};
  }

  /// Unit for compose_v along the horizontal arrow e.
  Sq vertical_identity(const A& e) const {
    return Sq{e, e, v_.identity(Side::target(e)), v_.identity(Side::source(e))};
  }

  Sq double_identity(ObjectId x) const { return Sq{h_.identity(x), h_.identity(x), v_.identity(x), v_.identity(x)}; }

  static bool same_square(const Sq& a, const Sq& b) {
    return Side::same(a.t, b.t) && Side::same(a.s, b.s) && Side::same(a.t_hat, b.t_hat) && Side::same(a.s_hat, b.s_hat);
  }

  /// 2x2 block  [a b]
  ///            [c d]   : (a ∘h b) ∘v (c ∘h d) == (a ∘v c) ∘h (b ∘v d).
  bool check_interchange(const Sq& a, const Sq& b, const Sq& c, const Sq& d) const {
    const Sq rows = compose_v(compose_h(a, b), compose_h(c, d));
    const Sq cols = compose_h(compose_v(a, c), compose_v(b, d));
    return same_square(rows, cols);
  }

 private:
  Side h_;
  Side v_;
  SquarePredicate predicate_;
};

struct LocalTriviality {
  bool horizontal = false;  // every ⊔ closes on top: V ⊆ H
  bool vertical = false;    // every ⊐ closes on the left: H ⊆ V
  std::string relation;     // implied vertex-subgroup relation
};

inline std::string vertex_relation(const LocalTriviality& lt) {
  if (lt.horizontal && lt.vertical) return "vertex groups of both sides coincide";
  if (lt.horizontal) return "vertical vertex groups are subgroups of the horizontal ones";
  if (lt.vertical) return "horizontal vertex groups are subgroups of the vertical ones";
  return "no inclusion between side vertex groups";
}

// --- finite sides ----------------------------------------------------------

using FiniteDoubleGroupoid = DoubleGroupoid<FiniteSide>;

/// Every square of a double groupoid over finite sides.
inline std::vector<Square<Arrow>> enumerate_squares(const FiniteDoubleGroupoid& dg) {
  std::vector<Square<Arrow>> out;
  const FiniteGroupoid& h = *dg.horizontal().g;
  const FiniteGroupoid& v = *dg.vertical().g;
  for (const Arrow& s : h.arrows())
    for (const Arrow& s_hat : v.arrows()) {
      if (s.source != s_hat.source) continue;
      for (const Arrow& t_hat : v.arrows()) {
        if (t_hat.source != s.target) continue;
        for (const Arrow& t : h.arrows())
          if (t.source == s_hat.target && t.target == t_hat.target && dg.is_square(t, s, t_hat, s_hat))
            out.push_back(Square<Arrow>{t, s, t_hat, s_hat});
      }
    }
  return out;
}

struct InterchangeReport {
  std::size_t blocks = 0;
  std::size_t violations = 0;
};

/// Interchange law over every composable 2x2 block of squares.
inline InterchangeReport check_interchange_exhaustive(const FiniteDoubleGroupoid& dg) {
  const auto squares = enumerate_squares(dg);
  // index squares by left edge, by top edge and by the (left, top) pair
  const std::size_t nv = dg.vertical().g->arrow_count();
  const std::size_t nh = dg.horizontal().g->arrow_count();
  std::vector<std::vector<std::size_t>> by_left(nv), by_top(nh);
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> by_corner;
  for (std::size_t i = 0; i < squares.size(); ++i) {
    by_left[squares[i].t_hat.id].push_back(i);
    by_top[squares[i].t.id].push_back(i);
    by_corner[{squares[i].t_hat.id, squares[i].t.id}].push_back(i);
  }
  InterchangeReport r;
  for (const auto& a : squares)
    for (std::size_t bi : by_left[a.s_hat.id])
      for (std::size_t ci : by_top[a.s.id]) {
        const auto& b = squares[bi];
        const auto& c = squares[ci];
        const auto it = by_corner.find({c.s_hat.id, b.s.id});
        if (it == by_corner.end()) continue;
        for (std::size_t di : it->second) {
          ++r.blocks;
          if (!dg.check_interchange(a, b, c, squares[di])) ++r.violations;
        }
      }
  return r;
}

/// Square with horizontal source s and vertical source ŝ (common corner BR),
/// preferring the top-left corner at BL.
inline std::optional<Square<Arrow>> fill_corner(const FiniteDoubleGroupoid& dg, const Arrow& s, const Arrow& s_hat) {
  if (s.source != s_hat.source) throw Error(ErrorCode::CornerMismatch, "corner arrows must share their source");
  const FiniteGroupoid& h = *dg.horizontal().g;
  const FiniteGroupoid& v = *dg.vertical().g;
  std::vector<ObjectId> corners{s.target};
  for (std::size_t x = 0; x < v.object_count(); ++x)
    if (ObjectId{x} != s.target) corners.push_back(ObjectId{x});
  for (ObjectId tl : corners)
    for (const Arrow& t_hat : v.hom(s.target, tl))
      for (const Arrow& t : h.hom(s_hat.target, tl))
        if (dg.is_square(t, s, t_hat, s_hat)) return Square<Arrow>{t, s, t_hat, s_hat};
  return std::nullopt;
}

/// Exhaustive ⊔ / ⊐ completion check.
inline LocalTriviality is_locally_trivial(const FiniteDoubleGroupoid& dg) {
  const FiniteGroupoid& h = *dg.horizontal().g;
  const FiniteGroupoid& v = *dg.vertical().g;
  LocalTriviality lt{true, true, {}};
  for (const Arrow& s : h.arrows())
    for (const Arrow& s_hat : v.arrows()) {
      if (s.source != s_hat.source) continue;
      // ⊔: left t̂, bottom s, right ŝ given
      for (const Arrow& t_hat : v.arrows()) {
        if (!lt.horizontal) break;
        if (t_hat.source != s.target) continue;
        bool closes = false;
        for (const Arrow& t : h.hom(s_hat.target, t_hat.target))
          if (dg.is_square(t, s, t_hat, s_hat)) {
            closes = true;
            break;
          }
        lt.horizontal = closes;
      }
      // ⊐: top t, right ŝ, bottom s given
      for (const Arrow& t : h.arrows()) {
        if (!lt.vertical) break;
        if (t.source != s_hat.target) continue;
        bool closes = false;
        for (const Arrow& t_hat : v.hom(s.target, t.target))
          if (dg.is_square(t, s, t_hat, s_hat)) {
            closes = true;
            break;
          }
        lt.vertical = closes;
      }
    }
  lt.relation = vertex_relation(lt);
  return lt;
}

/// Core of a finite double groupoid: co-terminal pairs (t, t̂) that bound a
/// square with unit sources, composed component-wise.
struct FiniteCore {
  FiniteGroupoid groupoid;
  std::vector<Arrow> boundary_h;  // ∂_H per core arrow id
  std::vector<Arrow> boundary_v;  // ∂_V per core arrow id
};

inline FiniteCore core_groupoid(const FiniteDoubleGroupoid& dg) {
  const FiniteGroupoid& h = *dg.horizontal().g;
  const FiniteGroupoid& v = *dg.vertical().g;
  if (h.object_count() != v.object_count()) throw Error(ErrorCode::BodyMismatch, "side groupoids have different object sets");
  std::vector<Arrow> arrows, bh, bv;
  for (const Arrow& t : h.arrows())
    for (const Arrow& t_hat : v.hom(t.source, t.target)) {
      const ObjectId x = t.source;
      if (!dg.is_square(t, h.identity(x), t_hat, v.identity(x))) continue;
      std::optional<Matrix> payload;
      if (t.payload) payload = t.payload;
      arrows.push_back(Arrow{arrows.size(), t.source, t.target, payload, t.label + "|" + t_hat.label});
      bh.push_back(t);
      bv.push_back(t_hat);
    }
  auto rule = [&](std::size_t u, std::size_t w) {
    const std::size_t t = h.compose_id(bh[u].id, bh[w].id);
    const std::size_t th = v.compose_id(bv[u].id, bv[w].id);
    for (std::size_t i = 0; i < arrows.size(); ++i)
      if (bh[i].id == t && bv[i].id == th) return i;
    return FiniteGroupoid::npos;
  };
  FiniteGroupoid core = FiniteGroupoid::from_rule(h.object_count(), arrows, rule);
  return FiniteCore{std::move(core), std::move(bh), std::move(bv)};
}

// --- material sides --------------------------------------------------------

using MaterialDoubleGroupoid = DoubleGroupoid<MaterialSide>;

/// Square with horizontal source s and vertical source ŝ: solves
/// t̂ ∈ V(BL -> TL) ∩ H(TR -> TL)·ŝ·s^-1, then t = t̂ s ŝ^-1. Tries TL = BL first.
inline std::optional<Square<MaterialArrow>> fill_corner(const MaterialDoubleGroupoid& dg, const MaterialArrow& s,
                                                        const MaterialArrow& s_hat, double eig_tol = kEigTol) {
  if (s.source != s_hat.source) throw Error(ErrorCode::CornerMismatch, "corner arrows must share their source");
  const MaterialGroupoid& h = *dg.horizontal().g;
  const MaterialGroupoid& v = *dg.vertical().g;
  std::vector<ObjectId> corners{s.target};
  for (std::size_t x = 0; x < v.size(); ++x)
    if (ObjectId{x} != s.target) corners.push_back(ObjectId{x});
  for (ObjectId tl : corners) {
    const auto& vs = v.arrows(s.target, tl);
    const auto& hs = h.arrows(s_hat.target, tl);
    if (!vs || !hs) continue;
    if (dg.predicate() == SquarePredicate::Coarse) {
      return Square<MaterialArrow>{{s_hat.target, tl, hs->representative}, s, {s.target, tl, vs->representative}, s_hat};
    }
    CosetForm shifted = hs->form();
    shifted.right = s_hat.m * inverse(s.m);
    const auto w = coset_witness(vs->form(), shifted, eig_tol);
    if (!w) continue;
    const MaterialArrow t_hat{s.target, tl, *w};
    const MaterialArrow t{s_hat.target, tl, *w * s.m * inverse(s_hat.m)};
    return dg.make_square(t, s, t_hat, s_hat);
  }
  return std::nullopt;
}

/// Exact criterion for commuting material squares: ⊔ always closes iff every
/// V-arrow set lies inside the H-arrow set between the same points, and
/// symmetrically for ⊐.
inline LocalTriviality is_locally_trivial(const MaterialDoubleGroupoid& dg, double eig_tol = kEigTol) {
  const MaterialGroupoid& h = *dg.horizontal().g;
  const MaterialGroupoid& v = *dg.vertical().g;
  const std::size_t n = h.size();
  LocalTriviality lt{true, true, {}};
  if (dg.predicate() == SquarePredicate::Coarse) {
    // closing needs only connectivity of the far corners
    for (std::size_t br = 0; br < n; ++br)
      for (std::size_t bl = 0; bl < n; ++bl)
        for (std::size_t tr = 0; tr < n; ++tr)
          for (std::size_t tl = 0; tl < n; ++tl) {
            const ObjectId BR{br}, BL{bl}, TR{tr}, TL{tl};
            const bool sides_h = h.arrows(BR, BL).has_value();
            const bool right_v = v.arrows(BR, TR).has_value();
            if (!sides_h || !right_v) continue;
            if (v.arrows(BL, TL) && !h.arrows(TR, TL)) lt.horizontal = false;
            if (h.arrows(TR, TL) && !v.arrows(BL, TL)) lt.vertical = false;
          }
    lt.relation = vertex_relation(lt);
    return lt;
  }
  auto inside = [&](const MaterialGroupoid& small, const MaterialGroupoid& big) {
    for (std::size_t x = 0; x < n; ++x) {
      if (!is_subgroup(small.vertex(ObjectId{x}), big.vertex(ObjectId{x}), eig_tol)) return false;
      for (std::size_t y = 0; y < n; ++y) {
        const auto& a = small.arrows(ObjectId{x}, ObjectId{y});
        if (!a) continue;
        const auto& b = big.arrows(ObjectId{x}, ObjectId{y});
        if (!b || !b->contains(a->representative)) return false;
      }
    }
    return true;
  };
  lt.horizontal = inside(v, h);
  lt.vertical = inside(h, v);
  lt.relation = vertex_relation(lt);
  return lt;
}

struct ProbeReport {
  std::size_t cup_probes = 0, cup_failures = 0;      // ⊔
  std::size_t bracket_probes = 0, bracket_failures = 0;  // ⊐
};

/// Random three-sided configurations with sides drawn from the arrow sets;
/// counts those whose forced fourth side leaves its side groupoid.
inline ProbeReport probe_local_triviality(const MaterialDoubleGroupoid& dg, std::size_t count, Rng& rng) {
  const MaterialGroupoid& h = *dg.horizontal().g;
  const MaterialGroupoid& v = *dg.vertical().g;
  const std::size_t n = h.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  auto draw = [&](const MaterialGroupoid& g, ObjectId x, ObjectId y) -> std::optional<MaterialArrow> {
    const auto& set = g.arrows(x, y);
    if (!set) return std::nullopt;
    return MaterialArrow{x, y, random_member(set->form(), rng)};
  };
  ProbeReport r;
  const MaterialSide hs{&h}, vs{&v};
  for (std::size_t k = 0; k < count; ++k) {
    const ObjectId br{pick(rng)}, bl{pick(rng)}, tr{pick(rng)}, tl{pick(rng)};
    const auto s = draw(h, br, bl);
    const auto s_hat = draw(v, br, tr);
    if (!s || !s_hat) continue;
    if (const auto t_hat = draw(v, bl, tl)) {
      ++r.cup_probes;
      const MaterialArrow t{tr, tl, t_hat->m * s->m * inverse(s_hat->m)};
      if (!hs.belongs(t)) ++r.cup_failures;
    }
    if (const auto t = draw(h, tr, tl)) {
      ++r.bracket_probes;
      const MaterialArrow t_hat{bl, tl, t->m * s_hat->m * inverse(s->m)};
      if (!vs.belongs(t_hat)) ++r.bracket_failures;
    }
  }
  return r;
}

/// Commuting square with unit sources at x and top-left corner y, if any.
inline std::optional<Square<MaterialArrow>> fill_core_square(const MaterialDoubleGroupoid& dg, ObjectId x, ObjectId y,
                                                             double eig_tol = kEigTol) {
  const auto& hs = dg.horizontal().g->arrows(x, y);
  const auto& vs = dg.vertical().g->arrows(x, y);
  if (!hs || !vs) return std::nullopt;
  const auto w = coset_witness(vs->form(), hs->form(), eig_tol);
  if (!w) return std::nullopt;
  const MaterialArrow side{x, y, *w};
  return dg.make_square(side, dg.horizontal().identity(x), side, dg.vertical().identity(x));
}

/// Core of a commuting material double groupoid. Unit sources force t = t̂,
/// so the core arrows X -> Y are the common arrows H(X,Y) ∩ V(X,Y).
inline MaterialGroupoid core_groupoid(const MaterialDoubleGroupoid& dg, double eig_tol = kEigTol,
                                      std::vector<std::string>* warnings = nullptr) {
  if (dg.predicate() != SquarePredicate::Commuting)
    throw Error(ErrorCode::UnsupportedDescriptor, "core of a coarse material double groupoid is not representable by coset sets");
  const MaterialGroupoid& h = *dg.horizontal().g;
  const MaterialGroupoid& v = *dg.vertical().g;
  const std::size_t n = h.size();
  std::vector<std::optional<CosetArrowSet>> arrows(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const auto& a = h.arrows(ObjectId{x}, ObjectId{y});
      const auto& b = v.arrows(ObjectId{x}, ObjectId{y});
      if (!a || !b) continue;
      // the square with unit sources: t̂ ∈ V(x,y) ∩ H(x,y)·ε·ε^-1
      const auto sq = fill_core_square(dg, ObjectId{x}, ObjectId{y}, eig_tol);
      if (!sq) continue;
      arrows[x * n + y] = CosetArrowSet{ObjectId{x}, ObjectId{y}, sq->t.m,
                                        intersect(a->source_group, b->source_group, eig_tol, warnings)};
    }
  return MaterialGroupoid(h.body(), std::move(arrows), h.numeric_origin() || v.numeric_origin());
}

}  // namespace matg
