#pragma once

// Finite groupoids with an explicit, dense composition table.
// Convention: compose(u, v) = uv means "first v, then u"; it is defined iff
// target(v) == source(u).

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "matg/linalg.hpp"

namespace matg {

struct ObjectId {
  std::size_t index = 0;
  auto operator<=>(const ObjectId&) const = default;
};

struct Arrow {
  std::size_t id = 0;
  ObjectId source;
  ObjectId target;
  std::optional<Matrix> payload;
  std::string label;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

  /// Blocks sorted by their smallest member, members ascending.
  std::vector<std::vector<std::size_t>> blocks() {
    std::map<std::size_t, std::vector<std::size_t>> by_root;
    for (std::size_t i = 0; i < parent_.size(); ++i) by_root[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : by_root) out.push_back(std::move(members));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
};

class FiniteGroupoid {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  using Rule = std::function<std::size_t(std::size_t u, std::size_t v)>;

  /// Builds the table from a composition rule evaluated on every composable
  /// pair (u after v). Arrow ids are reassigned to positions. Identities and
  /// inverses are located in the table; NotClosed when one is missing.
  static FiniteGroupoid from_rule(std::size_t object_count, std::vector<Arrow> arrows, const Rule& rule) {
    FiniteGroupoid g;
    g.object_count_ = object_count;
    g.arrows_ = std::move(arrows);
    const std::size_t m = g.arrows_.size();
    for (std::size_t i = 0; i < m; ++i) {
      g.arrows_[i].id = i;
      if (g.arrows_[i].source.index >= object_count || g.arrows_[i].target.index >= object_count)
        throw Error(ErrorCode::UnknownObject, "arrow endpoint outside the object set");
    }
    g.table_.assign(m * m, npos);
    for (std::size_t u = 0; u < m; ++u)
      for (std::size_t v = 0; v < m; ++v)
        if (g.arrows_[v].target == g.arrows_[u].source) {
          const std::size_t w = rule(u, v);
          if (w >= m) throw Error(ErrorCode::NotClosed, "composition leaves the arrow set");
          g.table_[u * m + v] = w;
        }
    g.identity_.assign(object_count, npos);
    for (std::size_t i = 0; i < m; ++i) {
      const Arrow& a = g.arrows_[i];
      if (a.source == a.target && g.table_[i * m + i] == i && g.identity_[a.source.index] == npos)
        g.identity_[a.source.index] = i;
    }
    for (std::size_t x = 0; x < object_count; ++x)
      if (g.identity_[x] == npos) throw Error(ErrorCode::NotClosed, "object without identity arrow");
    g.inverse_.assign(m, npos);
    for (std::size_t u = 0; u < m; ++u) {
      const std::size_t want_t = g.identity_[g.arrows_[u].target.index];
      const std::size_t want_s = g.identity_[g.arrows_[u].source.index];
      for (std::size_t v = 0; v < m; ++v)
        if (g.table_[u * m + v] == want_t && g.table_[v * m + u] == want_s) {
          g.inverse_[u] = v;
          break;
        }
      if (g.inverse_[u] == npos) throw Error(ErrorCode::NotClosed, "arrow without inverse");
    }
    return g;
  }

  /// Matrix groupoid generated by the given arrows (source, target, payload):
  /// identities, inverses and all products are added, arrows with equal
  /// endpoints and payloads are identified.
  static FiniteGroupoid from_matrices(std::size_t object_count,
                                      const std::vector<std::tuple<std::size_t, std::size_t, Matrix>>& generators,
                                      std::size_t max_arrows = 4096) {
    if (generators.empty() && object_count == 0) return from_rule(0, {}, [](std::size_t, std::size_t) { return npos; });
    int n = generators.empty() ? 3 : std::get<2>(generators.front()).n;
    std::vector<Arrow> arrows;
    auto find = [&](std::size_t s, std::size_t t, const Matrix& p) -> std::size_t {
      for (std::size_t i = 0; i < arrows.size(); ++i)
        if (arrows[i].source.index == s && arrows[i].target.index == t && approx_equal(*arrows[i].payload, p)) return i;
      return npos;
    };
    auto add = [&](std::size_t s, std::size_t t, const Matrix& p) {
      if (find(s, t, p) == npos) {
        arrows.push_back(Arrow{arrows.size(), {s}, {t}, p, {}});
        if (arrows.size() > max_arrows) throw Error(ErrorCode::NotClosed, "generated groupoid exceeds the arrow limit");
      }
    };
    for (std::size_t x = 0; x < object_count; ++x) add(x, x, Matrix::identity(n));
    for (const auto& [s, t, p] : generators) {
      if (s >= object_count || t >= object_count) throw Error(ErrorCode::UnknownObject, "generator endpoint outside the object set");
      if (p.n != n) throw Error(ErrorCode::DimensionMismatch, "generator payloads of mixed dimension");
      add(s, t, p);
      add(t, s, matg::inverse(p));
    }
    for (std::size_t i = 0; i < arrows.size(); ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const Arrow a = arrows[i], b = arrows[j];
        if (b.target == a.source) add(b.source.index, a.target.index, *a.payload * *b.payload);
        if (a.target == b.source) add(a.source.index, b.target.index, *b.payload * *a.payload);
      }
    }
    return from_rule(object_count, arrows, [&](std::size_t u, std::size_t v) {
      return find(arrows[v].source.index, arrows[u].target.index, *arrows[u].payload * *arrows[v].payload);
    });
  }

  std::size_t object_count() const { return object_count_; }
  std::size_t arrow_count() const { return arrows_.size(); }
  const std::vector<Arrow>& arrows() const { return arrows_; }

  const Arrow& arrow(std::size_t id) const {
    if (id >= arrows_.size()) throw Error(ErrorCode::UnknownArrow, "arrow id " + std::to_string(id) + " not in groupoid");
    return arrows_[id];
  }

  bool is_composable(const Arrow& u, const Arrow& v) const { return v.target == u.source; }

  Arrow compose(const Arrow& u, const Arrow& v) const {
    check_member(u);
    check_member(v);
    if (!is_composable(u, v))
      throw Error(ErrorCode::NotComposable, "target of the first arrow applied differs from source of the second");
    return arrows_[table_[u.id * arrows_.size() + v.id]];
  }

  Arrow inverse(const Arrow& u) const {
    check_member(u);
    return arrows_[inverse_[u.id]];
  }

  Arrow identity(ObjectId x) const {
    if (x.index >= object_count_) throw Error(ErrorCode::UnknownObject, "object " + std::to_string(x.index) + " not in groupoid");
    return arrows_[identity_[x.index]];
  }

  /// Raw table lookup: id of uv, or npos when not composable.
  std::size_t compose_id(std::size_t u, std::size_t v) const { return table_[u * arrows_.size() + v]; }

  /// Arrows from source to target in id order.
  std::vector<Arrow> hom(ObjectId source, ObjectId target) const {
    std::vector<Arrow> out;
    for (const Arrow& a : arrows_)
      if (a.source == source && a.target == target) out.push_back(a);
    return out;
  }

  bool has_payloads() const {
    return std::all_of(arrows_.begin(), arrows_.end(), [](const Arrow& a) { return a.payload.has_value(); });
  }

 private:
  void check_member(const Arrow& a) const {
    if (a.id >= arrows_.size() || arrows_[a.id].source != a.source || arrows_[a.id].target != a.target)
      throw Error(ErrorCode::UnknownArrow, "arrow is foreign to this groupoid");
  }

  std::size_t object_count_ = 0;
  std::vector<Arrow> arrows_;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> identity_;
};

inline std::vector<Arrow> vertex_group(const FiniteGroupoid& g, ObjectId x) {
  g.identity(x);  // validates x
  return g.hom(x, x);
}

/// The isomorphism h -> z h z^-1 from G_source(z) onto G_target(z), keyed by
/// arrow id.
inline std::map<std::size_t, std::size_t> conjugate_vertex_groups(const FiniteGroupoid& g, const Arrow& z) {
  const Arrow z_inv = g.inverse(z);
  std::map<std::size_t, std::size_t> out;
  for (const Arrow& h : vertex_group(g, z.source)) out[h.id] = g.compose(g.compose(z, h), z_inv).id;
  return out;
}

inline std::vector<std::vector<ObjectId>> transitivity_components(const FiniteGroupoid& g) {
  UnionFind uf(g.object_count());
  for (const Arrow& a : g.arrows()) uf.unite(a.source.index, a.target.index);
  std::vector<std::vector<ObjectId>> out;
  for (const auto& block : uf.blocks()) {
    std::vector<ObjectId> b;
    for (std::size_t i : block) b.push_back(ObjectId{i});
    out.push_back(std::move(b));
  }
  return out;
}

inline bool is_transitive(const FiniteGroupoid& g) { return transitivity_components(g).size() <= 1; }

inline FiniteGroupoid make_pair_groupoid(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::UnknownObject, "pair groupoid needs at least one object");
  std::vector<Arrow> arrows;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      arrows.push_back(Arrow{s * n + t, {s}, {t}, std::nullopt, "(" + std::to_string(s) + "," + std::to_string(t) + ")"});
  // (j -> k) after (i -> j) is (i -> k)
  return FiniteGroupoid::from_rule(n, std::move(arrows), [n](std::size_t u, std::size_t v) {
    const std::size_t i = v / n, k = u % n;
    return i * n + k;
  });
}

/// Action groupoid of a finite group acting on points 0..n_points-1.
/// product[g][h] is the index of gh, action[g][x] the index of g.x.
/// Arrows (x, g) : x -> g.x with (h, g.x)(g, x) = (hg, x).
inline FiniteGroupoid make_action_groupoid(const std::vector<std::string>& group_elements,
                                           const std::vector<std::vector<std::size_t>>& product,
                                           const std::vector<std::vector<std::size_t>>& action, std::size_t n_points) {
  const std::size_t k = group_elements.size();
  if (k == 0 || product.size() != k || action.size() != k)
    throw Error(ErrorCode::InvalidAction, "group tables do not match the element list");
  for (std::size_t g = 0; g < k; ++g) {
    if (product[g].size() != k || action[g].size() != n_points)
      throw Error(ErrorCode::InvalidAction, "ragged group or action table");
    for (std::size_t h : product[g])
      if (h >= k) throw Error(ErrorCode::InvalidAction, "product table entry out of range");
    for (std::size_t y : action[g])
      if (y >= n_points) throw Error(ErrorCode::InvalidAction, "action moves a point outside the set");
  }
  std::size_t e = k;
  for (std::size_t g = 0; g < k && e == k; ++g) {
    bool unit = true;
    for (std::size_t h = 0; h < k; ++h) unit = unit && product[g][h] == h && product[h][g] == h;
    if (unit) e = g;
  }
  if (e == k) throw Error(ErrorCode::InvalidAction, "product table has no identity element");
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c)
        if (product[product[a][b]][c] != product[a][product[b][c]])
          throw Error(ErrorCode::InvalidAction, "product table is not associative");
  for (std::size_t a = 0; a < k; ++a) {
    bool has_inv = false;
    for (std::size_t b = 0; b < k; ++b) has_inv = has_inv || (product[a][b] == e && product[b][a] == e);
    if (!has_inv) throw Error(ErrorCode::InvalidAction, "element " + group_elements[a] + " has no inverse");
  }
  for (std::size_t x = 0; x < n_points; ++x) {
    if (action[e][x] != x) throw Error(ErrorCode::InvalidAction, "identity element moves a point");
    for (std::size_t g = 0; g < k; ++g)
      for (std::size_t h = 0; h < k; ++h)
        if (action[g][action[h][x]] != action[product[g][h]][x])
          throw Error(ErrorCode::InvalidAction, "action is not compatible with the group product");
  }
  std::vector<Arrow> arrows;
  for (std::size_t x = 0; x < n_points; ++x)
    for (std::size_t g = 0; g < k; ++g)
      arrows.push_back(Arrow{x * k + g, {x}, {action[g][x]}, std::nullopt,
                             "(" + std::to_string(x) + "," + group_elements[g] + ")"});
  return FiniteGroupoid::from_rule(n_points, std::move(arrows), [k, &product](std::size_t u, std::size_t v) {
    const std::size_t x = v / k, g = v % k, h = u % k;
    return x * k + product[h][g];
  });
}

/// A matrix group viewed as a groupoid over a single object.
inline FiniteGroupoid make_group_groupoid(const std::vector<Matrix>& elements) {
  std::vector<std::tuple<std::size_t, std::size_t, Matrix>> gens;
  for (const Matrix& m : elements) gens.emplace_back(0, 0, m);
  return FiniteGroupoid::from_matrices(1, gens);
}

struct AxiomReport {
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::vector<std::string> messages;  // first few violations

  void record(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++violations;
      if (messages.size() < 16) messages.push_back(what);
    }
  }
};

/// Exhaustive check of the groupoid laws on the table: endpoint consistency,
/// associativity over all composable triples, unit and inverse laws, and
/// payload multiplicativity when payloads are present.
inline AxiomReport check_axioms(const FiniteGroupoid& g) {
  AxiomReport r;
  const std::size_t m = g.arrow_count();
  const auto& as = g.arrows();
  const bool payloads = g.has_payloads();
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t v = 0; v < m; ++v) {
      const std::size_t uv = g.compose_id(u, v);
      if (as[v].target != as[u].source) {
        r.record(uv == FiniteGroupoid::npos, "defined product on a non-composable pair");
        continue;
      }
      r.record(uv != FiniteGroupoid::npos && as[uv].source == as[v].source && as[uv].target == as[u].target,
               "endpoint consistency fails for " + std::to_string(u) + "," + std::to_string(v));
      if (payloads) r.record(approx_equal(*as[uv].payload, *as[u].payload * *as[v].payload), "payload of a product is not the matrix product");
      for (std::size_t w = 0; w < m; ++w) {
        if (as[w].target != as[v].source) continue;
        const std::size_t left = g.compose_id(uv, w);
        const std::size_t right = g.compose_id(u, g.compose_id(v, w));
        r.record(left == right, "associativity fails for " + std::to_string(u) + "," + std::to_string(v) + "," + std::to_string(w));
      }
    }
  for (const Arrow& z : as) {
    const Arrow es = g.identity(z.source), et = g.identity(z.target);
    const Arrow zi = g.inverse(z);
    r.record(g.compose(z, es).id == z.id, "right unit law fails");
    r.record(g.compose(et, z).id == z.id, "left unit law fails");
    r.record(g.compose(z, zi).id == et.id, "z z^-1 is not the target identity");
    r.record(g.compose(zi, z).id == es.id, "z^-1 z is not the source identity");
    if (payloads && z.source == z.target && z.id == es.id)
      r.record(approx_equal(*z.payload, Matrix::identity(z.payload->n)), "identity payload is not I");
  }
  return r;
}

}  // namespace matg
