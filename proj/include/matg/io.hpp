#pragma once

// Body description files (JSON), report documents and their text rendering.
//
// Body file:
//   { "format": "matg-body/1", "name": "...", "dimension": 2, "grid": [5, 5],
//     "metadata": {...},
//     "points": [ { "pos": [i, j], "symbolic": { "group": G, "transplant": M, "material": "m" } },
//                 { "pos": [i, j], "numeric": { "family": "neo_hookean",
//                                               "parameters": { "mu": 1, "lambda": 1 },
//                                               "pre": M, "scale": 1 } } ] }
// Matrices are row-major nested arrays. Group descriptors:
//   {"type": "trivial"} | {"type": "SO"} | {"type": "O"}
//   {"type": "finite", "elements": [M...]} or {"type": "finite", "generators": [M...]}
//   {"type": "axis_rot", "axis": [x, y, z], "reversal": false, "improper": false}
//   {"type": "conjugated", "base": G, "conjugator": M}

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <json.hpp>

#include "matg/classifier.hpp"
#include "matg/isomorphism_solver.hpp"

namespace matg {

using nlohmann::json;

inline constexpr const char* kBodyFormat = "matg-body/1";

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// --- matrices and groups ----------------------------------------------------

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.n; ++i) {
    json row = json::array();
    for (int j = 0; j < m.n; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.n; ++i) a.push_back(v[i]);
  return a;
}

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(where, std::string("missing \"") + key + "\"");
  return *it;
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

inline bool boolean(const json& j, const std::string& where) {
  if (!j.is_boolean()) schema_error(where, "expected true or false");
  return j.get<bool>();
}

inline std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a string");
  return j.get<std::string>();
}

}  // namespace detail

inline Matrix matrix_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) detail::schema_error(where, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  Matrix m = Matrix::zero(n);
  for (int i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) detail::schema_error(where, "row " + std::to_string(i) + " has the wrong length");
    for (int k = 0; k < n; ++k) m(i, k) = detail::number(row[static_cast<std::size_t>(k)], where);
  }
  return m;
}

inline Vec vec_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) detail::schema_error(where, "expected a vector of length " + std::to_string(n));
  Vec v = Vec::zero(n);
  for (int i = 0; i < n; ++i) v[i] = detail::number(j[static_cast<std::size_t>(i)], where);
  return v;
}

inline json to_json(const MatrixGroup& g) {
  switch (g.kind()) {
    case GroupKind::Trivial: return {{"type", "trivial"}};
    case GroupKind::SpecialOrthogonal: return {{"type", "SO"}};
    case GroupKind::Orthogonal: return {{"type", "O"}};
    case GroupKind::AxisRotation:
      return {{"type", "axis_rot"}, {"axis", to_json(g.axis())}, {"reversal", g.axis_reversal()}, {"improper", g.improper()}};
    case GroupKind::Finite: {
      json e = json::array();
      for (const Matrix& m : g.elements()) e.push_back(to_json(m));
      return {{"type", "finite"}, {"elements", e}};
    }
    case GroupKind::Conjugated: return {{"type", "conjugated"}, {"base", to_json(g.base())}, {"conjugator", to_json(g.conjugator())}};
  }
  return {};
}

inline MatrixGroup group_from_json(const json& j, int n, const std::string& where) {
  const std::string type = detail::text(detail::field(j, "type", where), where + ".type");
  if (type == "trivial") return MatrixGroup::trivial(n);
  if (type == "SO") return MatrixGroup::special_orthogonal(n);
  if (type == "O") return MatrixGroup::orthogonal(n);
  if (type == "axis_rot") {
    if (n != 3) throw Error(ErrorCode::UnsupportedDescriptor, where + ": axis_rot needs a 3D body");
    const Vec axis = vec_from_json(detail::field(j, "axis", where), 3, where + ".axis");
    const bool rev = j.contains("reversal") && detail::boolean(j["reversal"], where + ".reversal");
    const bool imp = j.contains("improper") && detail::boolean(j["improper"], where + ".improper");
    return MatrixGroup::axis_rotation(axis, rev, imp);
  }
  if (type == "finite") {
    const bool gens = j.contains("generators");
    const json& list = gens ? j["generators"] : detail::field(j, "elements", where);
    if (!list.is_array() || list.empty()) detail::schema_error(where, "finite group needs a non-empty matrix list");
    std::vector<Matrix> ms;
    for (std::size_t i = 0; i < list.size(); ++i)
      ms.push_back(matrix_from_json(list[i], n, where + (gens ? ".generators[" : ".elements[") + std::to_string(i) + "]"));
    return gens ? MatrixGroup::generated(n, ms) : MatrixGroup::finite(std::move(ms));
  }
  if (type == "conjugated") {
    const MatrixGroup base = group_from_json(detail::field(j, "base", where), n, where + ".base");
    const Matrix a = matrix_from_json(detail::field(j, "conjugator", where), n, where + ".conjugator");
    if (!is_invertible(a)) throw Error(ErrorCode::ParseError, where + ".conjugator: singular matrix");
    return conjugate(base, a);
  }
  throw Error(ErrorCode::UnsupportedDescriptor, where + ": unsupported group type \"" + type + "\"");
}

// --- constitutive models ----------------------------------------------------

inline json to_json(const ConstitutiveModel& m) {
  json params;
  if (m.family == EnergyFamily::MooneyRivlin)
    params = {{"c1", m.p1}, {"c2", m.p2}, {"lambda", m.p3}};
  else
    params = {{"mu", m.p1}, {"lambda", m.p2}};
  json out = {{"family", to_string(m.family)}, {"parameters", params}};
  if (!approx_equal(m.pre, Matrix::identity(m.dim), 0.0)) out["pre"] = to_json(m.pre);
  if (m.scale != 1.0) out["scale"] = m.scale;
  return out;
}

inline ConstitutiveModel model_from_json(const json& j, int n, const std::string& where) {
  const std::string family = detail::text(detail::field(j, "family", where), where + ".family");
  const json& p = detail::field(j, "parameters", where);
  const std::string pw = where + ".parameters";
  auto get = [&](const char* k) { return detail::number(detail::field(p, k, pw), pw + "." + k); };
  ConstitutiveModel m;
  try {
    if (family == "neo_hookean")
      m = ConstitutiveModel::neo_hookean(n, get("mu"), get("lambda"));
    else if (family == "st_venant_kirchhoff")
      m = ConstitutiveModel::st_venant_kirchhoff(n, get("mu"), get("lambda"));
    else if (family == "mooney_rivlin")
      m = ConstitutiveModel::mooney_rivlin(n, get("c1"), get("c2"), get("lambda"));
    else
      throw Error(ErrorCode::UnsupportedDescriptor, where + ": unsupported energy family \"" + family + "\"");
    if (j.contains("pre")) m = m.precomposed(matrix_from_json(j["pre"], n, where + ".pre"));
    if (j.contains("scale")) m = m.scaled(detail::number(j["scale"], where + ".scale"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnsupportedDescriptor || e.code() == ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ParseError, where + ": " + e.message());
  }
  return m;
}

// --- bodies -------------------------------------------------------------------

inline json to_json(const BodyGrid& body) {
  json grid = json::array();
  for (int k = 0; k < body.dim(); ++k) grid.push_back(body.shape()[static_cast<std::size_t>(k)]);
  json points = json::array();
  for (const auto& p : body.points()) {
    json pos = json::array();
    for (int k = 0; k < body.dim(); ++k) pos.push_back(p.pos[static_cast<std::size_t>(k)]);
    json entry = {{"pos", pos}};
    if (p.is_symbolic()) {
      const SymbolicData& s = p.symbolic();
      entry["symbolic"] = {{"group", to_json(s.group)}, {"transplant", to_json(s.transplant)}, {"material", s.material}};
    } else {
      entry["numeric"] = to_json(p.numeric().model);
    }
    points.push_back(entry);
  }
  return {{"format", kBodyFormat}, {"name", body.name()}, {"dimension", body.dim()}, {"grid", grid}, {"points", points}};
}

inline std::string emit_body(const BodyGrid& body) { return to_json(body).dump(1) + "\n"; }

inline BodyGrid body_from_json(const json& j) {
  const std::string root = "body";
  if (j.contains("format") && detail::text(j["format"], "body.format") != kBodyFormat)
    throw Error(ErrorCode::UnsupportedDescriptor, "body.format: expected \"" + std::string(kBodyFormat) + "\"");
  const json& dj = detail::field(j, "dimension", root);
  if (!dj.is_number_integer()) detail::schema_error("body.dimension", "expected an integer");
  const int n = dj.get<int>();
  if (n != 2 && n != 3) throw Error(ErrorCode::UnsupportedDescriptor, "body.dimension: only 2 and 3 are supported");
  const json& gj = detail::field(j, "grid", root);
  if (!gj.is_array() || static_cast<int>(gj.size()) != n) detail::schema_error("body.grid", "expected one extent per dimension");
  std::array<int, 3> shape{1, 1, 1};
  for (int k = 0; k < n; ++k) {
    if (!gj[static_cast<std::size_t>(k)].is_number_integer()) detail::schema_error("body.grid", "extents must be integers");
    shape[static_cast<std::size_t>(k)] = gj[static_cast<std::size_t>(k)].get<int>();
  }
  const json& pj = detail::field(j, "points", root);
  if (!pj.is_array()) detail::schema_error("body.points", "expected an array");
  std::vector<MaterialPoint> points;
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string w = "body.points[" + std::to_string(i) + "]";
    const json& e = pj[i];
    MaterialPoint p;
    const json& pos = detail::field(e, "pos", w);
    if (!pos.is_array() || static_cast<int>(pos.size()) != n) detail::schema_error(w + ".pos", "expected one index per dimension");
    for (int k = 0; k < n; ++k) {
      if (!pos[static_cast<std::size_t>(k)].is_number_integer()) detail::schema_error(w + ".pos", "indices must be integers");
      p.pos[static_cast<std::size_t>(k)] = pos[static_cast<std::size_t>(k)].get<int>();
    }
    const bool sym = e.contains("symbolic"), num = e.contains("numeric");
    if (sym == num) detail::schema_error(w, "needs exactly one of \"symbolic\" or \"numeric\"");
    if (sym) {
      const json& s = e["symbolic"];
      SymbolicData d{group_from_json(detail::field(s, "group", w + ".symbolic"), n, w + ".symbolic.group"),
                     s.contains("transplant") ? matrix_from_json(s["transplant"], n, w + ".symbolic.transplant") : Matrix::identity(n),
                     s.contains("material") ? detail::text(s["material"], w + ".symbolic.material") : "default"};
      p.data = std::move(d);
    } else {
      p.data = NumericData{model_from_json(e["numeric"], n, w + ".numeric")};
    }
    points.push_back(std::move(p));
  }
  const std::string name = j.contains("name") ? detail::text(j["name"], "body.name") : "";
  try {
    return BodyGrid(n, shape, std::move(points), name);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, "invalid body: " + e.message());
  }
}

/// Parses a body document; syntax errors carry line and column.
inline BodyGrid parse_body(const std::string& text, const std::string& source = "<input>") {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                                           std::string(e.what()) + ")");
  }
  try {
    return body_from_json(j);
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.message());
  }
}

struct LoadedBody {
  std::string path;
  std::string digest;
  BodyGrid body;
};

inline LoadedBody load_body(const std::string& path) {
  const std::string text = read_file(path);
  return {path, hex64(fnv1a64(text)), parse_body(text, path)};
}

// --- reports ------------------------------------------------------------------

inline json input_json(const LoadedBody& b) {
  return {{"path", b.path}, {"name", b.body.name()}, {"points", b.body.size()}, {"fnv1a64", b.digest}};
}

inline json to_json(const std::vector<std::vector<ObjectId>>& components) {
  json out = json::array();
  for (const auto& c : components) {
    json block = json::array();
    for (ObjectId x : c) block.push_back(x.index);
    out.push_back(block);
  }
  return out;
}

inline json to_json(const HomogeneityVerdict& h) {
  return {{"verdict", to_string(h.verdict)}, {"method", h.method}, {"max_defect", h.max_defect}, {"nodes", h.nodes}};
}

inline json to_json(const SymmetryClass& c, int n) {
  json out = {{"class", to_string(c.label)}};
  if (c.label == SymmetryClass::Label::TransverselyIsotropic) out["axis"] = to_json(c.axis);
  if (c.label == SymmetryClass::Label::Orthotropic || (c.label == SymmetryClass::Label::DiscreteOther && n == 2 && c.frame.n == n))
    out["frame"] = to_json(c.frame);
  return out;
}

inline json pointwise_json(const BodyGrid& body, const std::vector<SymmetryClass>& cls, const std::vector<std::string>& groups) {
  json out = json::array();
  for (std::size_t i = 0; i < body.size(); ++i) {
    json pos = json::array();
    for (int k = 0; k < body.dim(); ++k) pos.push_back(body.point(i).pos[static_cast<std::size_t>(k)]);
    json e = to_json(cls[i], body.dim());
    e["point"] = i;
    e["pos"] = pos;
    e["group"] = groups[i];
    out.push_back(e);
  }
  return out;
}

inline std::string orientation_name(Orientation o) { return o == Orientation::Special ? "SO" : "O"; }

inline json composite_json(const CompositeReport& r, const BodyGrid& body) {
  json cons = json::array();
  for (const auto& c : r.constituents)
    cons.push_back({{"uniform", c.uniform}, {"components", c.components}, {"homogeneity", to_string(c.homogeneity)}});
  return {
      {"verdict",
       {{"uniform", r.uniform},
        {"homogeneity", to_string(r.homogeneity.verdict)},
        {"stress_free_configuration", to_string(r.stress_free_configuration)},
        {"components", r.components.size()},
        {"symmetry_class", class_summary(r.pointwise_class)}}},
      {"composite",
       {{"components", to_json(r.components)},
        {"core_transitive", r.core_transitive},
        {"locally_trivial",
         {{"horizontal", r.locally_trivial.horizontal}, {"vertical", r.locally_trivial.vertical}, {"relation", r.locally_trivial.relation}}},
        {"homogeneity", to_json(r.homogeneity)},
        {"pointwise", pointwise_json(body, r.pointwise_class, r.vertex_groups)}}},
      {"constituents", cons},
      {"warnings", r.warnings}};
}

inline json body_report_json(const BodyReport& r, const BodyGrid& body) {
  return {{"verdict",
           {{"uniform", r.uniform},
            {"homogeneity", to_string(r.homogeneity.verdict)},
            {"components", r.components.size()},
            {"symmetry_class", class_summary(r.pointwise_class)}}},
          {"body",
           {{"components", to_json(r.components)},
            {"homogeneity", to_json(r.homogeneity)},
            {"pointwise", pointwise_json(body, r.pointwise_class, r.vertex_groups)}}},
          {"warnings", r.warnings}};
}

inline json solution_json(const TransplantSolution& s, double tol) {
  return {{"converged", s.converged},
          {"residual", s.residual},
          {"train_residual", s.train_residual},
          {"iterations", s.iterations},
          {"best_start", s.best_start},
          {"transplant", to_json(s.p)},
          {"verdict", s.converged ? "isomorphic" : "not isomorphic at tol"},
          {"tol", tol}};
}

namespace detail {

inline std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
    return buf;
  }
  return v.dump();
}

inline bool flat(const json& v) {
  if (!v.is_array()) return !v.is_object();
  for (const auto& e : v)
    if (e.is_object()) return false;
  return v.size() <= 16 || std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); });
}

inline void render(std::ostringstream& out, const json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (auto it = v.begin(); it != v.end(); ++it) {
    const json& e = it.value();
    if (e.is_object()) {
      out << pad << it.key() << ":\n";
      render(out, e, indent + 1);
    } else if (e.is_array() && !flat(e)) {
      out << pad << it.key() << ":\n";
      std::size_t k = 0;
      for (const auto& item : e) {
        if (item.is_object()) {
          out << pad << "  - [" << k++ << "]\n";
          render(out, item, indent + 2);
        } else {
          out << pad << "  - " << (item.is_primitive() ? scalar_text(item) : item.dump()) << "\n";
        }
      }
    } else {
      out << pad << it.key() << ": " << (e.is_primitive() ? scalar_text(e) : e.dump()) << "\n";
    }
  }
}

}  // namespace detail

/// Human-readable rendering of a report document.
inline std::string render_text(const json& report) {
  std::ostringstream out;
  detail::render(out, report, 0);
  return out.str();
}

}  // namespace matg
