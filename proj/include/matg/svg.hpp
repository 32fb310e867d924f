#pragma once

// Three-panel plate diagram: the two constituents and the composite.
// Continuous symmetry is drawn as the image of a circle under the transplant
// (circles, ellipses), discrete symmetry as a ⊥ mark carried by the
// transplant. Composite points of a non-uniform result are coloured by
// transitivity component. 3D bodies show their z = 0 layer, projected.

#include <cstdio>
#include <sstream>
#include <string>

#include "matg/classifier.hpp"

namespace matg {

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

/// Upper-left 2x2 block, as a flat row-major array.
inline std::array<double, 4> planar(const Matrix& m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }

/// SVG transform for a planar map with the y axis pointing up.
inline std::string svg_transform(const std::array<double, 4>& m, double scale, double cx, double cy) {
  return "matrix(" + fmt(scale * m[0]) + " " + fmt(-scale * m[2]) + " " + fmt(-scale * m[1]) + " " + fmt(scale * m[3]) + " " +
         fmt(cx) + " " + fmt(cy) + ")";
}

inline double planar_norm(const std::array<double, 4>& m) {
  // largest singular value of a 2x2 block
  const double a = m[0] * m[0] + m[2] * m[2], b = m[0] * m[1] + m[2] * m[3], d = m[1] * m[1] + m[3] * m[3];
  const double tr = a + d, disc = std::sqrt(std::max(0.0, (a - d) * (a - d) + 4 * b * b));
  return std::sqrt(std::max(1e-300, (tr + disc) / 2));
}

inline const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"};

struct Glyph {
  bool continuous = false;
  std::array<double, 4> map{1, 0, 0, 1};
  std::string colour = "#222222";
};

inline void draw_glyph(std::ostringstream& out, const Glyph& g, double size, double cx, double cy) {
  const std::string tr = svg_transform(g.map, size, cx, cy);
  if (g.continuous) {
    out << "<circle r=\"1\" transform=\"" << tr << "\" fill=\"none\" stroke=\"" << g.colour
        << "\" vector-effect=\"non-scaling-stroke\" stroke-width=\"1.5\"/>\n";
  } else {
    out << "<path d=\"M -1 0 L 1 0 M 0 0 L 0 1.4\" transform=\"" << tr << "\" fill=\"none\" stroke=\"" << g.colour
        << "\" vector-effect=\"non-scaling-stroke\" stroke-width=\"1.5\"/>\n";
  }
}

inline Glyph point_glyph(const MaterialPoint& p) {
  Glyph g;
  if (!p.is_symbolic()) {
    g.continuous = false;
    g.colour = "#999999";
    return g;
  }
  const SymbolicData d = normalized(p.symbolic());
  g.continuous = !d.group.is_discrete();
  g.map = planar(d.transplant);
  return g;
}

}  // namespace detail

/// Renders constituents a, b and their composite side by side.
inline std::string render_plate_svg(const BodyGrid& a, const BodyGrid& b, const CompositeReport& report) {
  require_same_grid(a, b);
  const double cell = 40, margin = 30, gap = 40;
  const int nx = a.shape()[0], ny = a.shape()[1];
  const double panel_w = nx * cell, panel_h = ny * cell;
  const double width = 2 * margin + 3 * panel_w + 2 * gap, height = 2 * margin + panel_h + 20;

  double biggest = 1e-300;
  for (const BodyGrid* body : {&a, &b})
    for (const auto& p : body->points())
      biggest = std::max(biggest, detail::planar_norm(detail::point_glyph(p).map));
  const double size = 0.35 * cell / biggest;

  std::vector<std::size_t> component(a.size(), 0);
  for (std::size_t c = 0; c < report.components.size(); ++c)
    for (ObjectId x : report.components[c]) component[x.index] = c;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(width) << "\" height=\"" << detail::fmt(height)
      << "\" viewBox=\"0 0 " << detail::fmt(width) << " " << detail::fmt(height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const char* titles[] = {"constituent A", "constituent B", "composite"};
  for (int panel = 0; panel < 3; ++panel) {
    const double x0 = margin + panel * (panel_w + gap);
    out << "<g>\n<text x=\"" << detail::fmt(x0) << "\" y=\"" << detail::fmt(margin - 10)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << titles[panel] << "</text>\n";
    out << "<rect x=\"" << detail::fmt(x0) << "\" y=\"" << detail::fmt(margin) << "\" width=\"" << detail::fmt(panel_w)
        << "\" height=\"" << detail::fmt(panel_h) << "\" fill=\"none\" stroke=\"#bbbbbb\"/>\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto& pa = a.point(i);
      if (pa.pos[2] != 0) continue;
      const double cx = x0 + (pa.pos[0] + 0.5) * cell;
      const double cy = margin + (ny - pa.pos[1] - 0.5) * cell;
      detail::Glyph g;
      if (panel == 0) {
        g = detail::point_glyph(pa);
      } else if (panel == 1) {
        g = detail::point_glyph(b.point(i));
      } else {
        // the composite inherits the finer (discrete) constituent's frame
        const detail::Glyph ga = detail::point_glyph(pa), gb = detail::point_glyph(b.point(i));
        g = ga.continuous ? gb : ga;
        g.continuous = report.pointwise_class[i].label == SymmetryClass::Label::Isotropic ||
                       report.pointwise_class[i].label == SymmetryClass::Label::TransverselyIsotropic;
        g.colour = report.uniform ? "#222222" : detail::kPalette[component[i] % std::size(detail::kPalette)];
      }
      detail::draw_glyph(out, g, size, cx, cy);
    }
    out << "</g>\n";
  }
  out << "<text x=\"" << detail::fmt(margin) << "\" y=\"" << detail::fmt(height - 8)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << (report.uniform ? "uniform" : "not uniform") << ", "
      << to_string(report.homogeneity.verdict) << ", stress-free configuration: " << to_string(report.stress_free_configuration)
      << ", class: " << class_summary(report.pointwise_class) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace matg
