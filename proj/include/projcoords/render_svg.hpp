#pragma once

// Static SVG picture of the normalized configuration of a pair of pants: the
// central triangle, the three adjacent triangles and the three flag lines,
// drawn in the affine chart X + Y + Z = 1, [X:Y:Z] -> (X/S, Y/S).
//
// On the valid domain every drawn vertex has positive coordinate sum:
// b1, c2, a2, b3 > 1 and a3, c1, x > 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "projcoords/errors.hpp"
#include "projcoords/flag_oracle.hpp"

namespace projcoords {

inline constexpr double kChartTolerance = 1e-9;

struct ChartPoint {
  double x = 0.0;
  double y = 0.0;
};

inline ChartPoint to_chart(const Vec3& p) {
  const double sum = p.sum();
  if (!(std::abs(sum) >= kChartTolerance)) {
    std::ostringstream msg;
    msg << "point [" << p[0] << ", " << p[1] << ", " << p[2]
        << "] is too close to the line X + Y + Z = 0";
    throw Error(ErrorKind::ChartFailure, msg.str());
  }
  return {p[0] / sum, p[1] / sum};
}

/// Homogeneous geometry of the picture.
struct ConfigScene {
  /// Delta+, Delta1, Delta2, Delta3.
  std::array<std::array<Vec3, 3>, 4> triangles;
  /// For each flag line: the flag point and the two meets lying on it.
  std::array<std::array<Vec3, 3>, 3> lines;
};

inline ConfigScene scene_of(const PantsFlagConfig& c) {
  const Vec3 e1 = Vec3::UnitX(), e2 = Vec3::UnitY(), e3 = Vec3::UnitZ();
  ConfigScene scene;
  scene.triangles = {{{e1, e2, e3},
                      {e2, e3, c.outer_point(0).coords()},
                      {e3, e1, c.outer_point(1).coords()},
                      {e1, e2, c.outer_point(2).coords()}}};
  scene.lines = {{{e1, c.meet13(), c.meet12()},
                  {e2, c.meet12(), c.meet23()},
                  {e3, c.meet13(), c.meet23()}}};
  return scene;
}

namespace detail {

inline std::string format_coord(double v) {
  std::ostringstream out;
  out << std::setprecision(4) << v;
  return out.str();
}

inline std::string homogeneous_label(const Vec3& p) {
  return "[" + format_coord(p[0]) + ", " + format_coord(p[1]) + ", " +
         format_coord(p[2]) + "]";
}

inline std::string xml_escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace detail

inline std::string render_config_svg(const PantsFlagConfig& c,
                                     const std::string& title) {
  const ConfigScene scene = scene_of(c);

  std::vector<ChartPoint> all;
  for (const auto& tri : scene.triangles) {
    for (const Vec3& v : tri) all.push_back(to_chart(v));
  }
  for (const auto& line : scene.lines) {
    for (const Vec3& v : line) all.push_back(to_chart(v));
  }
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const ChartPoint& p : all) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  constexpr double kSize = 640.0;
  constexpr double kMargin = 70.0;
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
  const double scale = (kSize - 2.0 * kMargin) / span;
  auto sx = [&](const ChartPoint& p) { return kMargin + (p.x - xmin) * scale; };
  auto sy = [&](const ChartPoint& p) {
    return kSize - kMargin - (p.y - ymin) * scale;
  };

  std::ostringstream svg;
  svg << std::fixed << std::setprecision(3);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << kSize << "\" height=\"" << kSize << "\" viewBox=\"0 0 " << kSize << " "
      << kSize << "\">\n"
      << "  <title>" << detail::xml_escape(title) << "</title>\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  static constexpr std::array<const char*, 4> kFill{"#f2c14e", "#5b8e7d",
                                                    "#8cb369", "#4d9de0"};
  static constexpr std::array<const char*, 4> kName{"Delta+", "Delta1",
                                                    "Delta2", "Delta3"};
  for (std::size_t t = 0; t < 4; ++t) {
    svg << "  <polygon id=\"" << kName[t] << "\" points=\"";
    for (std::size_t v = 0; v < 3; ++v) {
      const ChartPoint p = to_chart(scene.triangles[t][v]);
      svg << (v ? " " : "") << sx(p) << "," << sy(p);
    }
    svg << "\" fill=\"" << kFill[t]
        << "\" fill-opacity=\"0.55\" stroke=\"black\" stroke-width=\"1\"/>\n";
  }

  for (std::size_t k = 0; k < 3; ++k) {
    // Extend the segment to cover all three points on the line.
    std::array<ChartPoint, 3> pts{};
    for (std::size_t v = 0; v < 3; ++v) pts[v] = to_chart(scene.lines[k][v]);
    std::size_t a = 0, b = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        const double d = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
        if (d > best) best = d, a = i, b = j;
      }
    }
    svg << "  <line id=\"F" << k + 1 << "\" x1=\"" << sx(pts[a]) << "\" y1=\""
        << sy(pts[a]) << "\" x2=\"" << sx(pts[b]) << "\" y2=\"" << sy(pts[b])
        << "\" stroke=\"#c0392b\" stroke-width=\"2\" stroke-dasharray=\"6,3\"/>\n";
  }

  std::vector<Vec3> labelled{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ(),
                             c.outer_point(0).coords(),
                             c.outer_point(1).coords(),
                             c.outer_point(2).coords()};
  for (const Vec3& v : labelled) {
    const ChartPoint p = to_chart(v);
    svg << "  <circle cx=\"" << sx(p) << "\" cy=\"" << sy(p)
        << "\" r=\"3\" fill=\"black\"/>\n"
        << "  <text x=\"" << sx(p) + 6.0 << "\" y=\"" << sy(p) - 6.0
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << detail::homogeneous_label(v) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace projcoords
