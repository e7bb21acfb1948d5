#include "bilip/svg.hpp"

#include <cstdio>
#include <sstream>

namespace bilip {

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}
}  // namespace

std::string render_grid(const RenderSpec& spec) {
  require(spec.map != nullptr && spec.map->dim == 2, "render_grid: map must be two-dimensional");
  require(spec.pitch > 0, "render_grid: pitch must be positive");
  require(spec.viewport.dim() == 2 && spec.viewport.bounded(), "render_grid: viewport must be a bounded box");
  require(spec.samples_per_line >= 2, "render_grid: need at least 2 samples per line");

  const Box& vp = spec.viewport;
  // World-to-SVG: flip the vertical axis so y grows upward in world space.
  auto sx = [&](double x) { return x - vp.lo[0]; };
  auto sy = [&](double y) { return vp.hi[1] - y; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 " << fmt(vp.extent(0)) << " "
      << fmt(vp.extent(1)) << "\">\n";

  auto polyline = [&](const std::vector<Vec>& pts, const char* cls) {
    out << "  <polyline class=\"" << cls << "\" fill=\"none\" stroke=\"currentColor\" stroke-width=\""
        << fmt(spec.stroke_width) << "\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i) out << " ";
      out << fmt(sx(pts[i][0])) << "," << fmt(sy(pts[i][1]));
    }
    out << "\"/>\n";
  };

  auto sample_line = [&](bool horizontal, double c) {
    std::vector<Vec> pts;
    pts.reserve(static_cast<size_t>(spec.samples_per_line));
    for (int i = 0; i < spec.samples_per_line; ++i) {
      double t = static_cast<double>(i) / (spec.samples_per_line - 1);
      Vec p{horizontal ? vp.lo[0] + t * vp.extent(0) : c, horizontal ? c : vp.lo[1] + t * vp.extent(1)};
      pts.push_back(evaluate(spec.map, p));
    }
    return pts;
  };

  // Gridlines at integer multiples of the pitch inside the viewport.
  for (long long k = static_cast<long long>(std::ceil(vp.lo[1] / spec.pitch));
       k <= static_cast<long long>(std::floor(vp.hi[1] / spec.pitch)); ++k)
    polyline(sample_line(true, spec.pitch * static_cast<double>(k)), "h");
  for (long long k = static_cast<long long>(std::ceil(vp.lo[0] / spec.pitch));
       k <= static_cast<long long>(std::floor(vp.hi[0] / spec.pitch)); ++k)
    polyline(sample_line(false, spec.pitch * static_cast<double>(k)), "v");

  for (const auto& [src, img] : spec.designated) {
    out << "  <line class=\"arrow\" stroke=\"currentColor\" stroke-width=\"" << fmt(spec.stroke_width * 1.5)
        << "\" x1=\"" << fmt(sx(src[0])) << "\" y1=\"" << fmt(sy(src[1])) << "\" x2=\"" << fmt(sx(img[0]))
        << "\" y2=\"" << fmt(sy(img[1])) << "\"/>\n";
    out << "  <circle class=\"target\" fill=\"currentColor\" cx=\"" << fmt(sx(img[0])) << "\" cy=\""
        << fmt(sy(img[1])) << "\" r=\"" << fmt(spec.stroke_width * 3.0) << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace bilip
