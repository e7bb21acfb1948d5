#pragma once

// Deterministic SVG rendering of a planar map: images of the reference
// gridlines as polylines plus source-to-image arrows for designated points.
// Coordinates are written with fixed formatting so tests can parse them.

#include <string>

#include "bilip/map_expr.hpp"

namespace bilip {

struct RenderSpec {
  MapExpr map;                       // d = 2 only
  double pitch = 1.0;                // reference grid spacing
  Box viewport;                      // world box rendered
  int samples_per_line = 200;
  double stroke_width = 0.02;
  std::vector<std::pair<Vec, Vec>> designated;  // drawn as arrows
};

std::string render_grid(const RenderSpec& spec);

}  // namespace bilip
