#pragma once

// Open regions used by glued maps: half-spaces, axis slabs, tubes around
// segments, tile columns and boxes. Membership and boundary queries are
// decidable to kGeomTol.

#include "bilip/geom.hpp"
#include "bilip/rng.hpp"

namespace bilip {

enum class RegionKind { HalfSpace, AxisSlab, Tube, TileColumn, Box };

struct Region {
  RegionKind kind = RegionKind::Box;
  int dim = 0;

  // HalfSpace: { x : normal . x > offset_c }
  Vec normal;
  double offset_c = 0;

  // AxisSlab: { x : lo_c < x[axis] < hi_c }
  int axis = 0;
  double lo_c = 0, hi_c = 0;

  // Tube: open r-neighborhood of the segment [a, b]
  Vec a, b;
  double r = 0;

  // TileColumn: open box on the first dim-1 axes, unbounded on the last.
  // Box: open axis box.
  Vec lo, hi;

  static Region half_space(const Vec& normal, double c);
  static Region axis_slab(int dim, int axis, double lo, double hi);
  static Region tube(const Vec& a, const Vec& b, double r);
  static Region tile_column(const Vec& lo, const Vec& hi);  // lo/hi of dim-1 coords, ambient dim = lo.dim()+1
  static Region box(const Vec& lo, const Vec& hi);

  bool contains(const Vec& p) const;                          // open membership
  bool closure_contains(const Vec& p, double tol = kGeomTol) const;
  bool on_boundary(const Vec& p, double tol = kGeomTol) const;

  // Closed bounding box (infinite extents where unbounded).
  Box bbox() const;
  bool bounded() const { return bbox().bounded(); }

  // Whether the closed box lies inside the closed region.
  bool contains_box(const Box& box, double tol = kGeomTol) const;

  Vec boundary_sample(Rng& rng, const Box& hint) const;
  Vec interior_sample(Rng& rng, const Box& hint) const;
};

// Distance between the two regions (0 when closures intersect or touch).
// Exact for tube/tube and all axis-box-like pairs; conservative lower bound
// otherwise.
double region_gap(const Region& x, const Region& y);

}  // namespace bilip
