#include "bilip/region.hpp"

#include <algorithm>
#include <limits>

namespace bilip {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double dist_segment_to_segment(const Vec& a1, const Vec& b1, const Vec& a2, const Vec& b2) {
  // Minimize dist(p(t), [a2,b2]) over t in [0,1]; the objective is convex in
  // t, so ternary search converges to full precision.
  auto f = [&](double t) {
    Vec p = a1 + (b1 - a1) * t;
    return dist_to_segment(p, a2, b2);
  };
  double lo = 0, hi = 1;
  for (int it = 0; it < 200; ++it) {
    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (f(m1) <= f(m2))
      hi = m2;
    else
      lo = m1;
  }
  return std::min({f(lo), f(0.5 * (lo + hi)), f(hi), f(0.0), f(1.0)});
}

double dist_segment_to_box(const Vec& a, const Vec& b, const Box& box) {
  auto f = [&](double t) {
    Vec p = a + (b - a) * t;
    double s = 0;
    for (int i = 0; i < box.dim(); ++i) {
      double d = 0;
      if (p[i] < box.lo[i]) d = box.lo[i] - p[i];
      if (p[i] > box.hi[i]) d = p[i] - box.hi[i];
      s += d * d;
    }
    return std::sqrt(s);
  };
  double lo = 0, hi = 1;
  for (int it = 0; it < 200; ++it) {
    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (f(m1) <= f(m2))
      hi = m2;
    else
      lo = m1;
  }
  return std::min({f(lo), f(0.5 * (lo + hi)), f(hi), f(0.0), f(1.0)});
}

// Axis-interval representation for box-like regions.
bool as_intervals(const Region& rg, Box* out) {
  switch (rg.kind) {
    case RegionKind::AxisSlab: {
      Vec lo(rg.dim), hi(rg.dim);
      for (int i = 0; i < rg.dim; ++i) {
        lo[i] = -kInf;
        hi[i] = kInf;
      }
      lo[rg.axis] = rg.lo_c;
      hi[rg.axis] = rg.hi_c;
      *out = Box(lo, hi);
      return true;
    }
    case RegionKind::TileColumn: {
      Vec lo(rg.dim), hi(rg.dim);
      for (int i = 0; i + 1 < rg.dim; ++i) {
        lo[i] = rg.lo[i];
        hi[i] = rg.hi[i];
      }
      lo[rg.dim - 1] = -kInf;
      hi[rg.dim - 1] = kInf;
      *out = Box(lo, hi);
      return true;
    }
    case RegionKind::Box:
      *out = Box(rg.lo, rg.hi);
      return true;
    default:
      return false;
  }
}

double box_gap(const Box& x, const Box& y) {
  double s = 0;
  for (int i = 0; i < x.dim(); ++i) {
    double d = std::max({0.0, x.lo[i] - y.hi[i], y.lo[i] - x.hi[i]});
    if (std::isinf(d)) return kInf;
    s += d * d;
  }
  return std::sqrt(s);
}
}  // namespace

Region Region::half_space(const Vec& normal, double c) {
  Region r;
  r.kind = RegionKind::HalfSpace;
  r.dim = normal.dim();
  require(normal.norm() > kGeomTol, "half-space normal must be nonzero");
  r.normal = normal * (1.0 / normal.norm());
  r.offset_c = c / normal.norm();
  return r;
}

Region Region::axis_slab(int dim, int axis, double lo, double hi) {
  require(axis >= 0 && axis < dim, "axis-slab axis out of range");
  require(lo < hi, "axis-slab needs lo < hi");
  Region r;
  r.kind = RegionKind::AxisSlab;
  r.dim = dim;
  r.axis = axis;
  r.lo_c = lo;
  r.hi_c = hi;
  return r;
}

Region Region::tube(const Vec& a, const Vec& b, double radius) {
  require(a.dim() == b.dim(), "tube endpoint dimension mismatch");
  require(radius > 0, "tube radius must be positive");
  Region r;
  r.kind = RegionKind::Tube;
  r.dim = a.dim();
  r.a = a;
  r.b = b;
  r.r = radius;
  return r;
}

Region Region::tile_column(const Vec& lo, const Vec& hi) {
  require(lo.dim() == hi.dim(), "tile-column corner dimension mismatch");
  require(lo.dim() + 1 <= kMaxDim, "tile-column ambient dimension out of range");
  Region r;
  r.kind = RegionKind::TileColumn;
  r.dim = lo.dim() + 1;
  r.lo = lo;
  r.hi = hi;
  for (int i = 0; i < lo.dim(); ++i) require(lo[i] < hi[i], "tile-column needs lo < hi");
  return r;
}

Region Region::box(const Vec& lo, const Vec& hi) {
  Region r;
  r.kind = RegionKind::Box;
  r.dim = lo.dim();
  r.lo = lo;
  r.hi = hi;
  for (int i = 0; i < lo.dim(); ++i) require(lo[i] < hi[i], "box region needs lo < hi");
  return r;
}

bool Region::contains(const Vec& p) const {
  switch (kind) {
    case RegionKind::HalfSpace:
      return normal.dot(p) > offset_c;
    case RegionKind::Tube:
      return dist_to_segment(p, a, b) < r;
    default: {
      Box iv;
      as_intervals(*this, &iv);
      for (int i = 0; i < dim; ++i)
        if (!(p[i] > iv.lo[i] && p[i] < iv.hi[i])) return false;
      return true;
    }
  }
}

bool Region::closure_contains(const Vec& p, double tol) const {
  switch (kind) {
    case RegionKind::HalfSpace:
      return normal.dot(p) >= offset_c - tol;
    case RegionKind::Tube:
      return dist_to_segment(p, a, b) <= r + tol;
    default: {
      Box iv;
      as_intervals(*this, &iv);
      return iv.contains(p, tol);
    }
  }
}

bool Region::on_boundary(const Vec& p, double tol) const {
  switch (kind) {
    case RegionKind::HalfSpace:
      return std::abs(normal.dot(p) - offset_c) <= tol;
    case RegionKind::Tube:
      return std::abs(dist_to_segment(p, a, b) - r) <= tol;
    default:
      return closure_contains(p, tol) && !contains(p);
  }
}

Box Region::bbox() const {
  switch (kind) {
    case RegionKind::HalfSpace: {
      Vec lo_(dim), hi_(dim);
      for (int i = 0; i < dim; ++i) {
        lo_[i] = -kInf;
        hi_[i] = kInf;
      }
      return Box(lo_, hi_);
    }
    case RegionKind::Tube: {
      Vec lo_(dim), hi_(dim);
      for (int i = 0; i < dim; ++i) {
        lo_[i] = std::min(a[i], b[i]) - r;
        hi_[i] = std::max(a[i], b[i]) + r;
      }
      return Box(lo_, hi_);
    }
    default: {
      Box iv;
      as_intervals(*this, &iv);
      return iv;
    }
  }
}

bool Region::contains_box(const Box& box, double tol) const {
  switch (kind) {
    case RegionKind::Tube: {
      if (!box.bounded()) return false;
      // dist to segment is convex, so the max over the box is at a corner.
      const int d = dim;
      long long corners = 1ll << d;
      for (long long m = 0; m < corners; ++m) {
        Vec p(d);
        for (int i = 0; i < d; ++i) p[i] = (m >> i) & 1 ? box.hi[i] : box.lo[i];
        if (dist_to_segment(p, a, b) > r + tol) return false;
      }
      return true;
    }
    case RegionKind::HalfSpace: {
      if (!box.bounded()) return false;
      const int d = dim;
      long long corners = 1ll << d;
      for (long long m = 0; m < corners; ++m) {
        Vec p(d);
        for (int i = 0; i < d; ++i) p[i] = (m >> i) & 1 ? box.hi[i] : box.lo[i];
        if (normal.dot(p) < offset_c - tol) return false;
      }
      return true;
    }
    default: {
      Box iv;
      as_intervals(*this, &iv);
      for (int i = 0; i < dim; ++i) {
        if (box.lo[i] < iv.lo[i] - tol || box.hi[i] > iv.hi[i] + tol) return false;
      }
      return true;
    }
  }
}

Vec Region::boundary_sample(Rng& rng, const Box& hint) const {
  switch (kind) {
    case RegionKind::Tube: {
      // Random point at exact distance r from the segment.
      double t = rng.uniform();
      Vec q = a + (b - a) * t;
      Vec dir = rng.unit_vec(dim);
      // Remove the segment-parallel component so the offset is transverse.
      Vec ab = b - a;
      if (ab.norm() > kGeomTol) {
        Vec u = ab * (1.0 / ab.norm());
        dir = dir - u * dir.dot(u);
        double n = dir.norm();
        if (n < 1e-9) return boundary_sample(rng, hint);
        dir = dir * (1.0 / n);
      }
      return q + dir * r;
    }
    case RegionKind::HalfSpace: {
      Vec p = rng.in_box(hint);
      return p - normal * (normal.dot(p) - offset_c);
    }
    default: {
      Box iv;
      as_intervals(*this, &iv);
      // Clamp unbounded axes to the hint, then project onto a random face.
      Vec p(dim);
      std::vector<int> finite_axes;
      for (int i = 0; i < dim; ++i) {
        double lo_i = std::isfinite(iv.lo[i]) ? iv.lo[i] : hint.lo[i];
        double hi_i = std::isfinite(iv.hi[i]) ? iv.hi[i] : hint.hi[i];
        p[i] = rng.uniform(lo_i, hi_i);
        if (std::isfinite(iv.lo[i])) finite_axes.push_back(i);
      }
      internal_assert(!finite_axes.empty(), "region has no finite face to sample");
      int ax = finite_axes[static_cast<size_t>(rng.uniform_int(0, static_cast<long long>(finite_axes.size()) - 1))];
      p[ax] = rng.bits() & 1 ? iv.lo[ax] : iv.hi[ax];
      return p;
    }
  }
}

Vec Region::interior_sample(Rng& rng, const Box& hint) const {
  switch (kind) {
    case RegionKind::Tube: {
      for (int it = 0; it < 256; ++it) {
        double t = rng.uniform();
        Vec q = a + (b - a) * t;
        Vec dir = rng.unit_vec(dim);
        Vec p = q + dir * (r * 0.95 * rng.uniform());
        if (contains(p)) return p;
      }
      return (a + b) * 0.5;
    }
    case RegionKind::HalfSpace: {
      Vec p = rng.in_box(hint);
      double s = normal.dot(p) - offset_c;
      if (s <= 0) p = p - normal * (2 * s - 1.0);
      return p;
    }
    default: {
      Box iv;
      as_intervals(*this, &iv);
      Vec p(dim);
      for (int i = 0; i < dim; ++i) {
        double lo_i = std::isfinite(iv.lo[i]) ? iv.lo[i] : hint.lo[i];
        double hi_i = std::isfinite(iv.hi[i]) ? iv.hi[i] : hint.hi[i];
        double pad = std::isfinite(iv.lo[i]) ? 1e-7 * std::max(1.0, hi_i - lo_i) : 0.0;
        p[i] = rng.uniform(lo_i + pad, hi_i - pad);
      }
      return p;
    }
  }
}

double region_gap(const Region& x, const Region& y) {
  if (x.kind == RegionKind::Tube && y.kind == RegionKind::Tube) {
    double d = dist_segment_to_segment(x.a, x.b, y.a, y.b) - x.r - y.r;
    return std::max(0.0, d);
  }
  Box bx, by;
  bool xb = as_intervals(x, &bx), yb = as_intervals(y, &by);
  if (xb && yb) return box_gap(bx, by);
  if (x.kind == RegionKind::Tube && yb) return std::max(0.0, dist_segment_to_box(x.a, x.b, by) - x.r);
  if (y.kind == RegionKind::Tube && xb) return std::max(0.0, dist_segment_to_box(y.a, y.b, bx) - y.r);
  // Half-space pairs: exact only for opposing parallel half-spaces.
  if (x.kind == RegionKind::HalfSpace && y.kind == RegionKind::HalfSpace) {
    Vec s = x.normal + y.normal;
    if (s.norm() < 1e-12) return std::max(0.0, x.offset_c + y.offset_c);
    return 0.0;  // non-parallel half-spaces always intersect
  }
  return 0.0;  // conservative: cannot certify a positive gap
}

}  // namespace bilip
