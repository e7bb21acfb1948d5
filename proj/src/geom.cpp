#include "bilip/geom.hpp"

#include <algorithm>

namespace bilip {

void SeparatedNet::validate() const {
  require(dim >= 1 && dim <= kMaxDim, "net dimension out of range");
  require(!points.empty(), "net has no points");
  require(sep > 0, "net separation must be positive");
  require(window.dim() == dim, "net window dimension mismatch");
  for (const Vec& p : points) {
    require(p.dim() == dim, "net point dimension mismatch");
    require(p.finite(), "net point has non-finite coordinate");
  }
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      double d = points[i].dist(points[j]);
      require(d >= sep - kGeomTol, "net points closer than declared separation");
    }
  }
}

double dist_to_segment(const Vec& p, const Vec& a, const Vec& b) {
  require(p.dim() == a.dim() && a.dim() == b.dim(), "dist_to_segment: dimension mismatch");
  Vec ab = b - a;
  double len_sq = ab.norm_sq();
  if (len_sq == 0.0) return p.dist(a);
  double t = (p - a).dot(ab) / len_sq;
  if (t <= 0.0) return p.dist(a);
  if (t >= 1.0) return p.dist(b);
  return p.dist(a + ab * t);
}

IVec nearest_lattice_index(const Vec& p, const LatticeSpec& spec) {
  require(p.dim() == spec.dim, "nearest_lattice_index: dimension mismatch");
  require(p.finite(), "nearest_lattice_index: non-finite point");
  IVec k(spec.dim);
  for (int i = 0; i < spec.dim; ++i) {
    double scaled = (p[i] - spec.offset[i]) * static_cast<double>(spec.N);
    k[i] = static_cast<long long>(std::floor(scaled + 0.5));
  }
  return k;
}

Vec nearest_lattice_point(const Vec& p, const LatticeSpec& spec) {
  return spec.point(nearest_lattice_index(p, spec));
}

std::vector<IVec> lattice_indices_in_ball(const Vec& center, double t, const LatticeSpec& spec) {
  require(center.dim() == spec.dim, "lattice_indices_in_ball: dimension mismatch");
  require(t >= 0, "lattice_indices_in_ball: negative radius");
  const int d = spec.dim;
  const double tol = kGeomTol;
  std::vector<IVec> out;
  IVec k(d);
  // Enumerate the bounding cube of indices, keep those inside the closed ball.
  std::array<long long, kMaxDim> lo{}, hi{};
  for (int i = 0; i < d; ++i) {
    double ci = (center[i] - spec.offset[i]) * static_cast<double>(spec.N);
    double ti = t * static_cast<double>(spec.N);
    lo[i] = static_cast<long long>(std::ceil(ci - ti - tol));
    hi[i] = static_cast<long long>(std::floor(ci + ti + tol));
    if (lo[i] > hi[i]) return out;
  }
  const double limit = t + tol;
  auto rec = [&](auto&& self, int axis) -> void {
    if (axis == d) {
      if (spec.point(k).dist(center) <= limit) out.push_back(k);
      return;
    }
    for (long long v = lo[axis]; v <= hi[axis]; ++v) {
      k[axis] = v;
      self(self, axis + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vec> lattice_points_in_ball(const Vec& center, double t, const LatticeSpec& spec) {
  std::vector<Vec> out;
  for (const IVec& k : lattice_indices_in_ball(center, t, spec)) out.push_back(spec.point(k));
  return out;
}

NetConstants net_constants(const std::vector<Vec>& points, const Box& window, double grid_step) {
  require(points.size() >= 2, "net_constants: need at least 2 points");
  require(grid_step > 0, "net_constants: grid_step must be positive");
  const int d = window.dim();
  for (int i = 0; i < d; ++i) require(window.extent(i) > 0, "net_constants: empty window");

  NetConstants nc;
  nc.sep = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      nc.sep = std::min(nc.sep, points[i].dist(points[j]));

  std::array<long long, kMaxDim> steps{};
  for (int i = 0; i < d; ++i)
    steps[i] = std::max<long long>(1, static_cast<long long>(std::floor(window.extent(i) / grid_step)));

  IVec k(d);
  double cover = 0;
  auto rec = [&](auto&& self, int axis) -> void {
    if (axis == d) {
      Vec q(d);
      for (int i = 0; i < d; ++i)
        q[i] = window.lo[i] + window.extent(i) * (static_cast<double>(k[i]) / static_cast<double>(steps[i]));
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& p : points) best = std::min(best, p.dist(q));
      cover = std::max(cover, best);
      return;
    }
    for (long long v = 0; v <= steps[axis]; ++v) {
      k[axis] = v;
      self(self, axis + 1);
    }
  };
  rec(rec, 0);
  nc.cover = cover;
  return nc;
}

}  // namespace bilip
