#include "bilip/map_expr.hpp"

#include <algorithm>
#include <cmath>

namespace bilip {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<Box> intersect_boxes(const Box& a, const Box& b) {
  Vec lo(a.dim()), hi(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = std::max(a.lo[i], b.lo[i]);
    hi[i] = std::min(a.hi[i], b.hi[i]);
    if (lo[i] > hi[i]) return std::nullopt;
  }
  return Box(lo, hi);
}
}  // namespace

double PiecewiseLinear::eval(double t) const {
  if (pts.empty()) return 0.0;
  if (t <= pts.front().first) return pts.front().second;
  if (t >= pts.back().first) return pts.back().second;
  // Exact at breakpoints, linear in between.
  size_t hi = 1;
  while (pts[hi].first < t) ++hi;
  if (pts[hi].first == t) return pts[hi].second;
  const auto& [t0, v0] = pts[hi - 1];
  const auto& [t1, v1] = pts[hi];
  double s = (t - t0) / (t1 - t0);
  return v0 + s * (v1 - v0);
}

double PiecewiseLinear::lip() const {
  double m = 0;
  for (size_t i = 1; i < pts.size(); ++i) {
    double dt = pts[i].first - pts[i - 1].first;
    m = std::max(m, std::abs(pts[i].second - pts[i - 1].second) / dt);
  }
  return m;
}

void PiecewiseLinear::validate() const {
  require(!pts.empty(), "profile needs at least one breakpoint");
  for (size_t i = 1; i < pts.size(); ++i)
    require(pts[i].first > pts[i - 1].first, "profile breakpoints must be strictly increasing");
  require(pts.front().first >= 0, "profile breakpoints must be nonnegative");
  for (const auto& [t, v] : pts) require(std::isfinite(t) && std::isfinite(v), "profile values must be finite");
}

PiecewiseLinear swap_profile(double eta) {
  require(eta > 0 && eta <= 0.5, "swap profile needs 0 < eta <= 1/2");
  return PiecewiseLinear{{{0.0, kPi}, {1.0, kPi}, {1.0 + 2.0 * eta, 0.0}}};
}

// ---------------------------------------------------------------------------
// Node constructors

namespace {
MapExpr make_node(MapNode&& n) { return std::make_shared<const MapNode>(std::move(n)); }
}  // namespace

MapExpr identity_map(int dim) {
  require(dim >= 1 && dim <= kMaxDim, "identity_map: dimension out of range");
  MapNode n;
  n.kind = NodeKind::Identity;
  n.dim = dim;
  n.support = Box(Vec(dim), Vec(dim));  // moves nothing
  return make_node(std::move(n));
}

MapExpr translation(const Vec& offset) {
  MapNode n;
  n.kind = NodeKind::Affine;
  n.dim = offset.dim();
  AffineData a;
  a.kind = AffineKind::Translation;
  a.offset = offset;
  n.data = std::move(a);
  n.bound = {};  // isometry
  return make_node(std::move(n));
}

MapExpr uniform_scale(int dim, double s) {
  require(std::isfinite(s) && s != 0, "uniform_scale: scale must be nonzero finite");
  MapNode n;
  n.kind = NodeKind::Affine;
  n.dim = dim;
  AffineData a;
  a.kind = AffineKind::UniformScale;
  a.scale = s;
  n.data = std::move(a);
  double l = std::log2(std::abs(s));
  n.bound = {l, -l};
  return make_node(std::move(n));
}

MapExpr diagonal_scale(const Vec& diag) {
  MapNode n;
  n.kind = NodeKind::Affine;
  n.dim = diag.dim();
  double lip = 0, inv = 0;
  for (int i = 0; i < diag.dim(); ++i) {
    require(std::isfinite(diag[i]) && diag[i] != 0, "diagonal_scale: entries must be nonzero");
    lip = std::max(lip, std::log2(std::abs(diag[i])));
    inv = std::max(inv, -std::log2(std::abs(diag[i])));
  }
  AffineData a;
  a.kind = AffineKind::DiagonalScale;
  a.diag = diag;
  n.data = std::move(a);
  n.bound = {lip, inv};
  return make_node(std::move(n));
}

MapExpr orth_frame(std::vector<Vec> rows) {
  require(!rows.empty(), "orth_frame: empty row set");
  int d = rows[0].dim();
  require(static_cast<int>(rows.size()) == d, "orth_frame: need d rows");
  for (int i = 0; i < d; ++i) {
    require(rows[i].dim() == d, "orth_frame: row dimension mismatch");
    for (int j = i; j < d; ++j) {
      double dot = rows[i].dot(rows[j]);
      double want = i == j ? 1.0 : 0.0;
      require(std::abs(dot - want) <= 1e-12, "orth_frame: rows not orthonormal to 1e-12");
    }
  }
  MapNode n;
  n.kind = NodeKind::Affine;
  n.dim = d;
  AffineData a;
  a.kind = AffineKind::OrthFrame;
  a.rows = std::move(rows);
  n.data = std::move(a);
  return make_node(std::move(n));
}

MapExpr spin_map(const SpinData& payload) {
  const int d = payload.center.dim();
  require(d >= 2, "spin_map: dimension must be at least 2");
  require(payload.u.dim() == d && payload.v.dim() == d, "spin_map: plane dimension mismatch");
  require(std::abs(payload.u.norm() - 1.0) <= 1e-12 && std::abs(payload.v.norm() - 1.0) <= 1e-12 &&
              std::abs(payload.u.dot(payload.v)) <= 1e-12,
          "spin_map: (u, v) must be orthonormal to 1e-12");
  require(payload.t0 > 0, "spin_map: t0 must be positive");
  payload.profile.validate();
  require(std::abs(payload.profile.eval(payload.t0)) == 0.0 && payload.profile.last_t() <= payload.t0,
          "spin_map: profile must vanish at and beyond t0");

  MapNode n;
  n.kind = NodeKind::Spin;
  n.dim = d;
  n.data = payload;
  n.bound = BoundPair::symmetric(std::log2(payload.profile.lip() * payload.t0 + 1.0));
  Vec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = payload.center[i] - payload.t0;
    hi[i] = payload.center[i] + payload.t0;
  }
  n.support = Box(lo, hi);
  return make_node(std::move(n));
}

MapExpr make_swap_node(const Vec& x, const Vec& y, double r) {
  const int d = x.dim();
  require(d >= 2, "swap: dimension must be at least 2");
  require(y.dim() == d, "swap: endpoint dimension mismatch");
  require(r > 0, "swap: radius must be positive");
  SwapData s;
  s.x = x;
  s.y = y;
  s.r = r;
  s.sep = x.dist(y);
  require(s.sep > 0, "swap node requires distinct endpoints");
  require(r <= 0.5 * s.sep * (1 + 1e-12), "swap: radius exceeds |x - y| / 2");
  s.eta = r / s.sep;
  // Detect exactly axis-aligned pairs; these get an exact signed-permutation
  // frame so lattice trajectories stay bit-exact.
  int nz = -1;
  bool axis_aligned = true;
  for (int i = 0; i < d; ++i) {
    if (x[i] != y[i]) {
      if (nz >= 0) {
        axis_aligned = false;
        break;
      }
      nz = i;
    }
  }
  if (axis_aligned && nz >= 0) {
    s.axis = nz;
    s.axis_sign = x[nz] > y[nz] ? 1.0 : -1.0;
    s.sep = std::abs(x[nz] - y[nz]);  // exact, no sqrt roundoff
    s.eta = r / s.sep;
  }

  MapNode n;
  n.kind = NodeKind::Swap;
  n.dim = d;
  n.bound = BoundPair::symmetric(std::log2(4.0 * s.sep * s.sep / (r * r)));
  Vec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = std::min(x[i], y[i]) - r;
    hi[i] = std::max(x[i], y[i]) + r;
  }
  n.support = Box(lo, hi);
  n.data = std::move(s);
  return make_node(std::move(n));
}

MapExpr compose(int dim, std::vector<MapExpr> maps) {
  if (maps.empty()) return identity_map(dim);
  for (const MapExpr& m : maps) require(m->dim == dim, "compose: dimension mismatch");
  if (maps.size() == 1) return maps[0];
  MapNode n;
  n.kind = NodeKind::Compose;
  n.dim = dim;
  BoundPair b;
  bool have_support = true;
  Box sup;
  bool first = true;
  for (const MapExpr& m : maps) {
    b = b + m->bound;
    if (!m->support) {
      have_support = false;
    } else if (have_support) {
      sup = first ? *m->support : Box::hull(sup, *m->support);
      first = false;
    }
  }
  n.bound = b;
  if (have_support) n.support = sup;
  ComposeData c;
  c.children = std::move(maps);
  n.data = std::move(c);
  return make_node(std::move(n));
}

MapExpr compose(std::vector<MapExpr> maps) {
  require(!maps.empty(), "compose: cannot infer dimension from an empty list");
  int dim = maps[0]->dim;
  return compose(dim, std::move(maps));
}

// ---------------------------------------------------------------------------
// Glued maps

namespace {
void build_glued_index(GluedData& g) {
  const size_t n = g.entries.size();
  if (n <= 64) {
    g.linear.resize(n);
    for (size_t i = 0; i < n; ++i) g.linear[i] = static_cast<int>(i);
    return;
  }
  double cell = 0;
  std::vector<std::pair<int, Box>> boxed;
  for (size_t i = 0; i < n; ++i) {
    Box bb = g.entries[i].region.bbox();
    if (!bb.bounded()) {
      g.linear.push_back(static_cast<int>(i));
      continue;
    }
    for (int k = 0; k < bb.dim(); ++k) cell = std::max(cell, bb.extent(k));
    boxed.emplace_back(static_cast<int>(i), bb);
  }
  if (cell <= 0) cell = 1;
  g.cell = cell;
  for (const auto& [idx, bb] : boxed) {
    const int d = bb.dim();
    IVec lo(d), hi(d);
    for (int k = 0; k < d; ++k) {
      lo[k] = static_cast<long long>(std::floor(bb.lo[k] / cell));
      hi[k] = static_cast<long long>(std::floor(bb.hi[k] / cell));
    }
    IVec c = lo;
    while (true) {
      g.grid[c].push_back(idx);
      int ax = 0;
      while (ax < d) {
        if (++c[ax] <= hi[ax]) break;
        c[ax] = lo[ax];
        ++ax;
      }
      if (ax == d) break;
    }
  }
}
}  // namespace

int GluedData::locate(const Vec& p) const {
  int best = -1;
  auto consider = [&](int idx) {
    if ((best < 0 || idx < best) && entries[static_cast<size_t>(idx)].region.closure_contains(p)) best = idx;
  };
  for (int idx : linear) consider(idx);
  if (cell > 0) {
    IVec c(p.dim());
    for (int k = 0; k < p.dim(); ++k) c[k] = static_cast<long long>(std::floor(p[k] / cell));
    auto it = grid.find(c);
    if (it != grid.end())
      for (int idx : it->second) consider(idx);
  }
  return best;
}

namespace {
MapExpr finish_glued(std::vector<GlueEntry> entries, int dim) {
  MapNode n;
  n.kind = NodeKind::Glued;
  n.dim = dim;
  BoundPair b;  // identity default contributes (0, 0)
  Box sup;
  bool first = true;
  for (const GlueEntry& e : entries) {
    b = BoundPair::max_of(b, e.map->bound);
    Box rb = e.region.bbox();
    std::optional<Box> eb = e.map->support ? intersect_boxes(rb, *e.map->support) : std::optional<Box>(rb);
    if (!eb) continue;  // entry map never moves anything inside its region
    sup = first ? *eb : Box::hull(sup, *eb);
    first = false;
  }
  n.bound = b;
  n.support = first ? Box(Vec(dim), Vec(dim)) : sup;
  GluedData g;
  g.entries = std::move(entries);
  build_glued_index(g);
  n.data = std::move(g);
  return make_node(std::move(n));
}

// Signed gap between two regions: negative means the open regions overlap,
// values in [-tol, tol] mean the closures touch.
double signed_region_gap(const Region& x, const Region& y) {
  auto seg_metric = [&](double dist, double rsum) { return dist - rsum; };
  if (x.kind == RegionKind::Tube && y.kind == RegionKind::Tube) {
    // convex minimisation over the first segment
    auto f = [&](double t) {
      Vec p = x.a + (x.b - x.a) * t;
      return dist_to_segment(p, y.a, y.b);
    };
    double lo = 0, hi = 1;
    for (int it = 0; it < 200; ++it) {
      double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (f(m1) <= f(m2))
        hi = m2;
      else
        lo = m1;
    }
    double d = std::min({f(lo), f(0.5 * (lo + hi)), f(hi), f(0.0), f(1.0)});
    return seg_metric(d, x.r + y.r);
  }
  // Box-like pairs: signed per-axis gap; max over axes.
  auto as_box = [](const Region& rg, Box* out) {
    if (rg.kind == RegionKind::Tube || rg.kind == RegionKind::HalfSpace) return false;
    Box bb = rg.bbox();
    *out = bb;
    return true;
  };
  Box bx, by;
  if (as_box(x, &bx) && as_box(y, &by)) {
    double g = -kInf;
    for (int i = 0; i < bx.dim(); ++i) {
      double gi = std::max(bx.lo[i] - by.hi[i], by.lo[i] - bx.hi[i]);
      g = std::max(g, gi);
    }
    return g;
  }
  if (x.kind == RegionKind::Tube && as_box(y, &by)) {
    // distance from segment to closed box minus radius (convex in t)
    auto f = [&](double t) {
      Vec p = x.a + (x.b - x.a) * t;
      double s = 0;
      for (int i = 0; i < by.dim(); ++i) {
        double d = 0;
        if (std::isfinite(by.lo[i]) && p[i] < by.lo[i]) d = by.lo[i] - p[i];
        if (std::isfinite(by.hi[i]) && p[i] > by.hi[i]) d = p[i] - by.hi[i];
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
    double d = std::min({f(lo), f(0.5 * (lo + hi)), f(hi), f(0.0), f(1.0)});
    // d == 0 means the segment enters the box: cannot certify; report overlap
    return d - x.r;
  }
  if (y.kind == RegionKind::Tube) return signed_region_gap(y, x);
  if (x.kind == RegionKind::HalfSpace && y.kind == RegionKind::HalfSpace) {
    Vec s = x.normal + y.normal;
    if (s.norm() < 1e-12) return x.offset_c + y.offset_c;  // opposing half-spaces
    return -1.0;  // otherwise they intersect
  }
  return -1.0;  // cannot certify disjointness
}
}  // namespace

MapExpr glue_swaps_prechecked(std::vector<GlueEntry> entries, int dim) {
  return finish_glued(std::move(entries), dim);
}

MapExpr glue(std::vector<GlueEntry> entries, int dim, const GlueOptions& opts) {
  for (const GlueEntry& e : entries) {
    require(e.region.dim == dim && e.map->dim == dim, "glue: dimension mismatch");
  }
  // 1. pairwise disjointness of the open regions
  for (size_t i = 0; i < entries.size(); ++i) {
    for (size_t j = i + 1; j < entries.size(); ++j) {
      double scale = std::max({1.0, entries[i].region.bbox().bounded() ? entries[i].region.bbox().diameter() : 1.0,
                               entries[j].region.bbox().bounded() ? entries[j].region.bbox().diameter() : 1.0});
      double tol = 1e-9 * scale;
      double g = signed_region_gap(entries[i].region, entries[j].region);
      require(g >= -tol, "glue: region overlap detected (entries " + std::to_string(i) + ", " + std::to_string(j) + ")");
      if (opts.check_separation && g > tol) {
        require(g >= opts.min_gap, "glue: non-adjacent regions closer than the required separation (entries " +
                                       std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }

  // 2. per-entry region preservation and boundary agreement
  Rng rng(opts.seed);
  for (size_t i = 0; i < entries.size(); ++i) {
    const Region& rg = entries[i].region;
    const MapExpr& f = entries[i].map;
    if (f->kind == NodeKind::Identity) continue;

    bool exact = false;
    if (f->kind == NodeKind::Swap && rg.kind == RegionKind::Tube) {
      const auto& s = std::get<SwapData>(f->data);
      // A swap over exactly its own tube preserves the tube setwise and
      // fixes its boundary; nothing to sample.
      exact = s.x == rg.a && s.y == rg.b && s.r == rg.r;
    }
    if (!exact && f->support && rg.contains_box(*f->support, 1e-12)) exact = true;

    Box hint = f->support && f->support->bounded() ? f->support->inflated(1.0) : rg.bbox();
    if (!hint.bounded()) {
      Vec lo(dim), hi(dim);
      for (int k = 0; k < dim; ++k) {
        lo[k] = std::isfinite(hint.lo[k]) ? hint.lo[k] : -10.0;
        hi[k] = std::isfinite(hint.hi[k]) ? hint.hi[k] : 10.0;
      }
      hint = Box(lo, hi);
    }
    double tol = 1e-9 * std::max(1.0, hint.diameter());

    int n_int = exact ? 16 : opts.interior_samples;
    int n_bnd = exact ? 16 : opts.boundary_samples;
    for (int k = 0; k < n_int; ++k) {
      Vec p = rg.interior_sample(rng, hint);
      require(rg.closure_contains(evaluate(f, p), tol),
              "glue: entry " + std::to_string(i) + " does not preserve its region (forward)");
      require(rg.closure_contains(evaluate_inverse(f, p), tol),
              "glue: entry " + std::to_string(i) + " does not preserve its region (inverse)");
    }
    for (int k = 0; k < n_bnd; ++k) {
      Vec p = rg.boundary_sample(rng, hint);
      Vec q = evaluate(f, p);
      require(q.dist(p) <= tol,
              "glue: entry " + std::to_string(i) + " disagrees with the identity on its region boundary");
    }
  }
  return finish_glued(std::move(entries), dim);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Vec affine_apply(const AffineData& a, const Vec& p, bool inverse) {
  switch (a.kind) {
    case AffineKind::Translation:
      return inverse ? p - a.offset : p + a.offset;
    case AffineKind::UniformScale:
      return p * (inverse ? 1.0 / a.scale : a.scale);
    case AffineKind::DiagonalScale: {
      Vec r(p.dim());
      for (int i = 0; i < p.dim(); ++i) r[i] = inverse ? p[i] / a.diag[i] : p[i] * a.diag[i];
      return r;
    }
    case AffineKind::OrthFrame: {
      Vec r(p.dim());
      if (!inverse) {
        for (int i = 0; i < p.dim(); ++i) r[i] = a.rows[static_cast<size_t>(i)].dot(p);
      } else {
        for (int i = 0; i < p.dim(); ++i) {
          double s = 0;
          for (int j = 0; j < p.dim(); ++j) s += a.rows[static_cast<size_t>(j)][i] * p[j];
          r[i] = s;
        }
      }
      return r;
    }
  }
  return p;
}

double swap_psi(double t, double eta) {
  if (t <= 1.0) return kPi;
  double t0 = 1.0 + 2.0 * eta;
  if (t >= t0) return 0.0;
  return kPi * (t0 - t) / (2.0 * eta);
}

Vec swap_apply(const SwapData& s, const Vec& p, bool inverse) {
  const int d = p.dim();
  const double t2 = 2.0 + 1.0 / s.eta;
  Vec mid(d);
  for (int i = 0; i < d; ++i) mid[i] = 0.5 * (s.x[i] + s.y[i]);
  Vec w = p - mid;

  Vec z(d);
  Vec wh;  // Householder vector for the generic frame
  bool householder = false;
  if (s.axis >= 0) {
    z[0] = s.axis_sign * w[s.axis] / s.sep;
    int k = 1;
    for (int j = 0; j < d; ++j)
      if (j != s.axis) z[k++] = w[j] / s.sep;
  } else {
    Vec u = (s.x - s.y) * (1.0 / s.sep);
    wh = u;
    wh[0] -= 1.0;
    double q = wh.norm_sq();
    if (q < 1e-30) {
      z = w * (1.0 / s.sep);
    } else {
      householder = true;
      double f = 2.0 * w.dot(wh) / q;
      z = (w - wh * f) * (1.0 / s.sep);
    }
  }
  z[0] *= 2.0;
  for (int i = 1; i < d; ++i) z[i] *= t2;

  double t = z.norm();
  double theta = swap_psi(t, s.eta);
  if (theta == 0.0) return p;  // outside the support ellipsoid: fixed bitwise
  if (s.inverted != inverse) theta = -theta;

  double ct = std::cos(theta), st = std::sin(theta);
  double z0 = ct * z[0] - st * z[1];
  double z1 = st * z[0] + ct * z[1];
  z[0] = z0;
  z[1] = z1;

  z[0] *= 0.5;
  for (int i = 1; i < d; ++i) z[i] /= t2;

  Vec wout(d);
  if (s.axis >= 0) {
    wout[s.axis] = s.axis_sign * z[0] * s.sep;
    int k = 1;
    for (int j = 0; j < d; ++j)
      if (j != s.axis) wout[j] = z[k++] * s.sep;
  } else if (householder) {
    double q = wh.norm_sq();
    double f = 2.0 * z.dot(wh) / q;
    wout = (z - wh * f) * s.sep;
  } else {
    wout = z * s.sep;
  }
  return mid + wout;
}

Vec spin_apply(const SpinData& s, const Vec& p, bool inverse) {
  Vec w = p - s.center;
  double t = w.norm();
  if (t >= s.t0) return p;
  double theta = s.profile.eval(t);
  if (theta == 0.0) return p;
  if (s.inverted != inverse) theta = -theta;
  double a = s.u.dot(w), b = s.v.dot(w);
  double ct = std::cos(theta), st = std::sin(theta);
  double a2 = ct * a - st * b;
  double b2 = st * a + ct * b;
  return p + s.u * (a2 - a) + s.v * (b2 - b);
}

Vec eval_impl(const MapNode* m, Vec p, bool inverse) {
  switch (m->kind) {
    case NodeKind::Identity:
      return p;
    case NodeKind::Affine:
      return affine_apply(std::get<AffineData>(m->data), p, inverse);
    case NodeKind::Spin:
      if (m->support && !m->support->contains(p)) return p;
      return spin_apply(std::get<SpinData>(m->data), p, inverse);
    case NodeKind::Swap:
      if (m->support && !m->support->contains(p)) return p;
      return swap_apply(std::get<SwapData>(m->data), p, inverse);
    case NodeKind::Glued: {
      if (m->support && !m->support->contains(p)) return p;
      const auto& g = std::get<GluedData>(m->data);
      // Region preservation makes the forward and inverse lookups agree.
      int idx = g.locate(p);
      if (idx < 0) return p;
      return eval_impl(g.entries[static_cast<size_t>(idx)].map.get(), p, inverse);
    }
    case NodeKind::Compose: {
      if (m->support && !m->support->contains(p)) return p;
      const auto& c = std::get<ComposeData>(m->data);
      if (!inverse) {
        for (const MapExpr& child : c.children) {
          const MapNode* ch = child.get();
          if (ch->support && !ch->support->contains(p)) continue;
          p = eval_impl(ch, p, false);
        }
      } else {
        for (auto it = c.children.rbegin(); it != c.children.rend(); ++it) {
          const MapNode* ch = it->get();
          if (ch->support && !ch->support->contains(p)) continue;
          p = eval_impl(ch, p, true);
        }
      }
      return p;
    }
  }
  return p;
}

}  // namespace

Vec evaluate(const MapExpr& m, const Vec& p) {
  require(m != nullptr, "evaluate: null map");
  require(p.dim() == m->dim, "evaluate: point dimension mismatch");
  return eval_impl(m.get(), p, false);
}

Vec evaluate_inverse(const MapExpr& m, const Vec& p) {
  require(m != nullptr, "evaluate_inverse: null map");
  require(p.dim() == m->dim, "evaluate_inverse: point dimension mismatch");
  return eval_impl(m.get(), p, true);
}

MapExpr invert(const MapExpr& m) {
  MapNode n;
  n.dim = m->dim;
  n.kind = m->kind;
  n.bound = m->bound.inverted();
  n.support = m->support;
  switch (m->kind) {
    case NodeKind::Identity:
      return m;
    case NodeKind::Affine: {
      const auto& a = std::get<AffineData>(m->data);
      switch (a.kind) {
        case AffineKind::Translation:
          return translation(Vec(m->dim) - a.offset);
        case AffineKind::UniformScale:
          return uniform_scale(m->dim, 1.0 / a.scale);
        case AffineKind::DiagonalScale: {
          Vec d(m->dim);
          for (int i = 0; i < m->dim; ++i) d[i] = 1.0 / a.diag[i];
          return diagonal_scale(d);
        }
        case AffineKind::OrthFrame: {
          std::vector<Vec> rows(static_cast<size_t>(m->dim), Vec(m->dim));
          for (int i = 0; i < m->dim; ++i)
            for (int j = 0; j < m->dim; ++j) rows[static_cast<size_t>(i)][j] = a.rows[static_cast<size_t>(j)][i];
          return orth_frame(std::move(rows));
        }
      }
      return m;
    }
    case NodeKind::Spin: {
      SpinData s = std::get<SpinData>(m->data);
      s.inverted = !s.inverted;
      n.data = std::move(s);
      return make_node(std::move(n));
    }
    case NodeKind::Swap: {
      SwapData s = std::get<SwapData>(m->data);
      s.inverted = !s.inverted;
      n.data = std::move(s);
      return make_node(std::move(n));
    }
    case NodeKind::Glued: {
      const auto& g = std::get<GluedData>(m->data);
      GluedData g2;
      g2.entries.reserve(g.entries.size());
      // Entry maps preserve their regions, so the inverse glues the inverted
      // entries over the same regions.
      for (const GlueEntry& e : g.entries) g2.entries.push_back({e.region, invert(e.map)});
      g2.cell = g.cell;
      g2.grid = g.grid;
      g2.linear = g.linear;
      n.data = std::move(g2);
      return make_node(std::move(n));
    }
    case NodeKind::Compose: {
      const auto& c = std::get<ComposeData>(m->data);
      ComposeData c2;
      c2.children.reserve(c.children.size());
      for (auto it = c.children.rbegin(); it != c.children.rend(); ++it) c2.children.push_back(invert(*it));
      n.data = std::move(c2);
      return make_node(std::move(n));
    }
  }
  return m;
}

}  // namespace bilip
