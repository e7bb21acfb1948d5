#include "bilip/lattice_reduction.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bilip {

void PointMap::validate() const {
  require(dim >= 1 && dim <= kMaxDim, "point map: dimension out of range");
  require(declared_L >= 1.0, "point map: declared constant must be >= 1");
  for (const auto& [s, im] : pairs)
    require(s.dim() == dim && im.dim() == dim && s.finite() && im.finite(), "point map: bad pair");
  const double slack = 1.0 + 1e-9;
  for (size_t i = 0; i < pairs.size(); ++i) {
    for (size_t j = i + 1; j < pairs.size(); ++j) {
      double ds = pairs[i].first.dist(pairs[j].first);
      double di = pairs[i].second.dist(pairs[j].second);
      require(ds > 0, "point map: duplicate sources");
      require(di > 0, "point map: duplicate images");
      require(di <= declared_L * ds * slack && ds <= declared_L * di * slack,
              "point map: pair ratio exceeds the declared bilipschitz constant");
    }
  }
}

// ---------------------------------------------------------------------------
// Net rounding (scale, then swap every point with its nearest lattice point)

RoundNetResult round_net_to_lattice(const SeparatedNet& net) {
  net.validate();
  require(net.dim >= 2, "round_net_to_lattice: dimension must be at least 2");
  const int d = net.dim;
  const double r = net.sep;
  const double sqrt_d = std::sqrt(static_cast<double>(d));

  const bool rescale = r < 3.0 * d;
  const double scale = rescale ? 3.0 * d / r : 1.0;

  SwapFamily fam;
  fam.dim = d;
  PointMap images;
  images.dim = d;
  LatticeSpec unit = LatticeSpec::unit(d);
  std::vector<Vec> lattice_targets;
  for (const Vec& a : net.points) {
    Vec x = a * scale;
    Vec y = nearest_lattice_point(x, unit);
    internal_assert(y.dist(x) <= sqrt_d / 2 + kGeomTol, "nearest lattice point too far");
    SwapSpec s;
    s.x = x;
    s.y = y;
    s.r = (x == y) ? sqrt_d : 0.5 * x.dist(y);
    fam.specs.push_back(s);
    lattice_targets.push_back(y);
    images.pairs.push_back({a, y});
  }
  // The balls B(y_x, sqrt d) around the chosen lattice points must be
  // pairwise disjoint; re-verified exactly.
  for (size_t i = 0; i < lattice_targets.size(); ++i)
    for (size_t j = i + 1; j < lattice_targets.size(); ++j)
      require(lattice_targets[i].dist(lattice_targets[j]) > 2.0 * sqrt_d - kGeomTol,
              "round_net_to_lattice: lattice target balls collide");
  // Distinct net points must land on distinct lattice points.
  {
    std::set<IVec> seen;
    for (const Vec& y : lattice_targets) {
      IVec k(d);
      for (int i = 0; i < d; ++i) k[i] = static_cast<long long>(std::llround(y[i]));
      internal_assert(seen.insert(k).second, "rounding collides two net points");
    }
  }

  MapExpr gamma = simultaneous_swaps(fam);
  MapExpr psi = rescale ? uniform_scale(d, scale) : identity_map(d);
  RoundNetResult out;
  out.phi = compose(d, {psi, gamma});
  out.cert.K = 16.0 * std::max(3.0 * d / r, 1.0);
  out.cert.scale_used = scale;
  out.cert.swap_family = std::move(fam);
  internal_assert(out.phi->bound.bilip_log2() <= std::log2(out.cert.K) + 1e-9,
                  "rounding map exceeds the certified bound");
  // Snap check: every net point must land on its lattice target.
  for (const auto& [a, y] : images.pairs)
    internal_assert(evaluate(out.phi, a).dist(y) <= 1e-9, "net point failed to land on the lattice");
  images.declared_L = std::pow(2.0, out.phi->bound.bilip_log2());
  out.images = std::move(images);
  return out;
}

// ---------------------------------------------------------------------------
// Lattice extension with greedy spot assignment

namespace {
std::vector<IVec> window_lattice(const Box& window) {
  const int d = window.dim();
  std::vector<IVec> pts;
  IVec k(d);
  std::array<long long, kMaxDim> lo{}, hi{};
  for (int i = 0; i < d; ++i) {
    lo[i] = static_cast<long long>(std::ceil(window.lo[i] - kGeomTol));
    hi[i] = static_cast<long long>(std::floor(window.hi[i] + kGeomTol));
    require(lo[i] <= hi[i], "window contains no lattice points on axis " + std::to_string(i));
  }
  auto rec = [&](auto&& self, int axis) -> void {
    if (axis == d) {
      pts.push_back(k);
      return;
    }
    for (long long v = lo[axis]; v <= hi[axis]; ++v) {
      k[axis] = v;
      self(self, axis + 1);
    }
  };
  rec(rec, 0);
  return pts;
}
}  // namespace

ExtendResult extend_to_lattice(const PointMap& f, double lambda, const Box& window) {
  f.validate();
  require(lambda >= 1.0, "extend_to_lattice: lambda must be at least 1");
  require(window.dim() == f.dim, "extend_to_lattice: window dimension mismatch");
  const int d = f.dim;
  const double L = f.declared_L;
  const double sqrt_d = std::sqrt(static_cast<double>(d));
  const double N = 12.0 * lambda * sqrt_d * L;

  std::map<IVec, Vec> fmap;
  std::vector<IVec> ys;
  for (const auto& [s, im] : f.pairs) {
    IVec k(d);
    for (int i = 0; i < d; ++i) {
      k[i] = static_cast<long long>(std::llround(s[i]));
      require(std::abs(s[i] - static_cast<double>(k[i])) <= kGeomTol,
              "extend_to_lattice: source is not an integer lattice point");
    }
    fmap[k] = im;
    ys.push_back(k);
  }

  std::vector<IVec> grid = window_lattice(window);
  ExtendResult out;
  out.N = N;
  out.F.dim = d;

  // Per-cell bookkeeping: spots of f(alpha) + (1/N) Z^d inside the closed
  // 1/(4L) ball, ordered by distance then lexicographically; the center spot
  // is owned by alpha itself.
  struct Cell {
    Vec center;
    std::vector<IVec> spots;  // ordered candidates (offsets in units of 1/N)
    std::set<IVec> used;
  };
  std::map<IVec, Cell> cells;

  LatticeSpec offset_lattice = LatticeSpec::unit(d);  // offsets k with |k| <= N/(4L)
  for (const IVec& p : grid) {
    if (fmap.count(p)) {
      out.F.pairs.push_back({p.to_vec(), fmap[p]});
      continue;
    }
    // alpha_p: nearest source within lambda, ties lexicographic.
    const Vec pv = p.to_vec();
    IVec alpha;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (const IVec& y : ys) {
      double dist = pv.dist(y.to_vec());
      if (dist < best - 1e-12 || (dist < best + 1e-12 && (!found || y < alpha))) {
        best = dist;
        alpha = y;
        found = true;
      }
    }
    require(found && best <= lambda * (1 + 1e-9),
            "extend_to_lattice: a window lattice point is farther than lambda from every source");

    Cell& cell = cells[alpha];
    if (cell.spots.empty()) {
      cell.center = fmap[alpha];
      std::vector<IVec> ks =
          lattice_indices_in_ball(Vec(d), N / (4.0 * L), offset_lattice);
      std::stable_sort(ks.begin(), ks.end(), [](const IVec& a, const IVec& b) {
        double na = a.to_vec().norm_sq(), nb = b.to_vec().norm_sq();
        if (na != nb) return na < nb;
        return a < b;
      });
      cell.spots = std::move(ks);
      cell.used.insert(IVec(d));  // center spot belongs to alpha
    }
    bool placed = false;
    for (const IVec& k : cell.spots) {
      if (cell.used.count(k)) continue;
      cell.used.insert(k);
      Vec img = cell.center;
      for (int i = 0; i < d; ++i) img[i] += static_cast<double>(k[i]) / N;
      out.F.pairs.push_back({pv, img});
      placed = true;
      break;
    }
    internal_assert(placed, "spot exhaustion: the counting argument guarantees enough spots");
  }

  // Exhaustive audit at the stated constants.
  const double lip_bound = 4.0 * lambda * L;
  const double inv_bound = 24.0 * lambda * lambda * L * sqrt_d;
  double lip = 0, inv = 0;
  for (size_t i = 0; i < out.F.pairs.size(); ++i) {
    for (size_t j = i + 1; j < out.F.pairs.size(); ++j) {
      double ds = out.F.pairs[i].first.dist(out.F.pairs[j].first);
      double di = out.F.pairs[i].second.dist(out.F.pairs[j].second);
      internal_assert(di > 0, "extension output is not injective");
      lip = std::max(lip, di / ds);
      inv = std::max(inv, ds / di);
    }
  }
  internal_assert(lip <= lip_bound * (1 + 1e-9), "extension violates Lip(F) <= 4 lambda L");
  internal_assert(inv <= inv_bound * (1 + 1e-9), "extension violates Lip(F^-1) <= 24 lambda^2 L sqrt(d)");
  out.lip = lip;
  out.inv_lip = inv;
  out.F.declared_L = std::max({1.0, lip, inv});
  return out;
}

// ---------------------------------------------------------------------------
// Full reduction pipeline

ReduceResult reduce_general_net(const SeparatedNet& net, const PointMap& f, const ExtensionOracle& oracle,
                                const Box& lattice_window) {
  f.validate();
  require(f.dim == net.dim, "reduce_general_net: dimension mismatch");
  require(f.pairs.size() == net.points.size(), "reduce_general_net: map must cover the net");
  for (size_t i = 0; i < net.points.size(); ++i)
    require(f.pairs[i].first == net.points[i], "reduce_general_net: map sources must equal the net points");

  RoundNetResult rounded = round_net_to_lattice(net);
  ReduceResult out;
  out.K = rounded.cert.K;
  out.lambda = rounded.cert.K * net.cover;
  require(out.lambda >= 1.0, "reduce_general_net: K R < 1; enlarge the net cover");

  // g = f o Phi^{-1} on Y = Phi(net).
  PointMap g;
  g.dim = f.dim;
  double gl = 1.0;
  for (size_t i = 0; i < f.pairs.size(); ++i) {
    g.pairs.push_back({rounded.images.pairs[i].second, f.pairs[i].second});
  }
  for (size_t i = 0; i < g.pairs.size(); ++i)
    for (size_t j = i + 1; j < g.pairs.size(); ++j) {
      double ds = g.pairs[i].first.dist(g.pairs[j].first);
      double di = g.pairs[i].second.dist(g.pairs[j].second);
      gl = std::max({gl, di / ds, ds / di});
    }
  g.declared_L = gl;

  ExtendResult ext = extend_to_lattice(g, out.lambda, lattice_window);
  out.lattice_input = ext.F;

  MapExpr G = oracle(ext.F);
  require(G != nullptr && G->dim == f.dim, "reduce_general_net: oracle returned no usable map");
  for (const auto& [s, im] : ext.F.pairs)
    require(evaluate(G, s).dist(im) <= 1e-9, "reduce_general_net: oracle output fails the interpolation check");

  out.F = compose(f.dim, {rounded.phi, G});
  for (size_t i = 0; i < f.pairs.size(); ++i)
    internal_assert(evaluate(out.F, f.pairs[i].first).dist(f.pairs[i].second) <= 1e-9,
                    "reduction pipeline misses a net point");
  return out;
}

// ---------------------------------------------------------------------------
// Desk-scale transport oracle

namespace {
// Swaps that move `from` to `to` along straight tubes avoiding `obstacles`.
// Falls back to a perpendicular waypoint when the direct segment is blocked.
void transport(std::vector<MapExpr>& steps, std::vector<Vec>& obstacles, size_t self, const Vec& to) {
  Vec from = obstacles[self];
  if (from.dist(to) <= 1e-15) return;
  const int d = from.dim();

  auto clearance = [&](const Vec& a, const Vec& b) {
    double c = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < obstacles.size(); ++i) {
      if (i == self) continue;
      c = std::min(c, dist_to_segment(obstacles[i], a, b));
    }
    return c;
  };
  auto hop = [&](const Vec& a, const Vec& b, double clear) {
    SwapSpec s;
    s.x = a;
    s.y = b;
    s.r = std::min(0.45 * clear, 0.5 * a.dist(b));
    steps.push_back(swap_map(s));
  };

  double c = clearance(from, to);
  if (c > 1e-6) {
    hop(from, to, c);
  } else {
    // Detour through a waypoint perpendicular to the segment.
    Vec mid = (from + to) * 0.5;
    Vec dir = to - from;
    double len = dir.norm();
    Vec perp(d);
    bool ok = false;
    for (double mag = std::max(len, 1.0); !ok && mag < 1e6; mag *= 1.7) {
      for (int axis = 0; axis < d && !ok; ++axis) {
        for (double sign : {1.0, -1.0}) {
          Vec w = mid;
          w[axis] += sign * mag;
          if (clearance(from, w) > 1e-6 && clearance(w, to) > 1e-6 && w.dist(from) > 1e-9 &&
              w.dist(to) > 1e-9) {
            perp = w;
            ok = true;
            break;
          }
        }
      }
    }
    require(ok, "transport oracle: no clear detour found (points in special position)");
    double c1 = clearance(from, perp);
    hop(from, perp, c1);
    obstacles[self] = perp;
    double c2 = clearance(perp, to);
    hop(perp, to, c2);
  }
  obstacles[self] = to;
}
}  // namespace

MapExpr transport_interpolator(const PointMap& f) {
  f.validate();
  require(f.dim >= 2, "transport oracle: dimension must be at least 2");
  const int d = f.dim;
  std::vector<Vec> pos;
  std::vector<Vec> targets;
  for (const auto& [s, im] : f.pairs) {
    pos.push_back(s);
    targets.push_back(im);
  }
  std::vector<MapExpr> steps;

  // Parking row well below everything, used to break occupancy cycles.
  double low = 0, span = 1;
  for (const auto& [s, im] : f.pairs)
    for (int i = 0; i < d; ++i) {
      low = std::min({low, s[i], im[i]});
      span = std::max({span, std::abs(s[i]), std::abs(im[i])});
    }
  double park_y = low - 4.0 * span - 10.0;
  int parked = 0;

  for (size_t i = 0; i < pos.size(); ++i) {
    if (pos[i].dist(targets[i]) <= 1e-15) continue;
    // If someone sits on our target, park them first.
    for (size_t j = 0; j < pos.size(); ++j) {
      if (j == i) continue;
      if (pos[j].dist(targets[i]) <= 1e-9) {
        Vec park(d);
        park[0] = static_cast<double>(++parked) * 3.0;
        park[d - 1] = park_y;
        transport(steps, pos, j, park);
      }
    }
    transport(steps, pos, i, targets[i]);
  }
  if (steps.empty()) return identity_map(d);
  return compose(d, std::move(steps));
}

}  // namespace bilip
