#include "bilip/threading.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bilip/swaps.hpp"

namespace bilip {

void LayeredPointMap::validate() const {
  require(dim >= 2 && dim <= kMaxDim, "layered map: ambient dimension out of range");
  require(H >= 1, "layered map: H must be at least 1");
  require(L >= 1.0, "layered map: L must be at least 1");
  require(static_cast<int>(layers.size()) == H, "layered map: need exactly H layers");
  require(window.dim() == dim - 1, "layered map: window must be horizontal");

  // Designated pairs plus boundary anchors form the finite audit set for the
  // L-bilipschitz hypothesis; boundary points are fixed by convention.
  std::vector<std::pair<Vec, Vec>> audit;
  std::set<IVec> seen_sources;
  for (int m = 1; m <= H; ++m) {
    for (const auto& [x, img] : layers[static_cast<size_t>(m - 1)]) {
      require(x.dim() == dim - 1, "layered map: source dimension mismatch");
      require(img.dim() == dim && img.finite(), "layered map: bad image point");
      require(window.contains(x.to_vec(), kGeomTol), "layered map: source outside the window");
      IVec key(dim);
      for (int i = 0; i + 1 < dim; ++i) key[i] = x[i];
      key[dim - 1] = m;
      require(seen_sources.insert(key).second, "layered map: duplicate source");
      require(img[dim - 1] >= 0.5 - kGeomTol && img[dim - 1] <= H + 0.5 + kGeomTol,
              "layered map: image outside the closed slab");
      Vec src(dim);
      for (int i = 0; i + 1 < dim; ++i) src[i] = static_cast<double>(x[i]);
      src[dim - 1] = static_cast<double>(m);
      audit.push_back({src, img});
      for (double h : {0.5, H + 0.5}) {
        Vec b = src;
        b[dim - 1] = h;
        audit.push_back({b, b});
      }
    }
  }
  const double slack = 1.0 + 1e-9;
  for (size_t i = 0; i < audit.size(); ++i) {
    for (size_t j = i + 1; j < audit.size(); ++j) {
      double ds = audit[i].first.dist(audit[j].first);
      double di = audit[i].second.dist(audit[j].second);
      if (ds <= 0) continue;
      require(di > 0, "layered map: two audit points share an image");
      require(di <= L * ds * slack && ds <= L * di * slack,
              "layered map: audit set violates the declared bilipschitz constant");
    }
  }
}

// ---------------------------------------------------------------------------
// Injective rounding

InjRoundResult inj_round(const std::vector<std::vector<Vec>>& layers, double s, long long N, int dim) {
  require(!layers.empty(), "inj_round: no layers");
  const int H = static_cast<int>(layers.size());
  const int d = dim;
  require(d >= 2 && d <= kMaxDim, "inj_round: ambient dimension out of range");
  require(s > 0 && s <= 0.25, "inj_round: need 0 < s <= 1/4");
  const double sqrt_d = std::sqrt(static_cast<double>(d));
  require(static_cast<double>(N) >=
              std::pow(2.0 * sqrt_d / s, 3.0) * std::pow(static_cast<double>(H), 1.0 / (d - 1)) - 1e-6,
          "inj_round: N below the required lower bound");

  // Capacity: available fine-lattice spots per cell must dominate the cell
  // population bound.
  {
    double lower = 0.5 * std::pow(static_cast<double>(N) * s * s / (2.0 * sqrt_d), d - 1);
    double upper = std::pow(2.0, d - 1) * std::sqrt(std::pow(static_cast<double>(d), d)) * H / s;
    internal_assert(lower >= upper, "inj_round: capacity inequality fails for the chosen N");
  }

  struct Entry {
    int layer = 0;  // 1-based
    int index = 0;  // position within the layer
    Vec p;
  };
  std::vector<Entry> all;
  for (int m = 1; m <= H; ++m)
    for (size_t i = 0; i < layers[static_cast<size_t>(m - 1)].size(); ++i) {
      const Vec& p = layers[static_cast<size_t>(m - 1)][i];
      require(p.dim() == d, "inj_round: layer point dimension mismatch");
      require(p[d - 1] >= 0.5 + s - kGeomTol && p[d - 1] <= H + 0.5 - s + kGeomTol,
              "inj_round: layer point outside the shrunken slab");
      all.push_back({m, static_cast<int>(i), p});
    }
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      require(all[i].p.dist(all[j].p) >= s - kGeomTol, "inj_round: layer union is not s-separated");

  // Horizontal cells of side s^2 / sqrt(d-1); each point parks on an unused
  // fine-lattice spot of its own cell (never an integer point).
  const double side = s * s / std::sqrt(static_cast<double>(d - 1));
  std::map<IVec, std::vector<int>> cells;
  for (size_t i = 0; i < all.size(); ++i) {
    IVec z(d - 1);
    for (int a = 0; a + 1 < d; ++a) z[a] = static_cast<long long>(std::floor(all[i].p[a] / side));
    cells[z].push_back(static_cast<int>(i));
  }

  std::vector<std::vector<IVec>> spots(static_cast<size_t>(H));
  for (int m = 1; m <= H; ++m)
    spots[static_cast<size_t>(m - 1)].resize(layers[static_cast<size_t>(m - 1)].size(), IVec(d - 1));

  SwapFamily xi_family;
  xi_family.dim = d;
  SwapFamily omega_family;
  omega_family.dim = d;

  for (auto& [z, members] : cells) {
    // Deterministic order: by coordinates of the points.
    std::sort(members.begin(), members.end(), [&](int a, int b) {
      for (int i = 0; i < d; ++i) {
        if (all[static_cast<size_t>(a)].p[i] != all[static_cast<size_t>(b)].p[i])
          return all[static_cast<size_t>(a)].p[i] < all[static_cast<size_t>(b)].p[i];
      }
      return a < b;
    });
    // Lex-ordered fine-lattice indices inside the half-open cell, skipping
    // integer lattice points.
    std::vector<IVec> cell_spots;
    {
      std::array<long long, kMaxDim> klo{}, khi{};
      for (int a = 0; a + 1 < d; ++a) {
        double lo = static_cast<double>(z[a]) * side;
        double hi = lo + side;
        klo[a] = static_cast<long long>(std::ceil(lo * static_cast<double>(N) - 1e-9));
        khi[a] = static_cast<long long>(std::ceil(hi * static_cast<double>(N) - 1e-9)) - 1;
      }
      IVec k(d - 1);
      auto rec = [&](auto&& self, int axis) -> void {
        if (axis == d - 1) {
          for (int a = 0; a + 1 < d; ++a)
            if (k[a] % N != 0) {
              cell_spots.push_back(k);
              return;
            }
          return;  // all coordinates divisible by N: integer point, skip
        }
        for (long long v = klo[axis]; v <= khi[axis]; ++v) {
          k[axis] = v;
          self(self, axis + 1);
        }
      };
      rec(rec, 0);
    }
    internal_assert(cell_spots.size() >= members.size(), "inj_round: cell ran out of parking spots");

    for (size_t i = 0; i < members.size(); ++i) {
      const Entry& e = all[static_cast<size_t>(members[i])];
      const IVec& k = cell_spots[i];
      spots[static_cast<size_t>(e.layer - 1)][static_cast<size_t>(e.index)] = k;

      Vec y(d);
      for (int a = 0; a + 1 < d; ++a) y[a] = static_cast<double>(k[a]) / static_cast<double>(N);
      y[d - 1] = e.p[d - 1];

      SwapSpec hs;  // horizontal park
      hs.x = e.p;
      hs.y = y;
      double hd = e.p.dist(y);
      internal_assert(hd <= s * s + kGeomTol, "inj_round: parking spot left the cell");
      hs.r = hd == 0 ? 0.5 * s * s : 0.5 * hd;
      xi_family.specs.push_back(hs);

      SwapSpec vs;  // vertical drop to integer height
      vs.x = y;
      vs.y = y;
      vs.y[d - 1] = static_cast<double>(e.layer);
      double vd = std::abs(y[d - 1] - vs.y[d - 1]);
      vs.r = vd == 0 ? 0.5 / static_cast<double>(N)
                     : std::min(0.5 / static_cast<double>(N), 0.5 * vd);
      omega_family.specs.push_back(vs);
    }
  }

  InjRoundResult out;
  out.N = N;
  out.spots = std::move(spots);
  MapExpr xi = simultaneous_swaps(xi_family);
  MapExpr omega = simultaneous_swaps(omega_family);
  out.psi = compose(d, {xi, omega});
  out.cert_log2 = 8.0 + 2.0 * std::log2(static_cast<double>(N)) + 2.0 * std::log2(static_cast<double>(H));
  internal_assert(out.psi->bound.bilip_log2() <= out.cert_log2 + 1e-9,
                  "injective rounding exceeds its certified bound");
  return out;
}

// ---------------------------------------------------------------------------
// Threading

ThreadResult thread_extension(const LayeredPointMap& data) {
  data.validate();
  const int d = data.dim;
  const int H = data.H;
  const double L = data.L;
  const double s = 1.0 / (4.0 * L);
  const double sqrt_d = std::sqrt(static_cast<double>(d));

  // Hypothesis propagation: the L-bilipschitz data with identity boundary
  // values keeps the image union (1/L)-separated and at distance >= 2s from
  // both hyperplanes; validated here, then re-checked by inj_round at s.
  std::vector<std::vector<Vec>> layer_points(static_cast<size_t>(H));
  for (int m = 1; m <= H; ++m)
    for (const auto& [x, img] : data.layers[static_cast<size_t>(m - 1)]) {
      (void)x;
      require(img[d - 1] >= 0.5 + 2 * s - kGeomTol && img[d - 1] <= H + 0.5 - 2 * s + kGeomTol,
              "thread: image too close to a boundary hyperplane");
      layer_points[static_cast<size_t>(m - 1)].push_back(img);
    }
  {
    std::vector<Vec> flat;
    for (const auto& lp : layer_points) flat.insert(flat.end(), lp.begin(), lp.end());
    for (size_t i = 0; i < flat.size(); ++i)
      for (size_t j = i + 1; j < flat.size(); ++j)
        require(flat[i].dist(flat[j]) >= 1.0 / L - kGeomTol, "thread: image union is not (1/L)-separated");
  }

  const long long N =
      static_cast<long long>(std::floor(2.0 * std::pow(2.0 * sqrt_d * 4.0 * L, 3.0) *
                                        std::pow(static_cast<double>(H), 1.0 / (d - 1))));
  InjRoundResult ir = inj_round(layer_points, s, N, d);

  const long long T_formula = static_cast<long long>(
      std::floor(512.0 * L * static_cast<double>(N) * static_cast<double>(N) *
                 std::pow(static_cast<double>(H), 3.0)));

  ThreadResult out;
  out.N = N;
  out.T_formula = T_formula;

  // sigma_m: involution exchanging N x with the spot of f(x, m).
  std::vector<LatticePerm> sigmas(static_cast<size_t>(H));
  long long t_used = 1;
  for (int m = 1; m <= H; ++m) {
    LatticePerm& sg = sigmas[static_cast<size_t>(m - 1)];
    sg.dim = d - 1;
    sg.N = N;
    const auto& layer = data.layers[static_cast<size_t>(m - 1)];
    for (size_t i = 0; i < layer.size(); ++i) {
      IVec u(d - 1);
      for (int a = 0; a + 1 < d; ++a) u[a] = N * layer[i].first[a];
      const IVec& v = ir.spots[static_cast<size_t>(m - 1)][i];
      internal_assert(u != v, "thread: spot collides with a scaled grid point");
      sg.pairs.push_back({u, v});
      sg.pairs.push_back({v, u});
      double disp = (v - u).norm() / static_cast<double>(N);
      internal_assert(disp <= static_cast<double>(T_formula),
                      "thread: permutation displacement exceeds the derived bound");
      t_used = std::max(t_used, static_cast<long long>(std::ceil(disp - 1e-12)));
    }
  }
  out.T_used = t_used;

  std::vector<GlueEntry> slab_entries;
  for (int m = 1; m <= H; ++m) {
    const LatticePerm& sg = sigmas[static_cast<size_t>(m - 1)];
    if (sg.pairs.empty()) continue;
    UpsilonResult up = build_upsilon(sg, t_used, static_cast<double>(m));
    slab_entries.push_back({Region::axis_slab(d, d - 1, m - 0.5, m + 0.5), up.map});
  }
  MapExpr upsilon = slab_entries.empty() ? identity_map(d) : glue(std::move(slab_entries), d);

  out.map = compose(d, {invert(upsilon), invert(ir.psi)});
  out.cert_log2 = std::log2(std::pow(2.0, 38.0) * std::pow(static_cast<double>(d), 4.5) * std::pow(L, 9.0) *
                            std::pow(static_cast<double>(H), 2.0 + 3.0 / (d - 1))) +
                  std::pow(3.0, d - 1) * 8.0 * d *
                      (std::pow(2.0, 42.0) * std::pow(static_cast<double>(d), 4.5) * std::pow(L, 10.0) *
                       std::pow(static_cast<double>(H), 3.0 + 3.0 / (d - 1)));
  internal_assert(out.map->bound.bilip_log2() <= out.cert_log2, "thread: carried bound exceeds the theorem bound");

  for (int m = 1; m <= H; ++m) {
    for (const auto& [x, img] : data.layers[static_cast<size_t>(m - 1)]) {
      Vec src(d);
      for (int a = 0; a + 1 < d; ++a) src[a] = static_cast<double>(x[a]);
      src[d - 1] = static_cast<double>(m);
      out.designated.push_back({src, img});
    }
  }
  for (const auto& [src, img] : out.designated)
    internal_assert(evaluate(out.map, src).dist(img) <= 1e-9, "thread: designated interpolation failed");
  return out;
}

// ---------------------------------------------------------------------------
// Slab gluing

GlueSlabsResult glue_slabs(const SlabSystem& system) {
  require(system.dim >= 2 && system.dim <= kMaxDim, "glue_slabs: dimension out of range");
  require(system.T >= 1, "glue_slabs: period must be a positive integer");
  require(system.G != nullptr && system.G->dim == system.dim, "glue_slabs: missing normalizing map");
  require(system.M1 >= 1.0 && system.M2 >= 1.0, "glue_slabs: M1 and M2 must be at least 1");
  const int d = system.dim;
  const long long T = system.T;

  GlueSlabsResult out;
  std::vector<GlueEntry> entries;
  std::set<long long> seen;
  for (const SlabData& slab : system.slabs) {
    require(seen.insert(slab.k).second, "glue_slabs: duplicate slab index");
    require(static_cast<long long>(slab.layers.size()) == T, "glue_slabs: slab needs exactly T layers");
    const double base = static_cast<double>((slab.k - 1) * T);

    LayeredPointMap local;
    local.dim = d;
    local.H = static_cast<int>(T);
    local.L = system.M1 * system.M2;
    local.window = slab.window;
    local.layers.resize(static_cast<size_t>(T));
    for (long long j = 1; j <= T; ++j) {
      for (const auto& [x, img] : slab.layers[static_cast<size_t>(j - 1)]) {
        Vec q = evaluate_inverse(system.G, img);
        require(q[d - 1] >= base + 0.5 - kGeomTol && q[d - 1] <= base + T + 0.5 + kGeomTol,
                "glue_slabs: containment violated in slab " + std::to_string(slab.k));
        Vec q_local = q;
        q_local[d - 1] -= base;
        local.layers[static_cast<size_t>(j - 1)].push_back({x, q_local});
        Vec src(d);
        for (int a = 0; a + 1 < d; ++a) src[a] = static_cast<double>(x[a]);
        src[d - 1] = base + static_cast<double>(j);
        out.designated.push_back({src, img});
      }
    }
    ThreadResult tk = thread_extension(local);

    Vec shift(d);
    shift[d - 1] = base;
    MapExpr fk = compose(d, {translation(Vec(d) - shift), tk.map, translation(shift)});
    entries.push_back({Region::axis_slab(d, d - 1, base + 0.5, base + T + 0.5), fk});
  }

  MapExpr phi = entries.empty() ? identity_map(d) : glue(std::move(entries), d);
  out.map = compose(d, {phi, system.G});

  const double m12 = system.M1 * system.M2;
  out.cert_log2 = (std::pow(3.0, d - 1) + 1.0) * 8.0 * d *
                  (std::pow(2.0, 42.0) * std::pow(static_cast<double>(d), 4.5) * std::pow(m12, 10.0) *
                   std::pow(static_cast<double>(T), 3.0 + 3.0 / (d - 1)));
  internal_assert(out.map->bound.bilip_log2() <= out.cert_log2,
                  "glue_slabs: carried bound exceeds the theorem bound");

  for (const auto& [src, img] : out.designated)
    internal_assert(evaluate(out.map, src).dist(img) <= 1e-9, "glue_slabs: designated interpolation failed");
  return out;
}

}  // namespace bilip
