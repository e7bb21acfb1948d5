// Acceptance suite: one numbered check per stated criterion, each printing a
// PASS/FAIL line with its runtime. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>

#include "bilip/lattice_reduction.hpp"
#include "bilip/rng.hpp"
#include "bilip/swaps.hpp"
#include "bilip/threading.hpp"
#include "bilip/verify.hpp"

using namespace bilip;

namespace {

int g_failures = 0;

void run_criterion(int id, const std::string& label, double time_limit_s,
                   const std::function<std::string()>& body) {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  try {
    detail = body();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > time_limit_s) {
    ok = false;
    detail += " [runtime limit exceeded]";
  }
  if (!ok) ++g_failures;
  std::printf("%s  criterion %2d: %s (%.1f s / %.0f s) %s\n", ok ? "PASS" : "FAIL", id, label.c_str(), secs,
              time_limit_s, detail.c_str());
  std::fflush(stdout);
}

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool cond, const std::string& msg) {
  if (!cond) throw Failure(msg);
}

SwapSpec random_swap_spec(Rng& rng, int d) {
  SwapSpec s;
  s.x = Vec(d);
  for (int i = 0; i < d; ++i) s.x[i] = rng.uniform(-5, 5);
  Vec dir = rng.unit_vec(d);
  double len = rng.uniform(0.2, 3.0);
  s.y = s.x + dir * len;
  s.r = rng.uniform(0.05, 0.5) * len;
  return s;
}

// --------------------------------------------------------------------------
// 1. Swap exactness and bound

std::string criterion1() {
  Rng rng(101);
  int outside_checked = 0;
  for (int it = 0; it < 1000; ++it) {
    int d = 2 + it % 3;
    SwapSpec s = random_swap_spec(rng, d);
    MapExpr tau = swap_map(s);
    expect(evaluate(tau, s.x).dist(s.y) <= 1e-9, "tau(x) != y");
    expect(evaluate(tau, s.y).dist(s.x) <= 1e-9, "tau(y) != x");

    // 10 points outside the tube per spec (10^4 total), fixed to 1e-12.
    Box sup = *tau->support;
    Box pad = sup.inflated(2.0);
    int found = 0;
    while (found < 10) {
      Vec p = rng.in_box(pad);
      if (dist_to_segment(p, s.x, s.y) <= s.r) continue;
      ++found;
      ++outside_checked;
      expect(evaluate(tau, p).dist(p) <= 1e-12, "outside point moved");
    }

    double bound = std::log2(s.bilip_bound()) + std::log2(1 + 1e-6);
    for (int i = 0; i < 20; ++i) {
      Vec p = rng.in_box(pad), q = rng.in_box(pad);
      if (p.dist(q) < 1e-9) continue;
      double r = std::log2(evaluate(tau, p).dist(evaluate(tau, q))) - std::log2(p.dist(q));
      expect(r <= bound && -r <= bound, "sampled distortion above 4|y-x|^2/r^2");
    }
  }
  return "1000 specs across d=2,3,4; " + std::to_string(outside_checked) + " outside points fixed";
}

// --------------------------------------------------------------------------
// 2. Simultaneous swaps

std::string criterion2() {
  Rng rng(102);
  SwapFamily fam;
  fam.dim = 2;
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 25; ++j) {
      // One swap per 2x2 cell, kept 0.05 away from the cell walls.
      for (int attempt = 0;; ++attempt) {
        SwapSpec s;
        double len = rng.uniform(0.3, 0.9);
        Vec dir = rng.unit_vec(2);
        s.x = Vec{2.0 * i + rng.uniform(0.5, 1.5), 2.0 * j + rng.uniform(0.5, 1.5)};
        s.y = s.x + dir * len;
        s.r = rng.uniform(0.1, 0.5) * len;
        Box cell(Vec{2.0 * i + 0.05, 2.0 * j + 0.05}, Vec{2.0 * i + 1.95, 2.0 * j + 1.95});
        Box bb(Vec{std::min(s.x[0], s.y[0]) - s.r, std::min(s.x[1], s.y[1]) - s.r},
               Vec{std::max(s.x[0], s.y[0]) + s.r, std::max(s.x[1], s.y[1]) + s.r});
        if (cell.contains(bb.lo) && cell.contains(bb.hi)) {
          fam.specs.push_back(s);
          break;
        }
        expect(attempt < 500, "could not place a cell swap");
      }
    }
  }
  expect(fam.specs.size() == 1000, "family size");
  MapExpr gamma = simultaneous_swaps(fam);
  for (const SwapSpec& s : fam.specs) {
    expect(evaluate(gamma, s.x).dist(s.y) <= 1e-9, "family endpoint not swapped");
    expect(evaluate(gamma, s.y).dist(s.x) <= 1e-9, "family endpoint not swapped");
  }
  double want = std::log2(fam.bilip_bound());
  expect(std::abs(gamma->bound.bilip_log2() - want) <= 1e-12, "max-rule bound mismatch");
  AuditReport rep = sampled_bilip(gamma, Box(Vec{-1, -1}, Vec{81, 51}), 10000, 202);
  expect(rep.bound_ok, "sampled distortion above the max-rule bound");
  return "1000 disjoint swaps; sampled log2 distortion " + std::to_string(rep.sampled_expansion_log2) +
         " <= " + std::to_string(want);
}

// --------------------------------------------------------------------------
// 3. Net rounding

std::string criterion3() {
  Rng rng(103);
  double worst_margin = 1e300;
  for (int it = 0; it < 100; ++it) {
    int d = it % 2 == 0 ? 2 : 3;
    double sep = rng.uniform(0.8, 2.5);
    int target = d == 2 ? static_cast<int>(rng.uniform_int(50, 500)) : static_cast<int>(rng.uniform_int(50, 160));
    double side = sep * std::pow(static_cast<double>(target), 1.0 / d) * 1.6;
    Vec lo(d), hi(d);
    for (int i = 0; i < d; ++i) hi[i] = side;
    SeparatedNet net;
    net.dim = d;
    net.sep = sep;
    net.window = Box(lo, hi);
    int failures = 0;
    while (static_cast<int>(net.points.size()) < target && failures < 400) {
      Vec cand = rng.in_box(net.window);
      bool ok = true;
      for (const Vec& p : net.points)
        if (p.dist(cand) < sep * 1.0000001) {
          ok = false;
          break;
        }
      if (ok) {
        net.points.push_back(cand);
        failures = 0;
      } else {
        ++failures;
      }
    }
    expect(net.points.size() >= 50, "net generation fell short");
    net.cover = side;

    RoundNetResult res = round_net_to_lattice(net);
    LatticeSpec unit = LatticeSpec::unit(d);
    for (const Vec& p : net.points) {
      Vec img = evaluate(res.phi, p);
      expect(img.dist(nearest_lattice_point(img, unit)) <= 1e-9, "image not integral");
    }
    double cert = std::log2(res.cert.K) + std::log2(1 + 1e-6);
    Box region = net.window.inflated(2.0);
    AuditReport rep = sampled_bilip(res.phi, region, 2000, 300 + static_cast<uint64_t>(it));
    expect(rep.sampled_expansion_log2 <= cert && rep.sampled_contraction_log2 <= cert,
           "sampled distortion above 16 max(3d/r, 1)");
    worst_margin = std::min(worst_margin, cert - std::max(rep.sampled_expansion_log2, rep.sampled_contraction_log2));
  }
  return "100 nets (d=2,3; 50-500 pts); min log2 margin to K " + std::to_string(worst_margin);
}

// --------------------------------------------------------------------------
// 4. Lattice extension

std::string criterion4() {
  Rng rng(104);
  for (int it = 0; it < 50; ++it) {
    int d = it % 5 == 4 ? 3 : 2;
    long long side = d == 2 ? 6 : 4;
    double lambda = d == 2 ? std::sqrt(2.0) : std::sqrt(3.0);
    // Y: the even sub-lattice (guaranteeing the lambda-cover) plus extras.
    std::vector<IVec> ys;
    IVec k(d);
    auto rec = [&](auto&& self, int axis) -> void {
      if (axis == d) {
        bool even = true;
        for (int i = 0; i < d; ++i) even &= k[i] % 2 == 0;
        if (even || rng.uniform() < 0.15) ys.push_back(k);
        return;
      }
      for (long long v = 0; v <= side; ++v) {
        k[axis] = v;
        self(self, axis + 1);
      }
    };
    rec(rec, 0);

    Vec shift(d);
    for (int i = 0; i < d; ++i) shift[i] = rng.uniform(-3, 3);
    PointMap f;
    f.dim = d;
    double worst = 1.0;
    for (const IVec& y : ys) {
      Vec img = y.to_vec() + shift;
      for (int i = 0; i < d; ++i) img[i] += rng.uniform(-0.15, 0.15);
      f.pairs.push_back({y.to_vec(), img});
    }
    for (size_t i = 0; i < f.pairs.size(); ++i)
      for (size_t j = i + 1; j < f.pairs.size(); ++j) {
        double ds = f.pairs[i].first.dist(f.pairs[j].first);
        double di = f.pairs[i].second.dist(f.pairs[j].second);
        worst = std::max({worst, di / ds, ds / di});
      }
    f.declared_L = worst * 1.000001;

    Vec lo(d), hi(d);
    for (int i = 0; i < d; ++i) hi[i] = static_cast<double>(side);
    ExtendResult res = extend_to_lattice(f, lambda, Box(lo, hi));

    // Re-run the audit here at the stated constants.
    double lip_bound = 4.0 * lambda * f.declared_L;
    double inv_bound = 24.0 * lambda * lambda * f.declared_L * std::sqrt(static_cast<double>(d));
    for (size_t i = 0; i < res.F.pairs.size(); ++i)
      for (size_t j = i + 1; j < res.F.pairs.size(); ++j) {
        double ds = res.F.pairs[i].first.dist(res.F.pairs[j].first);
        double di = res.F.pairs[i].second.dist(res.F.pairs[j].second);
        expect(di > 0, "extension not injective");
        expect(di <= lip_bound * ds * (1 + 1e-9), "Lip(F) bound violated");
        expect(ds <= inv_bound * di * (1 + 1e-9), "Lip(F^-1) bound violated");
      }
  }
  return "50 instances (d=2,3), exhaustive pairwise audit at 4 lambda L and 24 lambda^2 L sqrt(d)";
}

// --------------------------------------------------------------------------
// 5. Routing

std::string criterion5() {
  std::string why;
  // All 24 permutations of [4].
  std::array<long long, 4> vals = {1, 2, 3, 4};
  do {
    std::vector<std::pair<long long, long long>> moved;
    LatticePerm perm;
    perm.dim = 1;
    perm.N = 1;
    for (long long i = 1; i <= 4; ++i) {
      moved.push_back({i, vals[static_cast<size_t>(i - 1)]});
      if (i != vals[static_cast<size_t>(i - 1)]) perm.pairs.push_back({IVec{i}, IVec{vals[static_cast<size_t>(i - 1)]}});
    }
    RoutingSchedule sched = route_path(4, moved);
    expect(sched.rounds.size() <= 4, "route_path exceeded S rounds");
    expect(schedule_oracle(perm, sched, &why), "oracle: " + why);
  } while (std::next_permutation(vals.begin(), vals.end()));

  Rng rng(105);
  auto random_perm = [&](int l, long long S) {
    std::vector<IVec> pts;
    IVec k(l);
    auto rec = [&](auto&& self, int axis) -> void {
      if (axis == l) {
        pts.push_back(k);
        return;
      }
      for (long long v = 1; v <= S; ++v) {
        k[axis] = v;
        self(self, axis + 1);
      }
    };
    rec(rec, 0);
    std::vector<size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0u);
    for (size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[static_cast<size_t>(rng.uniform_int(0, static_cast<long long>(i) - 1))]);
    std::vector<std::pair<IVec, IVec>> moved;
    for (size_t i = 0; i < pts.size(); ++i) moved.push_back({pts[i], pts[idx[i]]});
    return moved;
  };

  for (int it = 0; it < 500; ++it) {
    auto moved = random_perm(2, 3);
    RoutingSchedule sched = route_grid(2, 3, moved);
    expect(sched.rounds.size() <= 9, "route_grid exceeded 9 rounds on [3]^2");
    LatticePerm perm;
    perm.dim = 2;
    perm.N = 1;
    for (const auto& [s, d] : moved)
      if (s != d) perm.pairs.push_back({s, d});
    expect(schedule_oracle(perm, sched, &why), "oracle: " + why);
  }
  for (int it = 0; it < 50; ++it) {
    auto moved = random_perm(3, 2);
    RoutingSchedule sched = route_grid(3, 2, moved);
    expect(sched.rounds.size() <= 10, "route_grid exceeded 10 rounds on [2]^3");
    LatticePerm perm;
    perm.dim = 3;
    perm.N = 1;
    for (const auto& [s, d] : moved)
      if (s != d) perm.pairs.push_back({s, d});
    expect(schedule_oracle(perm, sched, &why), "oracle: " + why);
  }
  return "24 of [4], 500 of [3]^2, 50 of [2]^3; bounds 4 / 9 / 10 rounds";
}

// --------------------------------------------------------------------------
// 6. Tile decomposition

std::string criterion6() {
  Rng rng(106);
  for (int it = 0; it < 200; ++it) {
    int l = 1 + static_cast<int>(rng.uniform_int(0, 1));
    long long T = rng.uniform_int(1, 3);
    std::vector<IVec> pts;
    IVec k(l);
    auto rec = [&](auto&& self, int axis) -> void {
      if (axis == l) {
        pts.push_back(k);
        return;
      }
      for (long long v = -3; v <= 5; ++v) {
        k[axis] = v;
        self(self, axis + 1);
      }
    };
    rec(rec, 0);
    std::vector<IVec> images = pts;
    for (int pass = 0; pass < 60; ++pass) {
      size_t i = static_cast<size_t>(rng.uniform_int(0, static_cast<long long>(pts.size()) - 1));
      size_t j = static_cast<size_t>(rng.uniform_int(0, static_cast<long long>(pts.size()) - 1));
      if ((images[j] - pts[i]).norm() <= static_cast<double>(T) &&
          (images[i] - pts[j]).norm() <= static_cast<double>(T))
        std::swap(images[i], images[j]);
    }
    LatticePerm phi;
    phi.dim = l;
    phi.N = 1;
    for (size_t i = 0; i < pts.size(); ++i)
      if (pts[i] != images[i]) phi.pairs.push_back({pts[i], images[i]});

    // The capacity inequality is asserted internally on every touched tile.
    TileDecomposition td = tile_decompose(phi, T);

    // Composition over the half lattice equals phi on Z^l.
    for (size_t i = 0; i < pts.size(); ++i) {
      IVec ds(l), dd(l);
      for (int a = 0; a < l; ++a) {
        ds[a] = 2 * pts[i][a];
        dd[a] = 2 * images[i][a];
      }
      expect(td.apply(ds) == dd, "decomposition does not compose to phi");
    }
    // Tile-locality per piece, re-verified externally.
    for (size_t kk = 0; kk < td.pieces.size(); ++kk) {
      const IVec& p = td.offsets[kk];
      for (const auto& [a, b] : td.pieces[kk].pairs) {
        for (int axis = 0; axis < l; ++axis) {
          long long wa = floor_div(a[axis] - 2 * T * p[axis] + 2 * T, 6 * T);
          long long wb = floor_div(b[axis] - 2 * T * p[axis] + 2 * T, 6 * T);
          expect(wa == wb, "piece crosses its coarse tile");
        }
      }
    }
  }
  return "200 permutations, l in {1,2}, T in {1,2,3}; capacity asserted on every touched tile";
}

// --------------------------------------------------------------------------
// 7. Slab realizer

std::string criterion7() {
  Rng rng(107);
  std::string detail;
  for (int d : {2, 3}) {
    for (long long N : {1ll, 2ll}) {
      const long long T = 2;
      const int l = d - 1;
      // Random involution of (1/N) Z^(d-1): disjoint pairs within distance T.
      LatticePerm sigma;
      sigma.dim = l;
      sigma.N = N;
      std::set<IVec> used;
      int pairs_target = d == 2 ? 12 : 10;  // <= 25 support points
      for (int tries = 0; tries < 400 && static_cast<int>(sigma.pairs.size() / 2) < pairs_target; ++tries) {
        IVec a(l), b(l);
        for (int i = 0; i < l; ++i) a[i] = rng.uniform_int(-4 * N, 4 * N);
        double norm = 0;
        for (int i = 0; i < l; ++i) {
          b[i] = a[i] + rng.uniform_int(-T * N, T * N);
          norm += static_cast<double>(b[i] - a[i]) * static_cast<double>(b[i] - a[i]);
        }
        if (a == b || std::sqrt(norm) > static_cast<double>(T * N)) continue;
        if (used.count(a) || used.count(b)) continue;
        used.insert(a);
        used.insert(b);
        sigma.pairs.push_back({a, b});
        sigma.pairs.push_back({b, a});
      }
      double m = rng.uniform(-2, 2);
      UpsilonResult res = build_upsilon(sigma, T, m);

      for (const auto& [src, img] : res.designated)
        expect(evaluate(res.map, src).dist(img) <= 1e-9, "designated point missed");

      // Slab boundaries fixed at 10^4 sampled points.
      for (int i = 0; i < 10000; ++i) {
        Vec p(d);
        for (int a = 0; a + 1 < d; ++a) p[a] = rng.uniform(-40, 40);
        p[d - 1] = m + (i % 2 == 0 ? 0.5 : -0.5);
        expect(evaluate(res.map, p) == p, "slab boundary moved");
      }

      // Sampled distortion against the formula bound.
      Vec lo(d), hi(d);
      for (int a = 0; a + 1 < d; ++a) {
        lo[a] = -12;
        hi[a] = 12;
      }
      lo[d - 1] = m - 0.5;
      hi[d - 1] = m + 0.5;
      AuditReport rep = sampled_bilip(res.map, Box(lo, hi), 3000, 700 + static_cast<uint64_t>(d));
      double formula = std::log2(static_cast<double>(N)) +
                       std::pow(3.0, l) * 8.0 * d * 6.0 * static_cast<double>(N) * static_cast<double>(T);
      expect(res.cert_log2 == formula, "certified bound formula mismatch");
      expect(res.map->bound.bilip_log2() <= formula, "carried bound above the formula");
      expect(rep.sampled_expansion_log2 <= formula && rep.sampled_contraction_log2 <= formula,
             "sampled distortion above the certified bound");
      detail += " d=" + std::to_string(d) + ",N=" + std::to_string(N) + ":" +
                std::to_string(sigma.pairs.size() / 2) + "sw";
    }
  }
  return "designated + 10^4 boundary points per instance;" + detail;
}

// --------------------------------------------------------------------------
// 8. Injective rounding

std::string criterion8() {
  Rng rng(108);
  for (int it = 0; it < 50; ++it) {
    const int d = 2;
    const int H = 1 + static_cast<int>(rng.uniform_int(0, 1));
    const double s = rng.uniform(0.15, 0.25);
    const long long N = static_cast<long long>(
        std::ceil(std::pow(2.0 * std::sqrt(2.0) / s, 3.0) * static_cast<double>(H))) + 1;
    // s-separated points within the shrunken slab.
    std::vector<std::vector<Vec>> layers(static_cast<size_t>(H));
    std::vector<Vec> all;
    int target = 5 + static_cast<int>(rng.uniform_int(0, 25));
    int failures = 0;
    while (static_cast<int>(all.size()) < target && failures < 300) {
      Vec p{rng.uniform(0, 4), rng.uniform(0.5 + s + 0.02, H + 0.5 - s - 0.02)};
      bool ok = true;
      for (const Vec& q : all)
        if (q.dist(p) < s * 1.05) {
          ok = false;
          break;
        }
      if (!ok) {
        ++failures;
        continue;
      }
      all.push_back(p);
      int m = std::min(H, std::max(1, static_cast<int>(std::llround(p[1]))));
      layers[static_cast<size_t>(m - 1)].push_back(p);
    }
    InjRoundResult ir = inj_round(layers, s, N, d);

    // (i) support fixedness outside the open slab.
    for (int i = 0; i < 200; ++i) {
      Vec p{rng.uniform(-3, 7), i % 2 == 0 ? 0.5 : H + 0.5};
      expect(evaluate(ir.psi, p) == p, "boundary hyperplane moved");
      p[1] = i % 2 == 0 ? rng.uniform(-4, 0.5) : rng.uniform(H + 0.5, 5.0);
      expect(evaluate(ir.psi, p) == p, "point outside the slab moved");
    }
    // (ii) images in ((1/N)Z \ Z) x {m}; (iii) horizontal displacement <= s^2.
    for (int m = 1; m <= H; ++m) {
      for (size_t i = 0; i < layers[static_cast<size_t>(m - 1)].size(); ++i) {
        const Vec& p = layers[static_cast<size_t>(m - 1)][i];
        Vec img = evaluate(ir.psi, p);
        const IVec& spot = ir.spots[static_cast<size_t>(m - 1)][i];
        expect(std::abs(img[1] - m) <= 1e-9, "image height is not the layer index");
        expect(std::abs(img[0] - static_cast<double>(spot[0]) / static_cast<double>(N)) <= 1e-9,
               "image does not sit on its assigned spot");
        expect(spot[0] % N != 0, "spot lies on the integer lattice");
        expect(std::abs(img[0] - p[0]) <= s * s + 1e-9, "horizontal displacement above s^2");
      }
    }
    // Sampled distortion against 2^8 N^2 H^2.
    AuditReport rep = sampled_bilip(ir.psi, Box(Vec{-2, 0}, Vec{6, H + 1.0}), 2000, 800 + static_cast<uint64_t>(it));
    expect(rep.sampled_expansion_log2 <= ir.cert_log2 && rep.sampled_contraction_log2 <= ir.cert_log2,
           "sampled distortion above 2^8 N^2 H^2");
  }
  return "50 instances (d=2, H<=2, <=30 points): conclusions (i)-(iii) and the bound";
}

// --------------------------------------------------------------------------
// 9. Threading end-to-end

std::string thread_instance(const LayeredPointMap& data, uint64_t seed, const std::string& name) {
  ThreadResult res = thread_extension(data);
  for (const auto& [src, img] : res.designated)
    expect(evaluate(res.map, src).dist(img) <= 1e-9, name + ": designated pair missed");

  Rng rng(seed);
  const int d = data.dim;
  // Identity on both boundary hyperplanes at 10^4 sampled points.
  for (int i = 0; i < 10000; ++i) {
    Vec p(d);
    p[0] = rng.uniform(-50, 50);
    p[d - 1] = i % 2 == 0 ? 0.5 : data.H + 0.5;
    expect(evaluate(res.map, p) == p, name + ": boundary hyperplane moved");
  }
  // Inverse round-trip over a 3x support box.
  Box box(Vec{data.window.lo[0] - 30.0, 0.5 - 1.0}, Vec{data.window.hi[0] + 30.0, data.H + 0.5 + 1.0});
  for (int i = 0; i < 1000; ++i) {
    Vec p = rng.in_box(box);
    Vec back = evaluate_inverse(res.map, evaluate(res.map, p));
    expect(back.dist(p) <= 1e-9 * (1.0 + p.norm()), name + ": round trip failed");
  }
  // Sampled distortion against the theorem bound, compared in log space.
  AuditReport rep = sampled_bilip(res.map, box, 10000, seed + 1);
  expect(res.map->bound.bilip_log2() <= res.cert_log2, name + ": carried bound above the theorem bound");
  expect(rep.sampled_expansion_log2 <= res.cert_log2 && rep.sampled_contraction_log2 <= res.cert_log2,
         name + ": sampled distortion above the theorem bound");
  expect(rep.bound_ok, name + ": sampled distortion above the carried bound");
  return name + "(N=" + std::to_string(res.N) + ",T*=" + std::to_string(res.T_used) + ") ";
}

std::string criterion9() {
  std::string detail;
  {
    LayeredPointMap data;
    data.dim = 2;
    data.H = 1;
    data.L = 1.0;
    data.window = Box(Vec{-0.5}, Vec{3.5});
    data.layers.resize(1);
    for (int i = 0; i < 4; ++i) data.layers[0].push_back({IVec{i}, Vec{static_cast<double>(i), 1.0}});
    detail += thread_instance(data, 901, "identity");
  }
  {
    // Alternating shuffle at the L = 2 limit.
    LayeredPointMap data;
    data.dim = 2;
    data.H = 1;
    data.L = 2.0;
    data.window = Box(Vec{-0.5}, Vec{3.5});
    data.layers.resize(1);
    for (int i = 0; i < 4; ++i) {
      double dx = (i % 2 == 0 ? 1.0 : -1.0) * 0.25;
      data.layers[0].push_back({IVec{i}, Vec{static_cast<double>(i) + dx, 1.0}});
    }
    detail += thread_instance(data, 902, "shuffle");
  }
  {
    // A single source displaced most of a lattice step.
    LayeredPointMap data;
    data.dim = 2;
    data.H = 1;
    data.L = 1.9;
    data.window = Box(Vec{-0.5}, Vec{0.5});
    data.layers.resize(1);
    data.layers[0].push_back({IVec{0}, Vec{0.8, 1.0}});
    detail += thread_instance(data, 903, "long-jump");
  }
  return detail;
}

// --------------------------------------------------------------------------
// 10. Slab gluing

std::string criterion10() {
  SlabSystem sys;
  sys.dim = 2;
  sys.T = 2;
  sys.G = identity_map(2);
  sys.M1 = 1.3;
  sys.M2 = 1.0;
  for (long long k : {1ll, 2ll}) {
    SlabData slab;
    slab.k = k;
    slab.window = Box(Vec{-0.5}, Vec{1.5});
    slab.layers.resize(2);
    double base = static_cast<double>((k - 1) * sys.T);
    for (long long j = 1; j <= 2; ++j) {
      for (int i = 0; i < 2; ++i) {
        double dx = ((i + static_cast<int>(j) + static_cast<int>(k)) % 2 == 0 ? 1.0 : -1.0) * 0.1;
        slab.layers[static_cast<size_t>(j - 1)].push_back(
            {IVec{i}, Vec{static_cast<double>(i) + dx, base + static_cast<double>(j)}});
      }
    }
    sys.slabs.push_back(slab);
  }
  GlueSlabsResult res = glue_slabs(sys);
  for (const auto& [src, img] : res.designated)
    expect(evaluate(res.map, src).dist(img) <= 1e-9, "designated pair missed");
  expect(res.map->bound.bilip_log2() <= res.cert_log2, "carried bound above the theorem bound");

  Rng rng(1001);
  AuditReport rep = sampled_bilip(res.map, Box(Vec{-20, -0.5}, Vec{21, 5.5}), 4000, 1002);
  expect(rep.bound_ok, "sampled distortion above the carried bound");
  expect(rep.sampled_expansion_log2 <= res.cert_log2, "sampled distortion above the theorem bound");
  // Cross-slab pairs stay finite and bounded: sample straddling the shared
  // boundary explicitly.
  for (int i = 0; i < 2000; ++i) {
    Vec p{rng.uniform(-3, 4), rng.uniform(2.0, 2.5)};
    Vec q{rng.uniform(-3, 4), rng.uniform(2.5, 3.0)};
    double ds = p.dist(q);
    if (ds < 1e-9) continue;
    double r = std::log2(evaluate(res.map, p).dist(evaluate(res.map, q))) - std::log2(ds);
    expect(std::abs(r) <= res.cert_log2, "cross-slab distortion above the certified bound");
  }

  // Crafted containment violation: rejected with the offending slab index.
  SlabSystem bad = sys;
  bad.slabs[1].layers[0][0].second = Vec{0.0, 1.2};  // image belongs to slab 1
  bool caught = false;
  try {
    glue_slabs(bad);
  } catch (const ValidationError& e) {
    caught = std::string(e.what()).find("slab 2") != std::string::npos;
  }
  expect(caught, "containment violation not attributed to slab 2");
  return "two slabs, T=2, G=id; cross-boundary sampling ok; violation names slab 2";
}

// --------------------------------------------------------------------------
// 11. Paper-constant spot checks

std::string criterion11() {
  // K = 16 max(3d/r, 1).
  for (int d : {2, 3}) {
    for (double r : {0.5, 3.0, 6.0, 7.5}) {
      SeparatedNet net;
      net.dim = d;
      net.sep = r;
      Vec hi(d);
      for (int i = 0; i < d; ++i) hi[i] = 4 * r;
      net.window = Box(Vec(d), hi);
      Vec second(d);
      second[0] = r;
      Vec third(d);
      third[1] = 2 * r;
      net.points = {Vec(d), second, third};
      net.cover = 4 * r;
      RoundNetResult res = round_net_to_lattice(net);
      expect(res.cert.K == 16.0 * std::max(3.0 * d / r, 1.0), "K formula mismatch");
    }
  }
  // N = 12 lambda sqrt(d) L.
  {
    PointMap f;
    f.dim = 4;
    f.declared_L = 1.0;
    for (long long x = 0; x <= 1; ++x)
      for (long long y = 0; y <= 1; ++y)
        for (long long z = 0; z <= 1; ++z)
          for (long long w = 0; w <= 1; ++w) {
            Vec p{static_cast<double>(x), static_cast<double>(y), static_cast<double>(z), static_cast<double>(w)};
            f.pairs.push_back({p, p});
          }
    ExtendResult res = extend_to_lattice(f, 1.0, Box(Vec{0, 0, 0, 0}, Vec{1, 1, 1, 1}));
    expect(res.N == 12.0 * 1.0 * std::sqrt(4.0) * 1.0, "N = 12 lambda sqrt(d) L mismatch");
    expect(res.N == 24.0, "N should be 24 for lambda=1, d=4, L=1");
  }
  // Round bound (2l-1)S.
  expect(routing_round_bound(1, 7) == 7, "round bound l=1");
  expect(routing_round_bound(2, 3) == 9, "round bound l=2");
  expect(routing_round_bound(3, 2) == 10, "round bound l=3");
  // Beta witness: 2 floor(t) - 1 <= exp(8dt), exp base 2, on a grid.
  for (int d : {2, 3, 4}) {
    BetaWitness beta{d};
    for (int i = 0; i < 1000; ++i) {
      double t = 1.0 + 99.0 * i / 999.0;
      expect(std::log2(BetaWitness::lower_sanity(t)) <= beta.log2_beta(t), "beta lower bound above the witness");
    }
  }
  return "K, N, (2l-1)S, beta sanity formulas exact";
}

}  // namespace

int main() {
  std::printf("acceptance: exactness + certified-bound auditing + oracle equivalence\n");
  run_criterion(1, "swap exactness and bound (tube swap lemma)", 10, criterion1);
  run_criterion(2, "simultaneous swaps (max-rule family)", 30, criterion2);
  run_criterion(3, "net rounding into the integer lattice", 60, criterion3);
  run_criterion(4, "lattice extension with greedy spots", 60, criterion4);
  run_criterion(5, "grid permutation routing", 30, criterion5);
  run_criterion(6, "tile decomposition of bounded-displacement permutations", 30, criterion6);
  run_criterion(7, "slab permutation realizer", 120, criterion7);
  run_criterion(8, "injective rounding onto fine lattices", 60, criterion8);
  run_criterion(9, "threading end-to-end", 300, criterion9);
  run_criterion(10, "periodic slab gluing", 300, criterion10);
  run_criterion(11, "paper-constant spot checks", 10, criterion11);
  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
