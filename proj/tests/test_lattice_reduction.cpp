#include <doctest.h>

#include <set>

#include "bilip/lattice_reduction.hpp"
#include "bilip/rng.hpp"

using namespace bilip;

namespace {
SeparatedNet random_net(Rng& rng, int d, double sep, int target_points) {
  SeparatedNet net;
  net.dim = d;
  net.sep = sep;
  double side = sep * std::pow(static_cast<double>(target_points), 1.0 / d) * 2.0;
  Vec lo(d), hi(d);
  for (int i = 0; i < d; ++i) hi[i] = side;
  net.window = Box(lo, hi);
  int failures = 0;
  while (static_cast<int>(net.points.size()) < target_points && failures < 4000) {
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
  net.cover = side;  // crude but valid sampled upper estimate for tests
  return net;
}
}  // namespace

TEST_CASE("round_net_to_lattice: integral images and certified constant") {
  // Net already inside Z^2 with separation >= 3d: every point is fixed.
  SeparatedNet net;
  net.dim = 2;
  net.sep = 6.0;
  net.window = Box(Vec{0, 0}, Vec{18, 18});
  for (int x = 0; x <= 3; ++x)
    for (int y = 0; y <= 3; ++y) net.points.push_back(Vec{6.0 * x, 6.0 * y});
  net.cover = 4.25;
  RoundNetResult res = round_net_to_lattice(net);
  CHECK(res.cert.K == doctest::Approx(16.0));
  for (const Vec& p : net.points) CHECK(evaluate(res.phi, p).dist(p) <= 1e-9);

  // A single off-lattice point at separation 6 rounds to the origin.
  SeparatedNet one;
  one.dim = 2;
  one.sep = 6.0;
  one.window = Box(Vec{-1, -1}, Vec{1, 1});
  one.points = {Vec{0.3, 0.0}, Vec{6.3, 0.0}};
  one.cover = 6.0;
  RoundNetResult r1 = round_net_to_lattice(one);
  CHECK(evaluate(r1.phi, Vec{0.3, 0.0}).dist(Vec{0, 0}) <= 1e-9);
  CHECK(evaluate(r1.phi, Vec{6.3, 0.0}).dist(Vec{6, 0}) <= 1e-9);

  // r = 3 in d = 2: K = 16 max(6/3, 1) = 32.
  SeparatedNet tight;
  tight.dim = 2;
  tight.sep = 3.0;
  tight.window = Box(Vec{0, 0}, Vec{9, 9});
  tight.points = {Vec{0.1, 0.0}, Vec{3.4, 0.2}, Vec{6.2, 6.0}};
  tight.cover = 7.0;
  RoundNetResult r2 = round_net_to_lattice(tight);
  CHECK(r2.cert.K == doctest::Approx(32.0));
  CHECK(r2.cert.scale_used == doctest::Approx(2.0));
  LatticeSpec unit = LatticeSpec::unit(2);
  for (const Vec& p : tight.points) {
    Vec img = evaluate(r2.phi, p);
    CHECK(img.dist(nearest_lattice_point(img, unit)) <= 1e-9);
  }
}

TEST_CASE("round_net_to_lattice: random nets give distinct integral images") {
  Rng rng(7);
  for (int it = 0; it < 8; ++it) {
    int d = it % 2 == 0 ? 2 : 3;
    SeparatedNet net = random_net(rng, d, rng.uniform(0.7, 2.5), 40);
    RoundNetResult res = round_net_to_lattice(net);
    LatticeSpec unit = LatticeSpec::unit(d);
    std::set<IVec> images;
    for (const Vec& p : net.points) {
      Vec img = evaluate(res.phi, p);
      CHECK(img.dist(nearest_lattice_point(img, unit)) <= 1e-9);
      CHECK(images.insert(nearest_lattice_index(img, unit)).second);
    }
    CHECK(res.phi->bound.bilip_log2() <= std::log2(res.cert.K) + 1e-9);
  }
}

TEST_CASE("extend_to_lattice: exact formula for N and the identity sub-lattice case") {
  // lambda = 1, d = 4, L = 1 gives N = 24.
  PointMap f4;
  f4.dim = 4;
  f4.declared_L = 1.0;
  f4.pairs.push_back({Vec{0, 0, 0, 0}, Vec{0, 0, 0, 0}});
  f4.pairs.push_back({Vec{1, 0, 0, 0}, Vec{1, 0, 0, 0}});
  f4.pairs.push_back({Vec{0, 1, 0, 0}, Vec{0, 1, 0, 0}});
  f4.pairs.push_back({Vec{1, 1, 0, 0}, Vec{1, 1, 0, 0}});
  Box w4(Vec{0, 0, 0, 0}, Vec{1, 1, 0, 0});
  ExtendResult e4 = extend_to_lattice(f4, 1.0, w4);
  CHECK(e4.N == doctest::Approx(12.0 * 1.0 * 2.0 * 1.0));

  // Y = 2Z^2 over [0,4]^2 with the identity map, lambda = sqrt(2):
  // the output is injective and passes the exhaustive audit.
  PointMap f;
  f.dim = 2;
  f.declared_L = 1.0;
  for (int x = 0; x <= 4; x += 2)
    for (int y = 0; y <= 4; y += 2)
      f.pairs.push_back({Vec{static_cast<double>(x), static_cast<double>(y)},
                         Vec{static_cast<double>(x), static_cast<double>(y)}});
  Box window(Vec{0, 0}, Vec{4, 4});
  ExtendResult res = extend_to_lattice(f, std::sqrt(2.0), window);
  CHECK(res.F.pairs.size() == 25);
  // Sources in Y keep their images.
  for (const auto& [s, img] : res.F.pairs) {
    long long x = std::llround(s[0]), y = std::llround(s[1]);
    if (x % 2 == 0 && y % 2 == 0) CHECK(s.dist(img) <= 1e-12);
  }
  CHECK(res.lip <= 4.0 * std::sqrt(2.0) * 1.0 * (1 + 1e-9));
  CHECK(res.inv_lip <= 24.0 * 2.0 * 1.0 * std::sqrt(2.0) * (1 + 1e-9));

  // A window point farther than lambda from Y is rejected.
  Box far_window(Vec{0, 0}, Vec{9, 9});
  CHECK_THROWS_AS(extend_to_lattice(f, std::sqrt(2.0), far_window), ValidationError);
}

TEST_CASE("extend_to_lattice: greedy spot exclusion is what keeps F injective") {
  // A crafted instance where two window points share the same anchor; if the
  // used-spot bookkeeping were dropped both would get the nearest spot.
  PointMap f;
  f.dim = 2;
  f.declared_L = 1.0;
  f.pairs.push_back({Vec{0, 0}, Vec{0, 0}});
  Box window(Vec{-1, -1}, Vec{1, 1});
  ExtendResult res = extend_to_lattice(f, 2.0, window);
  std::set<std::pair<long long, long long>> spots;
  for (const auto& [s, img] : res.F.pairs) {
    (void)s;
    // Quantize images to units of 1/(2N) to detect collisions exactly.
    spots.insert({std::llround(img[0] * 2 * res.N), std::llround(img[1] * 2 * res.N)});
  }
  CHECK(spots.size() == res.F.pairs.size());
}

TEST_CASE("transport interpolator moves every source to its image") {
  Rng rng(77);
  PointMap f;
  f.dim = 2;
  f.declared_L = 8.0;
  // A shuffle with a collision: 0 -> 1 -> 0 plus a bystander.
  f.pairs.push_back({Vec{0, 0}, Vec{1, 0}});
  f.pairs.push_back({Vec{1, 0}, Vec{0, 0}});
  f.pairs.push_back({Vec{3, 1}, Vec{3.25, 1.5}});
  MapExpr g = transport_interpolator(f);
  for (const auto& [s, img] : f.pairs) CHECK(evaluate(g, s).dist(img) <= 1e-9);
  // Inverse consistency on the designated points.
  for (const auto& [s, img] : f.pairs) CHECK(evaluate_inverse(g, img).dist(s) <= 1e-9);
  // Far points are fixed.
  for (int i = 0; i < 100; ++i) {
    Vec p = rng.in_box(Box(Vec{50, 50}, Vec{80, 80}));
    CHECK(evaluate(g, p) == p);
  }
}

TEST_CASE("reduce_general_net end-to-end with the transport oracle") {
  Rng rng(78);
  SeparatedNet net;
  net.dim = 2;
  net.sep = 5.5;
  net.window = Box(Vec{0, 0}, Vec{13, 13});
  for (int x = 0; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y)
      net.points.push_back(Vec{6.0 * x + rng.uniform(-0.15, 0.15), 6.0 * y + rng.uniform(-0.15, 0.15)});
  net.cover = 4.5;

  PointMap f;
  f.dim = 2;
  // A gentle global translation plus jitter keeps bilip small.
  for (const Vec& p : net.points) f.pairs.push_back({p, p + Vec{0.35, -0.2}});
  f.declared_L = 1.05;

  // lambda = K R is large, so even a tight window around Y is covered.
  Box lattice_window(Vec{-2, -2}, Vec{15, 15});
  int oracle_calls = 0;
  ExtensionOracle oracle = [&](const PointMap& g) {
    ++oracle_calls;
    return transport_interpolator(g);
  };
  ReduceResult res = reduce_general_net(net, f, oracle, lattice_window);
  CHECK(oracle_calls == 1);
  for (const auto& [s, img] : f.pairs) CHECK(evaluate(res.F, s).dist(img) <= 1e-9);
  CHECK(res.K == doctest::Approx(16.0 * (6.0 / 5.5)));

  // An oracle that misses the interpolation check is rejected.
  ExtensionOracle bad = [&](const PointMap& g) {
    (void)g;
    return translation(Vec{100.0, 0.0});
  };
  CHECK_THROWS_AS(reduce_general_net(net, f, bad, lattice_window), ValidationError);
}
