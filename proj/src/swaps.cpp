#include "bilip/swaps.hpp"

#include <algorithm>
#include <unordered_map>

namespace bilip {

void SwapSpec::validate() const {
  require(x.dim() == y.dim(), "swap spec: endpoint dimension mismatch");
  require(x.dim() >= 2, "swap spec: dimension must be at least 2");
  require(r > 0, "swap spec: radius must be positive");
  require(x.finite() && y.finite(), "swap spec: non-finite endpoint");
  if (!degenerate()) {
    double sep = x.dist(y);
    require(r <= 0.5 * sep * (1 + 1e-12),
            "swap spec: radius must satisfy r <= |y - x| / 2");
  }
}

double SwapSpec::bilip_bound() const {
  if (degenerate()) return 1.0;
  double sep_sq = x.dist_sq(y);
  return 4.0 * sep_sq / (r * r);
}

namespace {
double pair_tolerance(const SwapSpec& a, const SwapSpec& b) {
  double mag = 1.0;
  for (const Vec* v : {&a.x, &a.y, &b.x, &b.y})
    for (int i = 0; i < v->dim(); ++i) mag = std::max(mag, std::abs((*v)[i]));
  return 1e-12 * mag;
}

double segment_pair_distance(const SwapSpec& a, const SwapSpec& b) {
  auto f = [&](double t) {
    Vec p = a.x + (a.y - a.x) * t;
    return dist_to_segment(p, b.x, b.y);
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
}  // namespace

void SwapFamily::validate() const {
  require(dim >= 2 && dim <= kMaxDim, "swap family: dimension out of range");
  for (size_t i = 0; i < specs.size(); ++i) {
    require(specs[i].x.dim() == dim, "swap family: spec dimension mismatch");
    specs[i].validate();
  }
  // Disjointness via a hash over tube bounding boxes: only nearby pairs get
  // the exact segment-distance test.
  double cell = 0;
  for (const SwapSpec& s : specs) {
    double len = s.x.dist(s.y);
    cell = std::max(cell, len + 2 * s.r);
  }
  if (cell <= 0) cell = 1;
  std::unordered_map<IVec, std::vector<int>, IVecHash> grid;
  auto cells_of = [&](const SwapSpec& s) {
    IVec lo(dim), hi(dim);
    for (int i = 0; i < dim; ++i) {
      lo[i] = static_cast<long long>(std::floor((std::min(s.x[i], s.y[i]) - s.r) / cell));
      hi[i] = static_cast<long long>(std::floor((std::max(s.x[i], s.y[i]) + s.r) / cell));
    }
    std::vector<IVec> out;
    IVec c = lo;
    while (true) {
      out.push_back(c);
      int ax = 0;
      while (ax < dim) {
        if (++c[ax] <= hi[ax]) break;
        c[ax] = lo[ax];
        ++ax;
      }
      if (ax == dim) break;
    }
    return out;
  };
  for (size_t i = 0; i < specs.size(); ++i) {
    for (const IVec& c : cells_of(specs[i])) {
      for (int j : grid[c]) {
        const SwapSpec& a = specs[static_cast<size_t>(j)];
        const SwapSpec& b = specs[i];
        double d = segment_pair_distance(a, b);
        double tol = pair_tolerance(a, b);
        require(d >= a.r + b.r - tol, "swap family: tubes overlap (specs " + std::to_string(j) + " and " +
                                          std::to_string(i) + ")");
      }
      grid[c].push_back(static_cast<int>(i));
    }
  }
  // A tube covering several cells is tested against the same neighbor more
  // than once; harmless.
}

double SwapFamily::bilip_bound() const {
  double b = 1.0;
  for (const SwapSpec& s : specs) b = std::max(b, s.bilip_bound());
  return b;
}

MapExpr swap_map(const SwapSpec& spec) {
  spec.validate();
  if (spec.degenerate()) return identity_map(spec.x.dim());
  return make_swap_node(spec.x, spec.y, spec.r);
}

MapExpr simultaneous_swaps(const SwapFamily& family) {
  family.validate();
  std::vector<GlueEntry> entries;
  entries.reserve(family.specs.size());
  for (const SwapSpec& s : family.specs) {
    if (s.degenerate()) continue;  // identity swap: keeps its tube reserved, adds no entry
    entries.push_back({s.tube(), make_swap_node(s.x, s.y, s.r)});
  }
  if (entries.empty()) return identity_map(family.dim);
  return glue_swaps_prechecked(std::move(entries), family.dim);
}

}  // namespace bilip
