#pragma once

// Tube swaps: the bilipschitz building block exchanging two designated
// points while fixing everything outside the tube B([x, y], r), and the
// simultaneous swap family glued from pairwise disjoint tubes.

#include "bilip/map_expr.hpp"

namespace bilip {

struct SwapSpec {
  Vec x, y;
  double r = 0;

  void validate() const;
  bool degenerate() const { return x == y; }
  double bilip_bound() const;  // 4 |y - x|^2 / r^2, or 1 when degenerate
  Region tube() const { return Region::tube(x, y, r); }
};

struct SwapFamily {
  int dim = 2;
  std::vector<SwapSpec> specs;

  // Pairwise tube disjointness (exact segment distances; tangency allowed),
  // eta <= 1/2 per spec. Throws with the offending pair on failure.
  void validate() const;
  double bilip_bound() const;  // max(1, max over specs)
};

// The single swap tau: tau(x) = y, tau(y) = x, identity outside the tube.
// Degenerate x == y yields the identity map.
MapExpr swap_map(const SwapSpec& spec);

// Simultaneous swaps over a validated family, glued over the tubes.
MapExpr simultaneous_swaps(const SwapFamily& family);

}  // namespace bilip
