#pragma once

// Rounding a separated net into the integer lattice, extending a bilipschitz
// map from a covering subset of Z^d to all window lattice points, and the
// reduction pipeline composing the two with a pluggable lattice-extension
// oracle.

#include <functional>

#include "bilip/swaps.hpp"

namespace bilip {

// Finite bijective point assignment with a declared bilipschitz constant.
struct PointMap {
  int dim = 2;
  double declared_L = 1.0;
  std::vector<std::pair<Vec, Vec>> pairs;

  // Distinct sources, distinct images, all pairwise ratios within
  // [1/declared_L, declared_L] (relative slack 1e-9).
  void validate() const;
};

struct ReductionCert {
  double K = 1.0;          // 16 max(3d / r, 1)
  double scale_used = 1.0; // 3d / r, or 1 when no rescaling was needed
  SwapFamily swap_family;
};

struct RoundNetResult {
  MapExpr phi;
  PointMap images;  // net point -> integer lattice point
  ReductionCert cert;
};

// Lemma-style rounding: rescale until the separation reaches 3d, then swap
// every net point with its nearest lattice point. Certified bound
// 16 max(3d / r, 1).
RoundNetResult round_net_to_lattice(const SeparatedNet& net);

struct ExtendResult {
  PointMap F;        // defined on every lattice point of the window
  double N = 0;      // fine-lattice denominator 12 lambda sqrt(d) L
  double lip = 0;    // exhaustive audit: max ratio
  double inv_lip = 0;
};

// Extends f (defined on Y, a lambda-cover of the window lattice) to every
// lattice point of the window: each new point gets the nearest unused spot
// of f(alpha) + (1/N) Z^d inside B(f(alpha), 1/(4L)), greedily in
// lexicographic source order. Audited exhaustively against Lip(F) <= 4
// lambda L and Lip(F^-1) <= 24 lambda^2 L sqrt(d).
ExtendResult extend_to_lattice(const PointMap& f, double lambda, const Box& window);

// Oracle solving the lattice extension problem: receives a PointMap on
// window lattice points and must return a map interpolating it exactly.
using ExtensionOracle = std::function<MapExpr(const PointMap&)>;

struct ReduceResult {
  MapExpr F;
  double K = 1;
  double lambda = 1;
  PointMap lattice_input;  // what the oracle received
};

// Thm-style reduction: F = G o Phi where Phi rounds the net into Z^d and G
// is the oracle's extension of the greedily extended f o Phi^{-1}.
ReduceResult reduce_general_net(const SeparatedNet& net, const PointMap& f, const ExtensionOracle& oracle,
                                const Box& lattice_window);

// Desk-scale extension oracle: transports each source to its image through
// a sequence of tube swaps routed around all other points. Exact on the
// input, bilipschitz by construction, wildly suboptimal constants.
MapExpr transport_interpolator(const PointMap& f);

}  // namespace bilip
