#pragma once

// Threading a bilipschitz extension through a slab: the injective rounding
// map pressing image layers onto fine lattices, the extension interpolating
// prescribed grid images while fixing the slab boundary hyperplanes, and the
// periodic slab-gluing pipeline.

#include "bilip/routing.hpp"

namespace bilip {

// Grid data between two fixed hyperplanes: layer m in [H] maps grid sources
// x in Z^(d-1) to image points; everything outside the window (and both
// hyperplanes) is the identity.
struct LayeredPointMap {
  int dim = 2;  // ambient dimension d
  int H = 1;
  double L = 1.0;
  // layers[m-1]: list of (grid source, image point in R^d)
  std::vector<std::vector<std::pair<IVec, Vec>>> layers;
  Box window;  // horizontal box containing all sources (d-1 dimensional)

  void validate() const;
};

struct InjRoundResult {
  MapExpr psi;
  double cert_log2 = 0;  // log2(2^8 N^2 H^2)
  long long N = 1;
  // spots[m-1][i]: fine-lattice index (units of 1/N) assigned to layer m
  // point i; the image of that point under psi is (spot / N, m).
  std::vector<std::vector<IVec>> spots;
};

// Presses the layer points onto ((1/N) Z^(d-1) \ Z^(d-1)) x {m} via
// horizontal swaps into per-cell parking spots followed by vertical swaps to
// integer heights. Fixes the complement of the open slab; horizontal
// displacement of every layer point is at most s^2.
InjRoundResult inj_round(const std::vector<std::vector<Vec>>& layers, double s, long long N, int dim);

struct ThreadResult {
  MapExpr map;
  double cert_log2 = 0;      // the theorem's displayed bound, in log2
  long long N = 1;
  long long T_formula = 1;   // the displacement bound derived from the data constants
  long long T_used = 1;      // actual displacement bound used for tiling
  std::vector<std::pair<Vec, Vec>> designated;  // (x, m) -> f(x, m)
};

// Builds the extension F with F(x, m) = f(x, m) on every grid source and
// F = identity outside the open slab.
ThreadResult thread_extension(const LayeredPointMap& data);

struct SlabData {
  long long k = 1;  // slab index: heights ((k-1)T + 1/2, kT + 1/2)
  // layers[j-1]: grid data at absolute height (k-1)T + j, j in [T]
  std::vector<std::vector<std::pair<IVec, Vec>>> layers;
  Box window;
};

struct SlabSystem {
  int dim = 2;
  long long T = 1;  // period
  MapExpr G;        // normalizing map
  double M1 = 1.0;  // >= bilip of the combined lattice-plus-hyperplane data
  double M2 = 1.0;  // >= bilip(G)
  std::vector<SlabData> slabs;
};

struct GlueSlabsResult {
  MapExpr map;  // F = G o Phi
  double cert_log2 = 0;
  std::vector<std::pair<Vec, Vec>> designated;
};

// Threads each nontrivial slab of G^{-1} o F-tilde separately and glues the
// results across the slab partition; F = G o Phi.
GlueSlabsResult glue_slabs(const SlabSystem& system);

}  // namespace bilip
