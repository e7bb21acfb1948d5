#pragma once

// Grid permutation routing and its bilipschitz realizers: decomposition of
// bounded-displacement lattice permutations into tile-local pieces, routing
// of grid permutations into rounds of disjoint adjacent transpositions, and
// the slab maps realizing them through swap compositions.

#include <map>

#include "bilip/map_expr.hpp"

namespace bilip {

// Finite-support permutation of the scaled lattice (1/N) Z^dim. Coordinates
// are stored as integers in units of 1/N, so all arithmetic is exact.
struct LatticePerm {
  int dim = 1;
  long long N = 1;
  std::vector<std::pair<IVec, IVec>> pairs;  // source -> image over the moved set

  void validate() const;               // bijective on its support
  double displacement() const;         // max Euclidean |image - source| / N
  long long displacement_units_sq_max() const;  // max |image - source|^2 in lattice units
  std::map<IVec, IVec> as_map() const;
};

// Ordered rounds of pairwise disjoint grid-adjacent transpositions, in units
// of the 1/N lattice. Interior empty rounds are retained so the stated round
// bounds stay auditable; trailing all-empty rounds are not emitted.
struct RoutingSchedule {
  int dim = 1;
  long long N = 1;
  std::vector<std::vector<std::pair<IVec, IVec>>> rounds;

  size_t round_count() const { return rounds.size(); }
};

// Odd-even transposition routing of a permutation of [S] = {1..S} given by
// its moved pairs. At most S rounds.
RoutingSchedule route_path(long long S, const std::vector<std::pair<long long, long long>>& moved);

struct BipartiteMultigraph {
  int n = 0;  // vertices per side
  std::vector<std::pair<int, int>> edges;
};

// Splits a k-regular bipartite multigraph into k perfect matchings by
// repeated maximum-matching extraction; each color class is returned as a
// list of edge indices.
std::vector<std::vector<int>> edge_color_regular_bipartite(const BipartiteMultigraph& g, int k);

// Routes a permutation of [S]^l (moved pairs with coordinates in 1..S) into
// at most (2l - 1) S rounds: route within columns along the last axis, then
// within the (l-1)-dimensional slices, then within columns again, with
// intermediate targets produced by edge coloring the column-destination
// multigraph.
RoutingSchedule route_grid(int l, long long S, const std::vector<std::pair<IVec, IVec>>& moved);

inline long long routing_round_bound(int l, long long S) { return (2 * l - 1) * S; }

// The 3^l tile-local pieces of a bounded-displacement permutation of Z^l.
// Pieces are permutations of the half lattice (1/2) Z^l, stored with doubled
// integer coordinates (LatticePerm with N = 2).
struct TileDecomposition {
  int l = 1;
  long long T = 1;
  std::vector<IVec> offsets;        // p_k in {-1,0,1}^l, lexicographic order
  std::vector<LatticePerm> pieces;  // 3^l pieces, piece k tile-local for offsets[k]

  // Applies the pieces in order to a half-lattice point (doubled integers).
  IVec apply(const IVec& doubled) const;
};

// Lemma-style decomposition: piece k permutes each tile
// (-1/4,...,-1/4) + [-T, 2T]^l + T (3 z + p_k) within itself and the
// composition restricted to Z^l equals phi.
TileDecomposition tile_decompose(const LatticePerm& phi, long long T);

// The explicit witness beta(t) = exp(8 d t) (exp in base 2), with the lower
// sanity bound 2 floor(t) - 1.
struct BetaWitness {
  int d = 2;
  double log2_beta(double t) const { return 8.0 * d * t; }
  static double lower_sanity(double t) { return 2.0 * std::floor(t) - 1.0; }
};

// Realizes a tile-respecting permutation of Z^l (tiles (-1/2,..) + [0,S]^l
// + S z) at height 0 of R^(l+1): per tile, the routed rounds become
// simultaneous swap maps with radius 1/2, composed and glued across tile
// columns. Fixes R^l x (R \ (-1/2, 1/2)).
struct RealizedTilePerm {
  MapExpr map;
  long long max_rounds = 0;          // max retained rounds over tiles
  double cert_log2 = 0;              // 4 K <= 8 d S formula value
};
RealizedTilePerm realize_tile_perm(const LatticePerm& sigma, long long S);

// The slab realizer: a map of R^(d-1) x [m - 1/2, m + 1/2] performing sigma
// on (1/N) Z^(d-1) x {m}, identity on the slab boundary hyperplanes.
struct UpsilonResult {
  MapExpr map;
  double cert_log2 = 0;  // log2 N + 3^(d-1) * 8 d * 6 N T
  std::vector<std::pair<Vec, Vec>> designated;  // (x, m) -> (sigma(x), m)
};
UpsilonResult build_upsilon(const LatticePerm& sigma, long long T, double m);

}  // namespace bilip
