#pragma once

// MapExpr: immutable expression trees of bilipschitz primitives (identity,
// restricted affine maps, spins, tube swaps, glued piecewise maps and
// compositions). Every node carries certified one-sided Lipschitz bounds in
// log2 scale and is evaluable forward and inverse at any point of R^d.

#include <memory>
#include <optional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bilip/region.hpp"

namespace bilip {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Piecewise-linear rotation profile on [0, inf). Constant before the first
// and after the last breakpoint; evaluation is exact at breakpoints.
struct PiecewiseLinear {
  std::vector<std::pair<double, double>> pts;

  double eval(double t) const;
  double lip() const;
  double last_t() const { return pts.empty() ? 0.0 : pts.back().first; }
  void validate() const;
};

// The tube-swap rotation profile: pi up to 1, linear to 0 at 1 + 2 eta.
PiecewiseLinear swap_profile(double eta);

// Certified bounds: log2 of an upper bound for Lip(f) and Lip(f^-1).
// Carrying the two sides separately keeps one-sided conjugations (for
// example by a horizontal-only rescaling) from squaring the constant.
struct BoundPair {
  double lip_log2 = 0;
  double inv_log2 = 0;

  double bilip_log2() const { return std::max(lip_log2, inv_log2); }
  BoundPair inverted() const { return {inv_log2, lip_log2}; }
  BoundPair operator+(const BoundPair& o) const {
    return {lip_log2 + o.lip_log2, inv_log2 + o.inv_log2};
  }
  static BoundPair max_of(const BoundPair& a, const BoundPair& b) {
    return {std::max(a.lip_log2, b.lip_log2), std::max(a.inv_log2, b.inv_log2)};
  }
  static BoundPair symmetric(double bilip_log2) { return {bilip_log2, bilip_log2}; }
};

enum class NodeKind { Identity, Affine, Spin, Swap, Glued, Compose };
enum class AffineKind { Translation, UniformScale, DiagonalScale, OrthFrame };

struct MapNode;
using MapExpr = std::shared_ptr<const MapNode>;

struct AffineData {
  AffineKind kind = AffineKind::Translation;
  Vec offset;              // Translation
  double scale = 1.0;      // UniformScale
  Vec diag;                // DiagonalScale
  std::vector<Vec> rows;   // OrthFrame, y[i] = rows[i] . x
};

struct SpinData {
  Vec center;
  Vec u, v;                // orthonormal rotation plane
  PiecewiseLinear profile; // angle as a function of |x - center|
  double t0 = 1.0;         // support radius; profile vanishes beyond it
  bool inverted = false;
};

struct SwapData {
  Vec x, y;
  double r = 0;
  bool inverted = false;
  // derived, cached at construction
  double sep = 0;        // |x - y|
  double eta = 0;        // r / sep
  int axis = -1;         // >= 0 when x - y is exactly axis-aligned
  double axis_sign = 1;
};

struct GlueEntry {
  Region region;
  MapExpr map;
};

struct GluedData {
  std::vector<GlueEntry> entries;
  // Spatial hash over bounded entries; `linear` holds the rest.
  double cell = 0;
  std::unordered_map<IVec, std::vector<int>, IVecHash> grid;
  std::vector<int> linear;

  int locate(const Vec& p) const;  // first entry whose closed region contains p, -1 if none
};

struct ComposeData {
  std::vector<MapExpr> children;  // applied first to last
};

struct MapNode {
  NodeKind kind = NodeKind::Identity;
  int dim = 0;
  BoundPair bound;
  // Closed box outside of which the map is the identity. Extents may be
  // infinite; nullopt means no support information (treat as whole space).
  std::optional<Box> support;
  std::variant<std::monostate, AffineData, SpinData, SwapData, GluedData, ComposeData> data;
};

Vec evaluate(const MapExpr& m, const Vec& p);
Vec evaluate_inverse(const MapExpr& m, const Vec& p);

// Structural inverse; exact for every node kind.
MapExpr invert(const MapExpr& m);

MapExpr identity_map(int dim);
MapExpr translation(const Vec& offset);
MapExpr uniform_scale(int dim, double s);
MapExpr diagonal_scale(const Vec& diag);
MapExpr orth_frame(std::vector<Vec> rows);

// Rotation by profile(|x - center|) in the plane span(u, v); identity
// outside B(center, t0). Certified bound Lip(profile) * t0 + 1.
MapExpr spin_map(const SpinData& payload);

// Raw swap node over the tube B([x, y], r); full family validation lives in
// the swaps module. Certified bound 4 |x - y|^2 / r^2.
MapExpr make_swap_node(const Vec& x, const Vec& y, double r);

MapExpr compose(int dim, std::vector<MapExpr> maps);
MapExpr compose(std::vector<MapExpr> maps);

struct GlueOptions {
  int boundary_samples = 64;
  int interior_samples = 64;
  uint64_t seed = 20230817;
  // Regions must either touch (adjacent) or keep at least this gap.
  double min_gap = 1e-6;
  bool check_separation = true;
};

// Piecewise map: delegate to the first entry whose closed region contains
// the point, identity outside all regions. Validates pairwise disjointness,
// region preservation and boundary agreement (exactly where decidable,
// sampled otherwise). Certified bound: max over entries (and 1).
MapExpr glue(std::vector<GlueEntry> entries, int dim, const GlueOptions& opts = {});

// Internal path for swap families whose tube disjointness was already
// checked exactly; skips the generic sampling.
MapExpr glue_swaps_prechecked(std::vector<GlueEntry> entries, int dim);

}  // namespace bilip
