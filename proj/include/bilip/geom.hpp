#pragma once

// Euclidean vectors with small inline storage, axis boxes, integer lattice
// helpers and separated-net bookkeeping. Everything here is immutable after
// construction and safe to share across threads.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilip {

inline constexpr int kMaxDim = 4;

// Absolute tolerance for geometric predicates (membership, boundary tests).
inline constexpr double kGeomTol = 1e-9;

// Thrown when an input violates a documented precondition or invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

// Internal consistency failures (claims the construction itself guarantees).
inline void internal_assert(bool cond, const std::string& msg) {
  if (!cond) throw std::logic_error("internal assertion failed: " + msg);
}

struct Vec {
  std::array<double, kMaxDim> c{};
  int n = 0;

  Vec() = default;
  explicit Vec(int dim) : n(dim) {
    require(dim >= 1 && dim <= kMaxDim,
            "vector dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  }
  Vec(std::initializer_list<double> xs) : n(static_cast<int>(xs.size())) {
    require(n >= 1 && n <= kMaxDim, "vector dimension out of range");
    int i = 0;
    for (double x : xs) c[i++] = x;
  }

  int dim() const { return n; }
  double& operator[](int i) { return c[static_cast<size_t>(i)]; }
  const double& operator[](int i) const { return c[static_cast<size_t>(i)]; }

  Vec operator+(const Vec& o) const {
    Vec r(n);
    for (int i = 0; i < n; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r(n);
    for (int i = 0; i < n; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r(n);
    for (int i = 0; i < n; ++i) r.c[i] = c[i] * s;
    return r;
  }
  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n; ++i) c[i] += o.c[i];
    return *this;
  }
  bool operator==(const Vec& o) const {
    if (n != o.n) return false;
    for (int i = 0; i < n; ++i)
      if (c[i] != o.c[i]) return false;
    return true;
  }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += c[i] * o.c[i];
    return s;
  }
  double norm_sq() const { return dot(*this); }
  double norm() const { return std::sqrt(norm_sq()); }
  double dist(const Vec& o) const { return (*this - o).norm(); }
  double dist_sq(const Vec& o) const { return (*this - o).norm_sq(); }

  bool finite() const {
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(c[i])) return false;
    return true;
  }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

// Integer lattice coordinates (used by routing and tiling; exact arithmetic).
struct IVec {
  std::array<long long, kMaxDim> c{};
  int n = 0;

  IVec() = default;
  explicit IVec(int dim) : n(dim) {}
  IVec(std::initializer_list<long long> xs) : n(static_cast<int>(xs.size())) {
    int i = 0;
    for (long long x : xs) c[i++] = x;
  }

  int dim() const { return n; }
  long long& operator[](int i) { return c[static_cast<size_t>(i)]; }
  const long long& operator[](int i) const { return c[static_cast<size_t>(i)]; }

  bool operator==(const IVec& o) const {
    if (n != o.n) return false;
    for (int i = 0; i < n; ++i)
      if (c[i] != o.c[i]) return false;
    return true;
  }
  bool operator!=(const IVec& o) const { return !(*this == o); }
  bool operator<(const IVec& o) const {  // lexicographic
    for (int i = 0; i < n && i < o.n; ++i) {
      if (c[i] != o.c[i]) return c[i] < o.c[i];
    }
    return n < o.n;
  }

  IVec operator+(const IVec& o) const {
    IVec r(n);
    for (int i = 0; i < n; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  IVec operator-(const IVec& o) const {
    IVec r(n);
    for (int i = 0; i < n; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }

  Vec to_vec() const {
    Vec r(n);
    for (int i = 0; i < n; ++i) r.c[i] = static_cast<double>(c[i]);
    return r;
  }
  double norm() const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += static_cast<double>(c[i]) * static_cast<double>(c[i]);
    return std::sqrt(s);
  }
};

struct IVecHash {
  size_t operator()(const IVec& v) const {
    size_t h = 1469598103934665603ull;
    for (int i = 0; i < v.n; ++i) {
      h ^= std::hash<long long>{}(v.c[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Floor division, exact for negative values.
inline long long floor_div(long long a, long long b) {
  long long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

// Closed axis-aligned box; extents may be infinite.
struct Box {
  Vec lo, hi;

  Box() = default;
  Box(const Vec& l, const Vec& h) : lo(l), hi(h) {
    require(l.dim() == h.dim(), "box corner dimension mismatch");
    for (int i = 0; i < l.dim(); ++i)
      require(l[i] <= h[i], "box has lo > hi on axis " + std::to_string(i));
  }

  int dim() const { return lo.dim(); }
  bool contains(const Vec& p, double tol = 0.0) const {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
    return true;
  }
  double extent(int i) const { return hi[i] - lo[i]; }
  double diameter() const {
    double s = 0;
    for (int i = 0; i < dim(); ++i) {
      double e = extent(i);
      s += e * e;
    }
    return std::sqrt(s);
  }
  Vec center() const { return (lo + hi) * 0.5; }
  bool bounded() const { return lo.finite() && hi.finite(); }

  Box inflated(double eps) const {
    Box b = *this;
    for (int i = 0; i < dim(); ++i) {
      b.lo[i] -= eps;
      b.hi[i] += eps;
    }
    return b;
  }
  // Smallest box covering both; the empty-default box is treated as absorbing.
  static Box hull(const Box& a, const Box& b) {
    Box r = a;
    for (int i = 0; i < a.dim(); ++i) {
      r.lo[i] = std::min(a.lo[i], b.lo[i]);
      r.hi[i] = std::max(a.hi[i], b.hi[i]);
    }
    return r;
  }
};

// The scaled lattice offset + (1/N) Z^dim.
struct LatticeSpec {
  int dim = 1;
  long long N = 1;  // scale is 1/N
  Vec offset;

  LatticeSpec() = default;
  LatticeSpec(int d, long long N_, Vec off) : dim(d), N(N_), offset(off) {
    require(d >= 1 && d <= kMaxDim, "lattice dimension out of range");
    require(N_ >= 1, "lattice denominator N must be a positive integer");
    require(off.dim() == d, "lattice offset dimension mismatch");
  }
  static LatticeSpec unit(int d) { return LatticeSpec(d, 1, Vec(d)); }
  static LatticeSpec scaled(int d, long long N_) { return LatticeSpec(d, N_, Vec(d)); }

  double scale() const { return 1.0 / static_cast<double>(N); }
  Vec point(const IVec& k) const {
    Vec r(dim);
    for (int i = 0; i < dim; ++i) r[i] = offset[i] + static_cast<double>(k[i]) / static_cast<double>(N);
    return r;
  }
};

// Finite s-separated r-net sample over a window. `cover` is a sampled
// estimate of the covering radius, not an exact Voronoi value.
struct SeparatedNet {
  int dim = 2;
  std::vector<Vec> points;
  double sep = 0;
  double cover = 0;
  Box window;

  void validate() const;
};

struct NetConstants {
  double sep = 0;
  double cover = 0;
};

// Distance from p to the closed segment [a, b].
double dist_to_segment(const Vec& p, const Vec& a, const Vec& b);

// Per-coordinate round-half-up onto the scaled lattice; deterministic ties.
IVec nearest_lattice_index(const Vec& p, const LatticeSpec& spec);
Vec nearest_lattice_point(const Vec& p, const LatticeSpec& spec);

// All lattice points within the closed ball B(center, t); exact enumeration.
std::vector<Vec> lattice_points_in_ball(const Vec& center, double t, const LatticeSpec& spec);
std::vector<IVec> lattice_indices_in_ball(const Vec& center, double t, const LatticeSpec& spec);

// sep = exact min pairwise distance; cover = max distance to the point set
// over a grid_step sample grid of the window (an estimate from below).
NetConstants net_constants(const std::vector<Vec>& points, const Box& window, double grid_step);

}  // namespace bilip
