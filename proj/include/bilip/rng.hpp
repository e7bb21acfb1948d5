#pragma once

// Seeded sampling helpers. All draws go through explicit arithmetic on
// mt19937_64 output so identical seeds give identical streams everywhere.

#include <cstdint>
#include <random>

#include "bilip/geom.hpp"

namespace bilip {

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t bits() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer in [a, b], inclusive.
  long long uniform_int(long long a, long long b) {
    uint64_t span = static_cast<uint64_t>(b - a) + 1;
    uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
      x = bits();
    } while (x >= limit);
    return a + static_cast<long long>(x % span);
  }

  Vec in_box(const Box& box) {
    Vec p(box.dim());
    for (int i = 0; i < box.dim(); ++i) p[i] = uniform(box.lo[i], box.hi[i]);
    return p;
  }

  double gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  Vec unit_vec(int d) {
    while (true) {
      Vec v(d);
      for (int i = 0; i < d; ++i) v[i] = gaussian();
      double n = v.norm();
      if (n > 1e-12) return v * (1.0 / n);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace bilip
