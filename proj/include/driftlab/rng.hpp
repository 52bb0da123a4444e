#pragma once
#include <cstdint>
#include <vector>

#include "driftlab/geometry.hpp"

namespace driftlab {

// Deterministic uniform generator.  std::uniform_real_distribution is
// implementation-defined, so outputs are built from raw bits instead; the
// same seed gives the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : s_(seed ? seed : 1) {}

  std::uint64_t next_u64() {
    // xorshift* (Marsaglia); plenty for sampling probe points
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545f4914f6cdd1dull;
  }
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform direction on S^{n-1} via normalized Gaussians (Box-Muller).
  Vec direction(int n) {
    while (true) {
      Vec v = Vec::zero(n);
      for (int i = 0; i < n; i += 2) {
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        v[i] = r * std::cos(2.0 * M_PI * u2);
        if (i + 1 < n) v[i + 1] = r * std::sin(2.0 * M_PI * u2);
      }
      double nrm = v.norm();
      if (nrm > 1e-12) return v * (1.0 / nrm);
    }
  }

  // Uniform point in a ball (volume measure).
  Vec in_ball(double R, int n, const Vec& center = {}) {
    Vec d = direction(n);
    double r = R * std::pow(uniform(), 1.0 / n);
    Vec p = d * r;
    if (center.dim == n) p = p + center;
    return p;
  }

 private:
  std::uint64_t s_;
};

// Radical-inverse (Halton) sequence, base b, index starting at 1.
inline double radical_inverse(std::uint64_t i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * double(i % base);
    i /= base;
  }
  return r;
}

// Deterministic low-discrepancy direction sets on spheres.  n = 2 uses
// golden-angle spacing, n = 3 the Fibonacci sphere, higher n Halton points
// pushed through the inverse of the Gaussian radial map.
std::vector<Vec> sphere_directions(int n, int count);

}  // namespace driftlab
