#pragma once
#include <array>
#include <cmath>
#include <string>

#include "driftlab/errors.hpp"

namespace driftlab {

inline constexpr int kMaxDim = 8;

// Fixed-capacity point/vector in R^n, n <= 8.  Kept on the stack: quadrature
// evaluates these by the million.
struct Vec {
  std::array<double, kMaxDim> c{};
  int dim = 0;

  Vec() = default;
  Vec(std::initializer_list<double> xs) {
    dim = 0;
    for (double v : xs) c[dim++] = v;
  }
  static Vec zero(int n) {
    Vec p;
    p.dim = n;
    return p;
  }
  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }

  double norm2() const {
    double s = 0;
    for (int i = 0; i < dim; ++i) s += c[i] * c[i];
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  // Meridian coordinates: rho = |(x_1,...,x_{n-1})|, z = x_n.
  double rho() const {
    double s = 0;
    for (int i = 0; i + 1 < dim; ++i) s += c[i] * c[i];
    return std::sqrt(s);
  }
  double z() const { return c[dim - 1]; }

  Vec operator+(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] += o.c[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] -= o.c[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] *= s;
    return r;
  }
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (int i = 0; i < a.dim; ++i) s += a.c[i] * b.c[i];
  return s;
}

using Point = Vec;

// Surface measure of the unit sphere S^{d-1} in R^d.
inline double sphere_area(int d) {
  // 2 pi^{d/2} / Gamma(d/2)
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

// Volume of the unit ball in R^d.
inline double ball_volume(int d) {
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

// Integration/sampling domains.  Balls may sit anywhere; cylinders are the
// fixed sets {|x'| < 1, |x_n| < 1} and their upper half {0 < x_n < 1}.
struct Domain {
  enum class Kind { Ball, Cylinder, HalfCylinder };
  Kind kind = Kind::Ball;
  int dim = 2;
  double radius = 1.0;  // Ball only
  Point center;         // Ball only

  static Domain ball(double R, int n, Point c = {}) {
    if (n < 1 || n > kMaxDim) throw BadDimension("Domain: dim must be in [1,8]");
    if (!(R > 0)) throw ParamOutOfRange("Domain: radius must be positive");
    Domain d;
    d.kind = Kind::Ball;
    d.dim = n;
    d.radius = R;
    d.center = (c.dim == n) ? c : Point::zero(n);
    return d;
  }
  static Domain cylinder(int n) {
    if (n < 3) throw BadDimension("Domain: cylinder needs dim >= 3");
    Domain d;
    d.kind = Kind::Cylinder;
    d.dim = n;
    return d;
  }
  static Domain half_cylinder(int n) {
    Domain d = cylinder(n);
    d.kind = Kind::HalfCylinder;
    return d;
  }

  bool contains(const Point& p) const {
    if (p.dim != dim) return false;
    switch (kind) {
      case Kind::Ball:
        return (p - center).norm() < radius;
      case Kind::Cylinder:
        return p.rho() < 1.0 && std::abs(p.z()) < 1.0;
      case Kind::HalfCylinder:
        return p.rho() < 1.0 && p.z() > 0.0 && p.z() < 1.0;
    }
    return false;
  }

  double measure() const {
    switch (kind) {
      case Kind::Ball:
        return ball_volume(dim) * std::pow(radius, dim);
      case Kind::Cylinder:
        return ball_volume(dim - 1) * 2.0;
      case Kind::HalfCylinder:
        return ball_volume(dim - 1);
    }
    return 0.0;
  }
};

// Distance from a point to the domain boundary (negative outside).
inline double boundary_clearance(const Domain& dom, const Vec& x) {
  switch (dom.kind) {
    case Domain::Kind::Ball:
      return dom.radius - (x - dom.center).norm();
    case Domain::Kind::Cylinder:
      return std::min(1.0 - x.rho(), 1.0 - std::abs(x.z()));
    case Domain::Kind::HalfCylinder:
      return std::min({1.0 - x.rho(), x.z(), 1.0 - x.z()});
  }
  return 0.0;
}

}  // namespace driftlab
