#pragma once
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "driftlab/geometry.hpp"

namespace driftlab {

// ============================================================================
// Closed-form function descriptors with hand-derived analytic derivatives.
// Central finite differences are the guard against derivation slips; the
// checkers below throw SingularProbe when a stencil would touch the
// singular set.
// ============================================================================

struct SingularSet {
  std::string description;
  std::function<double(const Vec&)> distance;  // distance to the set, >= 0

  static SingularSet none() {
    return {"none",
            [](const Vec&) { return std::numeric_limits<double>::infinity(); }};
  }
  static SingularSet origin() {
    return {"origin", [](const Vec& p) { return p.norm(); }};
  }
  static SingularSet plane_z0() {
    return {"plane z=0", [](const Vec& p) { return std::abs(p.z()); }};
  }
};

struct ClosedFormScalar {
  int dim = 0;
  std::string name;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<double(const Vec&)> laplacian;
  SingularSet singular = SingularSet::none();
};

struct ClosedFormVector {
  int dim = 0;
  std::string name;
  std::function<Vec(const Vec&)> value;
  std::function<double(const Vec&)> divergence;
  SingularSet singular = SingularSet::none();
};

// ============================================================================
// Finite-difference reference operators (plain functions, no singular-set
// guard) and the guarded analytic-vs-FD checkers.
// ============================================================================

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& p,
                double h);
double fd_laplacian(const std::function<double(const Vec&)>& f, const Vec& p,
                    double h);
// order = 2 (3-point) or 4 (5-point) central divergence stencil.
double fd_divergence(const std::function<Vec(const Vec&)>& F, const Vec& p,
                     double h, int order = 2);

// Max-abs component mismatch between the analytic derivative and its FD
// counterpart.  SingularProbe when the stencil footprint reaches the
// singular set.
double fd_check_gradient(const ClosedFormScalar& f, const Point& p, double h);
double fd_check_laplacian(const ClosedFormScalar& f, const Point& p, double h);
double fd_check_divergence(const ClosedFormVector& F, const Point& p, double h,
                           int order = 2);

// Least-squares slope of log(err) against log(h).  Pairs with err below
// `floor` are dropped (roundoff plateau); returns NaN if fewer than two
// usable pairs remain.
double decay_order(const std::vector<double>& hs,
                   const std::vector<double>& errs, double floor = 0.0);

}  // namespace driftlab
