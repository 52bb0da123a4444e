#pragma once

#include <utility>
#include <vector>

#include "driftlab/closed_form.hpp"
#include "driftlab/geometry.hpp"
#include "driftlab/quadrature.hpp"
#include "driftlab/rng.hpp"

namespace driftlab {

// ============================================================================
// Smooth compactly supported test functions and divergence-free planar
// drifts, plus the two weak-form residuals
//
//     grad form:  integral of  grad u . (grad h + b h)
//     div  form:  integral of  u (lap h + b . grad h)
//
// and the trilinear form  T(b, phi, psi) = integral of (b . grad phi) psi
// for divergence-free b.  All integrals run over the test function's own
// support ball, which the caller must keep inside the working domain.
// ============================================================================

// Radial mollifier bump: value exp(1 - 1/(1 - t^2)) of t = |x - center| /
// radius for t < 1, identically zero outside.  Gradient and Laplacian are
// hand-coded closed forms (the t -> 0 limit of phi'(t)/t is taken smoothly,
// so the Laplacian is exact on the axis of symmetry too).
struct BumpFunction {
  Point center;
  double radius = 1.0;
  int dim = 0;

  BumpFunction(const Point& c, double r);

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  double laplacian(const Vec& x) const;

  Domain support() const { return Domain::ball(radius, dim, center); }
  ClosedFormScalar as_scalar() const;
};

// Planar stream potential and its induced rotated-gradient drift
// (d2 omega, -d1 omega), divergence-free by construction.
struct StreamField2D {
  ClosedFormScalar omega;

  ClosedFormVector induced() const;
};

// Random polynomial potential of total degree <= degree, coefficients drawn
// uniformly from [-1, 1] in the order (i, j) lexicographic.
StreamField2D polynomial_stream(Rng& rng, int degree = 4);

// Unbounded potential ln(-ln|x|), singular at the origin; its induced drift
// has the same magnitude profile 1/(|x| |ln|x||).  Natural domain |x| < 1.
StreamField2D loglog_stream();

struct WeakFormResult {
  double value = 0.0;                            // finest-level value
  std::vector<std::pair<int, double>> trail;     // (cells_per_axis, value)
};

WeakFormResult weak_residual_grad_form(const ClosedFormScalar& u,
                                       const ClosedFormVector& b,
                                       const BumpFunction& h, const Domain& dom,
                                       const QuadratureSpec& q);

WeakFormResult weak_residual_div_form(const ClosedFormScalar& u,
                                      const ClosedFormVector& b,
                                      const BumpFunction& h, const Domain& dom,
                                      const QuadratureSpec& q);

// T(b, phi, psi).  Checks div b = 0 by finite differences at probe points
// inside both supports (NotDivergenceFree beyond 1e-6); probes too close to
// b's singular set are skipped.
double trilinear_form(const ClosedFormVector& b, const BumpFunction& phi,
                      const BumpFunction& psi, const Domain& dom,
                      const QuadratureSpec& q);

// |T| / (||b||_L2(dom) ||grad phi||_L2 ||grad psi||_L2); 0 when the
// denominator vanishes.
double rayleigh_quotient(const ClosedFormVector& b, const BumpFunction& phi,
                         const BumpFunction& psi, const Domain& dom,
                         const QuadratureSpec& q);

struct RayleighSweepResult {
  double max_quotient = 0.0;
  std::vector<double> quotients;  // stream-major, pair-minor order
};

RayleighSweepResult rayleigh_sweep(
    const std::vector<StreamField2D>& streams,
    const std::vector<std::pair<BumpFunction, BumpFunction>>& pairs,
    const Domain& dom, const QuadratureSpec& q);

}  // namespace driftlab
