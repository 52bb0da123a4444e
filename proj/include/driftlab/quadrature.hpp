#pragma once
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "driftlab/geometry.hpp"

namespace driftlab {

// ============================================================================
// Tensor-product quadrature over balls and cylinders, in coordinates adapted
// to the domain (polar/spherical for balls, meridian (rho, z) for cylinders).
//
// Cylinder integration uses the meridian-plane reduction
//     integral = sigma_{n-2} * intint g(rho, z) rho^{n-2} drho dz,
// which is valid only for integrands that are rotationally symmetric about
// the x_n axis.  Every cylinder-domain quantity in this project is of that
// form; non-symmetric integrands must be integrated over balls instead.
// ============================================================================

enum class QuadScheme {
  TensorMidpoint,  // 1 node per cell per axis, order 2
  TensorGauss,     // Gauss-Legendre of configurable order per axis
};

// Optional singular-point treatment: a hole of radius delta around `center`
// is excluded from the integral, and the radial range outside the hole is
// subdivided into dyadically graded annuli so that integrands with power or
// logarithmic blow-up are resolved scale by scale.
struct PolarRefinement {
  Vec center;
  int annuli = 0;     // 0 = automatic (factor-2 grading from delta outward)
  double delta = 1e-6;
};

struct QuadratureSpec {
  QuadScheme scheme = QuadScheme::TensorGauss;
  int order = 4;            // Gauss points per axis per cell
  int cells_per_axis = 64;  // radial cells (angular axes are derived from it)
  std::optional<PolarRefinement> polar;

  static QuadratureSpec midpoint(int cells) {
    QuadratureSpec q;
    q.scheme = QuadScheme::TensorMidpoint;
    q.cells_per_axis = cells;
    return q;
  }
  static QuadratureSpec gauss(int cells = 64, int order = 4) {
    QuadratureSpec q;
    q.scheme = QuadScheme::TensorGauss;
    q.cells_per_axis = cells;
    q.order = order;
    return q;
  }
  // Copy of this spec with a singular hole of radius delta around c.
  QuadratureSpec refined_at(const Vec& c, double delta, int annuli = 0) const {
    QuadratureSpec q = *this;
    q.polar = PolarRefinement{c, annuli, delta};
    return q;
  }
};

struct IntegralResult {
  double value = 0.0;
  double excluded_measure = 0.0;  // Lebesgue measure of the excised hole
  long long evaluations = 0;      // integrand calls actually made
};

using Integrand = std::function<double(const Vec&)>;

// Integrate f over dom.  Throws NonFiniteSample if f returns NaN or +-inf at
// any node (the usual cause is a singular integrand without polar
// refinement), ParamOutOfRange for malformed specs.
//
// Refinement placement:
//  - Ball with hole at the ball's own center: exact dyadic radial grading,
//    hole measure computed in closed form.
//  - Ball with hole elsewhere: nodes inside the hole are skipped and the
//    excluded measure is the sum of their quadrature weights (reported, not
//    exact).
//  - Cylinder/HalfCylinder with hole at the origin: dyadic L-infinity shells
//    in the meridian plane; hole measure in closed form.
IntegralResult integrate(const Integrand& f, const Domain& dom,
                         const QuadratureSpec& q);

// One-dimensional companion on [a, b] (used for iterated explicit formulas).
double integrate_interval(const std::function<double(double)>& f, double a,
                          double b, const QuadratureSpec& q);

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
const std::vector<std::pair<double, double>>& gauss_rule(int order);

}  // namespace driftlab
