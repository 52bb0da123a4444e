#pragma once

#include <vector>

#include "driftlab/closed_form.hpp"
#include "driftlab/geometry.hpp"

namespace driftlab {

// ============================================================================
// Axisymmetric cone-drift construction on the unit cylinder
// {rho < 1, |z| < 1}: a drift field of size K z^{-mu} supported in the cone
// z/rho >= 1/2, mollified at height eps, divergence-free by curl design, odd
// under z -> -z; together with the comparison barrier v(rho, z) =
// f(z) cos(pi rho / 2z) on the truncated cone rho <= z, eps <= z <= 1, and
// the constants that make Delta v - b . grad v positive there.
// ============================================================================

// C-infinity step: 0 for t <= 1/2, 1 for t >= 1, normalized integral of
// exp(-1/(s(1-s))) in between.  Plateau values are bit-exact constants.
class SmoothStep {
 public:
  SmoothStep();
  double value(double t) const;
  double deriv(double t) const;
  double second(double t) const;
  double mass() const { return total_; }  // integral of the bump over (0,1)

 private:
  double cumulative(double s) const;  // integral of the bump over [0, s]
  static constexpr int kPanels = 512;
  std::vector<double> prefix_;  // panel prefix integrals
  double total_ = 0.0;
};

// Shared step instance used by every drift evaluation.
const SmoothStep& step_function();

struct DerivedConstants {
  double d_mu = 0.0;   // 1/2 + 2^{3-mu} / ((2-mu)(mu-1))
  double c1 = 0.0;     // 1 / (6 d_mu): guaranteed floor of f at 2 eps
  double c2 = 0.0;     // growth constant: f <= c2 f' z^{2-mu}
  double c3 = 0.0;     // damping constant: -f'' <= c3 f' z^{-mu}
  double K_min = 0.0;  // max(4n/(n-mu-1), pi^2 c2 + c3)
};

// Throws ParamOutOfRange unless n >= 3 and 1 < mu < min(2, n-1).
DerivedConstants derive_constants(int n, double mu);

struct BarrierParams {
  int n = 3;
  double mu = 1.25;
  double eps = 0.05;
  double K = 70.0;
  double p_target = 2.0;
  DerivedConstants consts;

  // Validates n, mu per derive_constants; eps in (0, 1/2); K > 0;
  // 1 <= p_target < n/mu.  K below K_min is allowed on purpose: probing the
  // failure of the construction for small K is part of the test surface.
  static BarrierParams make(int n, double mu, double eps, double K,
                            double p_target);
  static BarrierParams defaults(double eps = 0.05) {
    return make(3, 1.25, eps, 70.0, 2.0);
  }
};

// ----------------------------------------------------------------- ramp f

// Piecewise ramp profile h (quadratic on [eps, 2 eps], power t^{mu-2}
// beyond), its antiderivative g from eps, and the normalized f = g / g(1).
double ramp_h(double t, const BarrierParams& p);
double ramp_h_prime(double t, const BarrierParams& p);
double ramp_g(double z, const BarrierParams& p);

struct RampValues {
  double f = 0.0, fp = 0.0, fpp = 0.0;
};

// f with derivatives on [eps, 1]; f(eps) = 0 and f(1) = 1 exactly.
// OutOfDomain outside the interval.
RampValues f_eps(double z, const BarrierParams& p);

struct FPropertyCheck {
  double min_f = 0.0, min_fprime = 0.0;   // sign properties
  double f_at_eps = 0.0, f_at_2eps = 0.0, f_at_one = 0.0;
  double min_growth_margin = 0.0;         // c2 f' z^{2-mu} - f
  double min_damping_margin = 0.0;        // c3 f' z^{-mu} + f''
  double seam_growth_lo = 0.0, seam_growth_hi = 0.0;   // at 2eps-/2eps+
  double seam_damping_lo = 0.0, seam_damping_hi = 0.0;
  int points = 0;
  bool pass = false;
};

FPropertyCheck check_f_properties(const BarrierParams& p, int count);

// ----------------------------------------------------------------- drifts

// Meridian vector (component along rho, component along z).
struct AxiVec {
  double rho = 0.0;
  double z = 0.0;
};

// Stream function rho^{n-1} z^{-mu} eta(z/eps) eta(z/rho), extended oddly
// to z < 0.
double H_eps(double rho, double z, const BarrierParams& p);

// Drift from the curl recipe b = K rho^{2-n} (dH/dz, -dH/drho): bounded,
// smooth, zero for |z| <= eps/2 and below the cone z/rho = 1/2.
AxiVec b_eps(double rho, double z, const BarrierParams& p);

// eps -> 0 limit (the eta(z/eps) factor replaced by 1): singular as
// z^{-mu} near the origin along the cone.  SingularProbe at z = 0.
AxiVec b_zero(double rho, double z, const BarrierParams& p);

// Closed formulas valid on the open cone {rho < z, eps < z < 1} where both
// step factors sit on their upper plateaus.
AxiVec b_eps_cone(double rho, double z, const BarrierParams& p);

// Cartesian wrappers (dimension p.n, axis = last coordinate).
ClosedFormVector b_eps_field(const BarrierParams& p);
ClosedFormVector b_zero_field(const BarrierParams& p);

// Max |FD divergence| (5-point stencil, step h) over `probes` seeded sample
// points of the cylinder, skipping points closer than 0.05 to the field's
// singular set.
double max_fd_divergence(const ClosedFormVector& b, int probes, double h,
                         unsigned long long seed);

// Calibration of |b_eps| <= C K z^{-mu} on the half cylinder: returns the
// max of |b_eps| z^{mu} / K over a grid of `per_axis` points log-spaced in z
// and uniform across the cone section.
double envelope_ratio(const BarrierParams& p, int per_axis);

// ||b_eps - b_zero||_{L_p} over the full cylinder (meridian quadrature with
// the substitution z = eps t^2 to absorb the z^{-mu} edge).
double lp_gap_to_limit(const BarrierParams& p, double p_exp);

// ---------------------------------------------------------------- barrier

struct BarrierValue {
  double v = 0.0;
  double d_rho = 0.0, d_z = 0.0;  // meridian partials
  double lap = 0.0;               // d2_rho + ((n-2)/rho) d_rho + d2_z
};

// Barrier f(z) cos(pi rho / 2z) with hand-coded derivatives; OutOfDomain
// outside the closed truncated cone {rho <= z, eps <= z <= 1}.
BarrierValue v_eps(double rho, double z, const BarrierParams& p);

// Delta v - b . grad v at a cone point, drift taken from the closed cone
// formulas (exact there).
double barrier_defect(double rho, double z, const BarrierParams& p);

struct BarrierCheck {
  double min_value = 0.0;
  double argmin_rho = 0.0, argmin_z = 0.0;
  double min_inner = 0.0;  // samples with rho <= z/2
  double min_outer = 0.0;  // samples with z/2 < rho <= z
  int samples = 0;
};

// Min of the defect over `count` low-discrepancy samples of the truncated
// cone (plus its axis edge); positive min is the comparison-principle
// certificate, and K below K_min is expected to drive it negative.
BarrierCheck check_barrier_inequality(const BarrierParams& p, int count);

}  // namespace driftlab
