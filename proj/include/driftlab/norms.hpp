#pragma once
#include <string>
#include <utility>
#include <vector>

#include "driftlab/closed_form.hpp"
#include "driftlab/quadrature.hpp"

namespace driftlab {

// ============================================================================
// Function-space measurements: Lp, first-order Sobolev seminorm, the
// L2-log Orlicz norm, Morrey and BMO sampled suprema, and a Holder-exponent
// estimator.  Singular integrands carry convergence evidence: a trail over
// the inner cutoff delta and a trail over quadrature refinement.
// ============================================================================

struct NormReport {
  std::string kind;    // "lp" | "w12" | "orlicz-l2ln" | "morrey" | "bmo"
  std::string params;  // short human-readable parameter echo
  double value = 0.0;
  bool diverging = false;    // delta-trail failed the geometric-Cauchy test
  double inner_cutoff = 0.0; // delta used for the headline value (0 if none)
  // (cells_per_axis, value): refinement trail at the final delta
  std::vector<std::pair<int, double>> refine_trail;
  // (delta, value): cutoff trail at the final refinement level
  std::vector<std::pair<double, double>> delta_trail;
};

struct OrliczConfig {
  double k_lo = 1e-6;
  double k_hi = 1e6;
  double tol = 1e-4;  // absolute bisection tolerance on the norm value
};

// Deterministic sampling budget for the sup-type norms.  Centers come from a
// fixed seeded stream (so a larger budget extends, never reshuffles, a
// smaller one) and radii are dyadic below each center's clearance, making
// the sampled supremum monotone in both counts.
struct SamplingPlan {
  int centers = 64;
  int radii = 12;
  std::uint64_t seed = 2024;
};

// (integral |f|^p)^{1/p}.  Fields whose singular set is the origin get the
// delta-trail {1e-2, 1e-3, 1e-4} (hole around the origin) plus a
// cells-refinement trail; the headline value uses the finest of both.
NormReport lp_norm(const ClosedFormScalar& f, const Domain& dom, double p,
                   const QuadratureSpec& q);

// (integral |grad f|^2)^{1/2} via the analytic gradient.
NormReport w12_seminorm(const ClosedFormScalar& f, const Domain& dom,
                        const QuadratureSpec& q);

// inf { k > 0 : integral |f/k|^2 ln(1 + |f/k|^2) <= 1 } by bisection.
// BracketFailure if the integral still exceeds 1 at k_hi.  For singular
// fields the diverging flag reports on the delta-trail at fixed k = k_hi;
// the headline value is then the truncated-domain norm at the inner cutoff.
NormReport orlicz_l2ln_norm(const ClosedFormScalar& f, const Domain& dom,
                            const QuadratureSpec& q, const OrliczConfig& cfg);

// Sampled  sup_{B_r(x) in dom} r^{-alpha} ||f||_{Lq(B_r(x))}  (lower bound
// of the true norm; the origin is always the first center).
NormReport morrey_norm(const ClosedFormScalar& f, const Domain& dom,
                       double q_exp, double alpha, const SamplingPlan& plan,
                       const QuadratureSpec& q);

// Sampled  sup_B (1/|B|) integral_B |f - mean_B f|  (lower bound).
NormReport bmo_seminorm(const ClosedFormScalar& f, const Domain& dom,
                        const SamplingPlan& plan, const QuadratureSpec& q);

// Least-squares slope of log osc(f, B_r(center)) against log r, where osc is
// max - min over {center} plus `sphere_samples` low-discrepancy directions
// per scale.  `degenerate` is set (and alpha_hat is NaN) when the
// oscillation vanishes at every scale.
struct HolderFit {
  double alpha_hat = 0.0;
  double residual = 0.0;  // RMS misfit of the log-log regression
  bool degenerate = false;
  std::vector<std::pair<double, double>> osc;  // (scale, oscillation)
};
HolderFit holder_exponent(const ClosedFormScalar& f, const Point& center,
                          const std::vector<double>& scales,
                          int sphere_samples = 64);

// Max |f| over spheres of radius inner_radius and a few larger shells —
// the unboundedness probe (grows as inner_radius shrinks for blow-up f).
double sampled_sup(const ClosedFormScalar& f, const Domain& dom,
                   double inner_radius, int samples = 64);

// |b| as a scalar field (shares b's singular set) — adapter feeding vector
// fields into the scalar norms.
ClosedFormScalar magnitude_field(const ClosedFormVector& b);

}  // namespace driftlab
