#include "driftlab/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "driftlab/errors.hpp"
#include "driftlab/quadrature.hpp"
#include "driftlab/rng.hpp"

namespace driftlab {

// ============================================================================
// Smooth step
// ============================================================================

namespace {

// The C-infinity bump on (0,1); exactly zero outside.
double bump(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return std::exp(-1.0 / (s * (1.0 - s)));
}

double bump_prime(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  double u = s * (1.0 - s);
  return bump(s) * (1.0 - 2.0 * s) / (u * u);
}

double gauss8_panel(const std::function<double(double)>& f, double a,
                    double b) {
  const auto& rule = gauss_rule(8);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (const auto& [x, w] : rule) acc += w * f(mid + half * x);
  return acc * half;
}

}  // namespace

SmoothStep::SmoothStep() {
  prefix_.assign(kPanels + 1, 0.0);
  for (int k = 0; k < kPanels; ++k) {
    double a = double(k) / kPanels;
    double b = double(k + 1) / kPanels;
    prefix_[k + 1] = prefix_[k] + gauss8_panel(bump, a, b);
  }
  total_ = prefix_[kPanels];
}

double SmoothStep::cumulative(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return total_;
  int idx = std::min(int(s * kPanels), kPanels - 1);
  double a = double(idx) / kPanels;
  return prefix_[idx] + gauss8_panel(bump, a, s);
}

double SmoothStep::value(double t) const {
  if (t <= 0.5) return 0.0;
  if (t >= 1.0) return 1.0;
  return cumulative(2.0 * t - 1.0) / total_;
}

double SmoothStep::deriv(double t) const {
  if (t <= 0.5 || t >= 1.0) return 0.0;
  return 2.0 * bump(2.0 * t - 1.0) / total_;
}

double SmoothStep::second(double t) const {
  if (t <= 0.5 || t >= 1.0) return 0.0;
  return 4.0 * bump_prime(2.0 * t - 1.0) / total_;
}

const SmoothStep& step_function() {
  static const SmoothStep instance;
  return instance;
}

// ============================================================================
// Derived constants and parameter validation
// ============================================================================

DerivedConstants derive_constants(int n, double mu) {
  if (n < 3)
    throw ParamOutOfRange("derive_constants: construction needs n >= 3");
  double cap = std::min(2.0, double(n - 1));
  if (!(mu > 1.0 && mu < cap))
    throw ParamOutOfRange("derive_constants: mu must lie in (1, min(2, n-1))");

  DerivedConstants c;
  c.d_mu = 0.5 + std::pow(2.0, 3.0 - mu) / ((2.0 - mu) * (mu - 1.0));
  c.c1 = 1.0 / (6.0 * c.d_mu);
  // Each constant is the worse of its ramp-piece and power-piece bounds.
  c.c2 = std::max((2.0 - mu) * c.d_mu / 2.0,
                  (2.0 - mu) * std::pow(2.0, mu - 3.0) * c.d_mu);
  c.c3 = std::max((2.0 - mu) * std::pow(2.0, mu - 1.0), 2.0 - mu);
  c.K_min = std::max(4.0 * n / (n - mu - 1.0),
                     M_PI * M_PI * c.c2 + c.c3);
  return c;
}

BarrierParams BarrierParams::make(int n, double mu, double eps, double K,
                                  double p_target) {
  BarrierParams p;
  p.consts = derive_constants(n, mu);  // validates n and mu
  if (!(eps > 0.0 && eps < 0.5))
    throw ParamOutOfRange("BarrierParams: eps must lie in (0, 1/2)");
  if (!(K > 0.0)) throw ParamOutOfRange("BarrierParams: K must be positive");
  if (!(p_target >= 1.0 && p_target < double(n) / mu))
    throw ParamOutOfRange("BarrierParams: p_target must lie in [1, n/mu)");
  p.n = n;
  p.mu = mu;
  p.eps = eps;
  p.K = K;
  p.p_target = p_target;
  return p;
}

// ============================================================================
// Ramp profile f
// ============================================================================

namespace {

// Quadratic-piece coefficients on [eps, 2 eps]: h = A t^2 / 2 - B t + C.
struct RampCoeffs {
  double A, B, C, D;  // D = tail coefficient of t^{mu-2}
};

RampCoeffs ramp_coeffs(const BarrierParams& p) {
  double e = p.eps, mu = p.mu;
  RampCoeffs r;
  r.A = std::pow(e, -3.0) - std::pow(e, mu - 4.0);
  r.B = 2.0 * std::pow(e, -2.0) - std::pow(e, mu - 3.0);
  r.C = 2.0 / e + (2.0 / (2.0 - mu)) * std::pow(e, mu - 2.0);
  r.D = std::pow(2.0, 3.0 - mu) / (2.0 - mu);
  return r;
}

void require_ramp_domain(double z, const BarrierParams& p, const char* where) {
  if (z < p.eps * (1.0 - 1e-12) || z > 1.0 + 1e-12)
    throw OutOfDomain(std::string(where) + ": z outside [eps, 1]");
}

}  // namespace

double ramp_h(double t, const BarrierParams& p) {
  require_ramp_domain(t, p, "ramp_h");
  RampCoeffs r = ramp_coeffs(p);
  if (t <= 2.0 * p.eps) return 0.5 * r.A * t * t - r.B * t + r.C;
  return r.D * std::pow(t, p.mu - 2.0);
}

double ramp_h_prime(double t, const BarrierParams& p) {
  require_ramp_domain(t, p, "ramp_h_prime");
  RampCoeffs r = ramp_coeffs(p);
  if (t <= 2.0 * p.eps) return r.A * t - r.B;
  return -std::pow(2.0, 3.0 - p.mu) * std::pow(t, p.mu - 3.0);
}

double ramp_g(double z, const BarrierParams& p) {
  require_ramp_domain(z, p, "ramp_g");
  RampCoeffs r = ramp_coeffs(p);
  double e = p.eps;
  auto poly = [&](double t) {
    return r.A / 6.0 * (t * t * t - e * e * e) -
           r.B / 2.0 * (t * t - e * e) + r.C * (t - e);
  };
  if (z <= 2.0 * e) return poly(z);
  double g2e = poly(2.0 * e);
  return g2e + r.D / (p.mu - 1.0) *
                   (std::pow(z, p.mu - 1.0) - std::pow(2.0 * e, p.mu - 1.0));
}

RampValues f_eps(double z, const BarrierParams& p) {
  require_ramp_domain(z, p, "f_eps");
  z = std::clamp(z, p.eps, 1.0);
  double g1 = ramp_g(1.0, p);
  RampValues v;
  v.f = ramp_g(z, p) / g1;
  v.fp = ramp_h(z, p) / g1;
  v.fpp = ramp_h_prime(z, p) / g1;
  return v;
}

FPropertyCheck check_f_properties(const BarrierParams& p, int count) {
  if (count < 2) throw ParamOutOfRange("check_f_properties: count < 2");
  const DerivedConstants& c = p.consts;
  FPropertyCheck rep;
  rep.min_f = rep.min_fprime = std::numeric_limits<double>::infinity();
  rep.min_growth_margin = rep.min_damping_margin =
      std::numeric_limits<double>::infinity();

  auto growth = [&](double z, const RampValues& v) {
    return c.c2 * v.fp * std::pow(z, 2.0 - p.mu) - v.f;
  };
  auto damping = [&](double z, const RampValues& v) {
    return c.c3 * v.fp * std::pow(z, -p.mu) + v.fpp;
  };

  for (int i = 0; i < count; ++i) {
    double z = p.eps + (1.0 - p.eps) * double(i) / (count - 1);
    RampValues v = f_eps(z, p);
    rep.min_f = std::min(rep.min_f, v.f);
    rep.min_fprime = std::min(rep.min_fprime, v.fp);
    rep.min_growth_margin = std::min(rep.min_growth_margin, growth(z, v));
    rep.min_damping_margin = std::min(rep.min_damping_margin, damping(z, v));
  }
  rep.points = count;

  rep.f_at_eps = f_eps(p.eps, p).f;
  rep.f_at_2eps = f_eps(2.0 * p.eps, p).f;
  rep.f_at_one = f_eps(1.0, p).f;

  // The seam between the quadratic and power pieces, probed from both sides.
  double lo = 2.0 * p.eps * (1.0 - 1e-9), hi = 2.0 * p.eps * (1.0 + 1e-9);
  RampValues vlo = f_eps(lo, p), vhi = f_eps(hi, p);
  rep.seam_growth_lo = growth(lo, vlo);
  rep.seam_growth_hi = growth(hi, vhi);
  rep.seam_damping_lo = damping(lo, vlo);
  rep.seam_damping_hi = damping(hi, vhi);

  rep.pass = rep.min_f >= 0.0 && rep.min_fprime >= 0.0 &&
             rep.f_at_eps == 0.0 && rep.f_at_one == 1.0 &&
             rep.f_at_2eps >= c.c1 && rep.min_growth_margin >= 0.0 &&
             rep.min_damping_margin >= 0.0 && rep.seam_growth_lo >= 0.0 &&
             rep.seam_growth_hi >= 0.0 && rep.seam_damping_lo >= 0.0 &&
             rep.seam_damping_hi >= 0.0;
  return rep;
}

// ============================================================================
// Drift fields
// ============================================================================

namespace {

// Shared evaluation for b_eps (step factor in z supplied) and b_zero (that
// factor pinned at its plateau).  Plateau zeros are returned before z^{-mu}
// is formed, so the z = 0 plane never produces NaN.
AxiVec drift_kernel(double rho, double z, const BarrierParams& p,
                    double eta_e, double etap_e, double inv_eps) {
  if (eta_e == 0.0 && etap_e == 0.0) return {0.0, 0.0};
  const SmoothStep& eta = step_function();
  double t = rho > 0.0 ? z / rho : std::numeric_limits<double>::infinity();
  double eta_r, etap_r, slope_r;  // slope_r carries (z/rho) eta'(z/rho)
  if (t >= 1.0) {
    eta_r = 1.0;
    etap_r = 0.0;
    slope_r = 0.0;
  } else if (t <= 0.5) {
    return {0.0, 0.0};
  } else {
    eta_r = eta.value(t);
    etap_r = eta.deriv(t);
    slope_r = t * etap_r;
  }
  double zmu = std::pow(z, -p.mu);
  AxiVec b;
  b.rho = p.K * (-p.mu * rho * zmu / z * eta_e * eta_r +
                 rho * inv_eps * zmu * etap_e * eta_r +
                 zmu * eta_e * etap_r);
  b.z = -p.K * zmu * eta_e * ((p.n - 1) * eta_r - slope_r);
  return b;
}

void require_meridian(double rho, const char* where) {
  if (rho < 0.0)
    throw ParamOutOfRange(std::string(where) + ": rho must be >= 0");
}

}  // namespace

double H_eps(double rho, double z, const BarrierParams& p) {
  require_meridian(rho, "H_eps");
  if (z < 0.0) return -H_eps(rho, -z, p);
  const SmoothStep& eta = step_function();
  double eta_e = eta.value(z / p.eps);
  if (eta_e == 0.0) return 0.0;
  double t = rho > 0.0 ? z / rho : std::numeric_limits<double>::infinity();
  double eta_r = t >= 1.0 ? 1.0 : eta.value(t);
  if (eta_r == 0.0) return 0.0;
  return std::pow(rho, p.n - 1.0) * std::pow(z, -p.mu) * eta_e * eta_r;
}

AxiVec b_eps(double rho, double z, const BarrierParams& p) {
  require_meridian(rho, "b_eps");
  if (z < 0.0) {
    AxiVec mirror = b_eps(rho, -z, p);
    return {mirror.rho, -mirror.z};
  }
  const SmoothStep& eta = step_function();
  double te = z / p.eps;
  double eta_e, etap_e;
  if (te >= 1.0) {
    eta_e = 1.0;
    etap_e = 0.0;
  } else if (te <= 0.5) {
    return {0.0, 0.0};
  } else {
    eta_e = eta.value(te);
    etap_e = eta.deriv(te);
  }
  return drift_kernel(rho, z, p, eta_e, etap_e, 1.0 / p.eps);
}

AxiVec b_zero(double rho, double z, const BarrierParams& p) {
  require_meridian(rho, "b_zero");
  if (z == 0.0)
    throw SingularProbe("b_zero: undefined on the plane z = 0");
  if (z < 0.0) {
    AxiVec mirror = b_zero(rho, -z, p);
    return {mirror.rho, -mirror.z};
  }
  return drift_kernel(rho, z, p, 1.0, 0.0, 0.0);
}

AxiVec b_eps_cone(double rho, double z, const BarrierParams& p) {
  double zmu = std::pow(z, -p.mu);
  return {-p.mu * p.K * rho * zmu / z, -(p.n - 1.0) * p.K * zmu};
}

namespace {

// Split a Cartesian point into meridian coordinates (axis = last component).
void split_cartesian(const Vec& x, int n, double* rho, double* z) {
  double r2 = 0.0;
  for (int i = 0; i + 1 < n; ++i) r2 += x[i] * x[i];
  *rho = std::sqrt(r2);
  *z = x[n - 1];
}

Vec assemble_cartesian(const Vec& x, int n, double rho, const AxiVec& m) {
  Vec out = Vec::zero(n);
  if (rho > 0.0)
    for (int i = 0; i + 1 < n; ++i) out[i] = m.rho * x[i] / rho;
  out[n - 1] = m.z;
  return out;
}

}  // namespace

ClosedFormVector b_eps_field(const BarrierParams& p) {
  ClosedFormVector F;
  F.dim = p.n;
  F.name = "cone drift (mollified)";
  F.value = [p](const Vec& x) {
    double rho, z;
    split_cartesian(x, p.n, &rho, &z);
    return assemble_cartesian(x, p.n, rho, b_eps(rho, z, p));
  };
  F.divergence = [](const Vec&) { return 0.0; };  // curl construction
  F.singular = SingularSet::none();
  return F;
}

ClosedFormVector b_zero_field(const BarrierParams& p) {
  ClosedFormVector F;
  F.dim = p.n;
  F.name = "cone drift (sharp limit)";
  F.value = [p](const Vec& x) {
    double rho, z;
    split_cartesian(x, p.n, &rho, &z);
    return assemble_cartesian(x, p.n, rho, b_zero(rho, z, p));
  };
  F.divergence = [](const Vec&) { return 0.0; };
  F.singular = SingularSet::plane_z0();
  return F;
}

double max_fd_divergence(const ClosedFormVector& b, int probes, double h,
                         unsigned long long seed) {
  if (probes < 1) throw ParamOutOfRange("max_fd_divergence: probes < 1");
  Rng rng(seed);
  int n = b.dim;
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    Vec x = Vec::zero(n);
    for (int tries = 0;; ++tries) {
      double rho = rng.uniform(0.0, 0.9);
      double z = rng.uniform(-0.9, 0.9);
      Vec dir = rng.direction(n - 1);
      for (int i = 0; i + 1 < n; ++i) x[i] = rho * dir[i];
      x[n - 1] = z;
      if (b.singular.distance(x) >= 0.05) break;
      if (tries > 1000)
        throw ParamOutOfRange("max_fd_divergence: cannot place probes");
    }
    worst = std::max(worst, std::abs(fd_divergence(b.value, x, h, 4)));
  }
  return worst;
}

double envelope_ratio(const BarrierParams& p, int per_axis) {
  if (per_axis < 2) throw ParamOutOfRange("envelope_ratio: grid too small");
  double zlo = 0.45 * p.eps;  // just below the mollifier plateau edge
  double worst = 0.0;
  for (int i = 0; i < per_axis; ++i) {
    double z = zlo * std::pow(1.0 / zlo, double(i) / (per_axis - 1));
    for (int j = 0; j < per_axis; ++j) {
      // Sweep the supported sector rho <= 2z (capped by the cylinder wall).
      double rho = std::min(2.0 * z, 1.0) * double(j) / (per_axis - 1);
      AxiVec b = b_eps(rho, z, p);
      double mag = std::hypot(b.rho, b.z);
      worst = std::max(worst, mag * std::pow(z, p.mu) / p.K);
    }
  }
  return worst;
}

double lp_gap_to_limit(const BarrierParams& p, double p_exp) {
  if (!(p_exp >= 1.0))
    throw ParamOutOfRange("lp_gap_to_limit: exponent must be >= 1");
  double sigma = sphere_area(p.n - 1);
  // Difference vanishes for z >= eps (common plateau) and below the cone,
  // so integrate z in (0, eps) with the edge absorbed by z = eps t^2.
  auto outer = [&](double t) {
    double z = p.eps * t * t;
    if (z <= 0.0) return 0.0;
    auto inner = [&](double rho) {
      AxiVec a = b_eps(rho, z, p);
      AxiVec b = b_zero(rho, z, p);
      double dr = a.rho - b.rho, dz = a.z - b.z;
      double mag2 = dr * dr + dz * dz;
      return std::pow(mag2, 0.5 * p_exp) * std::pow(rho, p.n - 2.0);
    };
    double w = integrate_interval(inner, 0.0, std::min(2.0 * z, 1.0),
                                  QuadratureSpec::gauss(24, 8));
    return w * 2.0 * p.eps * t;  // dz = 2 eps t dt
  };
  double half = integrate_interval(outer, 0.0, 1.0,
                                   QuadratureSpec::gauss(48, 8));
  return std::pow(2.0 * sigma * half, 1.0 / p_exp);
}

// ============================================================================
// Barrier and the comparison inequality
// ============================================================================

namespace {

// cos(pi s / 2) with the cone edge s = 1 sent to an exact zero, so the
// Dirichlet identity v = 0 on {rho = z} holds in floating point.
double cone_cos(double s) {
  return s == 1.0 ? 0.0 : std::cos(0.5 * M_PI * s);
}

}  // namespace

BarrierValue v_eps(double rho, double z, const BarrierParams& p) {
  if (rho < 0.0 || z < p.eps * (1.0 - 1e-12) || z > 1.0 + 1e-12 ||
      rho > z * (1.0 + 1e-12))
    throw OutOfDomain("v_eps: point outside the truncated cone");
  z = std::clamp(z, p.eps, 1.0);
  rho = std::min(rho, z);

  RampValues f = f_eps(z, p);
  double s = rho / z;
  double theta = 0.5 * M_PI * s;
  double c = cone_cos(s);
  double sn = std::sin(theta);
  double pi_2z = 0.5 * M_PI / z;

  BarrierValue v;
  v.v = f.f * c;
  v.d_rho = -pi_2z * f.f * sn;
  double z2 = z * z, z3 = z2 * z, z4 = z2 * z2;
  v.d_z = f.fp * c + 0.5 * M_PI * rho / z2 * f.f * sn;
  double d2_rho = -0.25 * M_PI * M_PI / z2 * f.f * c;
  double d2_z = f.fpp * c + M_PI * rho / z2 * f.fp * sn -
                M_PI * rho / z3 * f.f * sn -
                0.25 * M_PI * M_PI * rho * rho / z4 * f.f * c;
  // (1/rho) d_rho via the sinc limit so the axis is a regular point.
  double sinc = theta < 1e-8 ? 1.0 : sn / theta;
  double radial = -0.25 * M_PI * M_PI / z2 * f.f * sinc;
  v.lap = d2_rho + (p.n - 2.0) * radial + d2_z;
  return v;
}

double barrier_defect(double rho, double z, const BarrierParams& p) {
  BarrierValue v = v_eps(rho, z, p);
  AxiVec b = b_eps_cone(rho, z, p);
  return v.lap - (b.rho * v.d_rho + b.z * v.d_z);
}

BarrierCheck check_barrier_inequality(const BarrierParams& p, int count) {
  if (count < 2)
    throw ParamOutOfRange("check_barrier_inequality: count < 2");
  BarrierCheck rep;
  rep.min_value = rep.min_inner = rep.min_outer =
      std::numeric_limits<double>::infinity();

  auto visit = [&](double rho, double z) {
    double d = barrier_defect(rho, z, p);
    if (d < rep.min_value) {
      rep.min_value = d;
      rep.argmin_rho = rho;
      rep.argmin_z = z;
    }
    if (rho <= 0.5 * z)
      rep.min_inner = std::min(rep.min_inner, d);
    else
      rep.min_outer = std::min(rep.min_outer, d);
    ++rep.samples;
  };

  // Low-discrepancy cover of the truncated cone in (z, rho/z) coordinates.
  for (int i = 1; i <= count; ++i) {
    double z = p.eps + (1.0 - p.eps) * radical_inverse(i, 2);
    double s = radical_inverse(i, 3);
    visit(s * z, z);
  }
  // Structured edges: the axis and the near-cone rim.
  for (int k = 0; k <= 32; ++k) {
    double z = p.eps + (1.0 - p.eps) * double(k) / 32.0;
    visit(0.0, z);
    visit(0.999 * z, z);
  }
  return rep;
}

}  // namespace driftlab
