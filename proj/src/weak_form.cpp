#include "driftlab/weak_form.hpp"

#include <cmath>
#include <memory>

#include "driftlab/errors.hpp"
#include "driftlab/norms.hpp"

namespace driftlab {

namespace {

// ============================================================================
// Mollifier profile.  phi(t) = exp(1 - 1/(1 - t^2)) inside |t| < 1, zero
// outside.  The slightly early cutoff keeps 1/(1-t^2)^2 finite in doubles;
// at that point phi has already underflowed to zero anyway.
// ============================================================================

constexpr double kEdge = 1.0 - 1e-12;

double profile(double t2) {
  if (t2 >= kEdge) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t2));
}

// phi'(t)/t = -2/(1-t^2)^2 * phi(t), smooth through t = 0.
double profile_slope_over_t(double t2) {
  if (t2 >= kEdge) return 0.0;
  double u = 1.0 - t2;
  return -2.0 / (u * u) * profile(t2);
}

// phi''(t) = phi(t) * (4t^2/(1-t^2)^4 - 2/(1-t^2)^2 - 8t^2/(1-t^2)^3).
double profile_second(double t2) {
  if (t2 >= kEdge) return 0.0;
  double u = 1.0 - t2;
  double u2 = u * u;
  double factor = 4.0 * t2 / (u2 * u2) - 2.0 / u2 - 8.0 * t2 / (u2 * u);
  return profile(t2) * factor;
}

std::vector<int> refine_levels(const QuadratureSpec& q) {
  int c = std::max(8, q.cells_per_axis);
  return {std::max(2, c / 4), std::max(4, c / 2), c};
}

void require_support(const Domain& dom, const BumpFunction& h,
                     const char* what) {
  if (h.dim != dom.dim)
    throw BadDimension(std::string(what) + ": dimension mismatch");
  if (boundary_clearance(dom, h.center) < h.radius - 1e-12)
    throw SupportViolation(std::string(what) +
                           ": test function support leaves the domain");
}

// FD spot check that b is divergence-free near the supports.  Probes that
// would put the stencil on top of b's singular set are skipped; the analytic
// claim concerns the complement of that set.
void require_div_free(const ClosedFormVector& b, const BumpFunction& phi,
                      const BumpFunction& psi) {
  Rng rng(4242);
  const double h = 1e-4;
  int checked = 0;
  for (int tries = 0; tries < 64 && checked < 8; ++tries) {
    const BumpFunction& bump = (tries % 2 == 0) ? phi : psi;
    Vec p = rng.in_ball(bump.radius, bump.dim, bump.center);
    if (b.singular.distance(p) < 0.05) continue;
    double div = fd_divergence(b.value, p, h, 4);
    if (std::abs(div) > 1e-6)
      throw NotDivergenceFree("trilinear form: FD divergence " +
                              std::to_string(div) + " at a probe point");
    ++checked;
  }
}

WeakFormResult refine_integral(const Integrand& g, const Domain& supp,
                               const QuadratureSpec& q) {
  WeakFormResult out;
  for (int cells : refine_levels(q)) {
    QuadratureSpec ql = q;
    ql.cells_per_axis = cells;
    out.trail.emplace_back(cells, integrate(g, supp, ql).value);
  }
  out.value = out.trail.back().second;
  return out;
}

}  // namespace

// ============================================================================
// BumpFunction
// ============================================================================

BumpFunction::BumpFunction(const Point& c, double r) : center(c), radius(r) {
  if (!(r > 0.0)) throw ParamOutOfRange("BumpFunction: radius must be > 0");
  if (c.dim < 1) throw BadDimension("BumpFunction: empty center point");
  dim = c.dim;
}

double BumpFunction::value(const Vec& x) const {
  Vec d = x - center;
  return profile(d.norm2() / (radius * radius));
}

Vec BumpFunction::gradient(const Vec& x) const {
  Vec d = x - center;
  double r2 = radius * radius;
  double s = profile_slope_over_t(d.norm2() / r2) / r2;
  return d * s;
}

double BumpFunction::laplacian(const Vec& x) const {
  Vec d = x - center;
  double r2 = radius * radius;
  double t2 = d.norm2() / r2;
  // lap h = (phi'' + (n-1) phi'/t) / radius^2, with the smooth phi'/t form
  return (profile_second(t2) + (dim - 1) * profile_slope_over_t(t2)) / r2;
}

ClosedFormScalar BumpFunction::as_scalar() const {
  BumpFunction copy = *this;
  ClosedFormScalar f;
  f.dim = dim;
  f.name = "bump";
  f.value = [copy](const Vec& x) { return copy.value(x); };
  f.gradient = [copy](const Vec& x) { return copy.gradient(x); };
  f.laplacian = [copy](const Vec& x) { return copy.laplacian(x); };
  return f;
}

// ============================================================================
// Stream potentials
// ============================================================================

ClosedFormVector StreamField2D::induced() const {
  if (omega.dim != 2) throw BadDimension("stream potential must be planar");
  if (!omega.gradient)
    throw ParamOutOfRange("stream potential needs a gradient");
  ClosedFormVector b;
  b.dim = 2;
  b.name = omega.name + " induced drift";
  b.singular = omega.singular;
  auto grad = omega.gradient;
  b.value = [grad](const Vec& x) {
    Vec g = grad(x);
    return Vec{g[1], -g[0]};
  };
  b.divergence = [](const Vec&) { return 0.0; };
  return b;
}

StreamField2D polynomial_stream(Rng& rng, int degree) {
  if (degree < 1 || degree > 12)
    throw ParamOutOfRange("polynomial_stream: degree in [1, 12]");
  struct Term {
    int i, j;
    double c;
  };
  auto terms = std::make_shared<std::vector<Term>>();
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; i + j <= degree; ++j)
      terms->push_back({i, j, rng.uniform(-1.0, 1.0)});

  auto ipow = [](double x, int k) {
    double v = 1.0;
    for (int m = 0; m < k; ++m) v *= x;
    return v;
  };
  StreamField2D s;
  s.omega.dim = 2;
  s.omega.name = "polynomial stream";
  s.omega.value = [terms, ipow](const Vec& p) {
    double v = 0.0;
    for (const auto& t : *terms) v += t.c * ipow(p[0], t.i) * ipow(p[1], t.j);
    return v;
  };
  s.omega.gradient = [terms, ipow](const Vec& p) {
    Vec g = Vec::zero(2);
    for (const auto& t : *terms) {
      if (t.i > 0) g[0] += t.c * t.i * ipow(p[0], t.i - 1) * ipow(p[1], t.j);
      if (t.j > 0) g[1] += t.c * t.j * ipow(p[0], t.i) * ipow(p[1], t.j - 1);
    }
    return g;
  };
  return s;
}

StreamField2D loglog_stream() {
  StreamField2D s;
  s.omega.dim = 2;
  s.omega.name = "iterated-log stream";
  s.omega.singular = SingularSet::origin();
  s.omega.value = [](const Vec& p) {
    return std::log(-std::log(p.norm()));
  };
  s.omega.gradient = [](const Vec& p) {
    double r2 = p.norm2();
    double lnr = 0.5 * std::log(r2);
    return p * (1.0 / (r2 * lnr));
  };
  return s;
}

// ============================================================================
// Weak-form residuals
// ============================================================================

WeakFormResult weak_residual_grad_form(const ClosedFormScalar& u,
                                       const ClosedFormVector& b,
                                       const BumpFunction& h, const Domain& dom,
                                       const QuadratureSpec& q) {
  require_support(dom, h, "grad-form residual");
  if (u.dim != dom.dim || b.dim != dom.dim)
    throw BadDimension("grad-form residual: field dimensions disagree");
  if (!u.gradient)
    throw ParamOutOfRange("grad-form residual needs grad u in closed form");
  auto g = [&](const Vec& x) {
    Vec gu = u.gradient(x);
    double hv = h.value(x);
    Vec gh = h.gradient(x);
    return dot(gu, gh) + hv * dot(gu, b.value(x));
  };
  return refine_integral(g, h.support(), q);
}

WeakFormResult weak_residual_div_form(const ClosedFormScalar& u,
                                      const ClosedFormVector& b,
                                      const BumpFunction& h, const Domain& dom,
                                      const QuadratureSpec& q) {
  require_support(dom, h, "div-form residual");
  if (u.dim != dom.dim || b.dim != dom.dim)
    throw BadDimension("div-form residual: field dimensions disagree");
  auto g = [&](const Vec& x) {
    double uv = u.value(x);
    return uv * (h.laplacian(x) + dot(b.value(x), h.gradient(x)));
  };
  return refine_integral(g, h.support(), q);
}

// ============================================================================
// Trilinear form
// ============================================================================

double trilinear_form(const ClosedFormVector& b, const BumpFunction& phi,
                      const BumpFunction& psi, const Domain& dom,
                      const QuadratureSpec& q) {
  require_support(dom, phi, "trilinear form");
  require_support(dom, psi, "trilinear form");
  if (b.dim != dom.dim)
    throw BadDimension("trilinear form: drift dimension disagrees");
  require_div_free(b, phi, psi);
  auto g = [&](const Vec& x) {
    double pv = psi.value(x);
    if (pv == 0.0) return 0.0;  // cheap short-circuit outside supp psi
    return dot(b.value(x), phi.gradient(x)) * pv;
  };
  return integrate(g, phi.support(), q).value;
}

double rayleigh_quotient(const ClosedFormVector& b, const BumpFunction& phi,
                         const BumpFunction& psi, const Domain& dom,
                         const QuadratureSpec& q) {
  double T = trilinear_form(b, phi, psi, dom, q);
  double bn = lp_norm(magnitude_field(b), dom, 2.0, q).value;
  auto grad_energy = [&](const BumpFunction& f) {
    auto g = [&f](const Vec& x) { return f.gradient(x).norm2(); };
    return std::sqrt(integrate(g, f.support(), q).value);
  };
  double den = bn * grad_energy(phi) * grad_energy(psi);
  if (den == 0.0) return 0.0;
  return std::abs(T) / den;
}

RayleighSweepResult rayleigh_sweep(
    const std::vector<StreamField2D>& streams,
    const std::vector<std::pair<BumpFunction, BumpFunction>>& pairs,
    const Domain& dom, const QuadratureSpec& q) {
  RayleighSweepResult out;
  for (const auto& s : streams) {
    ClosedFormVector b = s.induced();
    for (const auto& pr : pairs) {
      double r = rayleigh_quotient(b, pr.first, pr.second, dom, q);
      out.quotients.push_back(r);
      out.max_quotient = std::max(out.max_quotient, r);
    }
  }
  return out;
}

}  // namespace driftlab
