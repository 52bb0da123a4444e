#include "driftlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "driftlab/errors.hpp"
#include "driftlab/rng.hpp"

namespace driftlab {

namespace {

// ============================================================================
// Shared helpers
// ============================================================================

bool origin_singular(const ClosedFormScalar& f, const Domain& dom) {
  return f.singular.description != "none" &&
         dom.contains(Point::zero(dom.dim));
}

std::string fmt_params(const std::string& s) { return s; }

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Geometric-Cauchy test on the last three trail values: the trail fails
// (diverges) when the latest increment does not shrink by at least a factor
// of two, above an absolute noise floor.
bool trail_diverges(const std::vector<double>& vals, double scale) {
  if (vals.size() < 3) return false;
  size_t m = vals.size();
  double d1 = std::abs(vals[m - 2] - vals[m - 3]);
  double d2 = std::abs(vals[m - 1] - vals[m - 2]);
  double floor = 1e-9 * std::max(1.0, std::abs(scale));
  if (d2 <= floor) return false;
  return d2 > 0.5 * d1;
}

std::vector<int> refine_levels(const QuadratureSpec& q) {
  int c = std::max(8, q.cells_per_axis);
  return {std::max(2, c / 4), std::max(4, c / 2), c};
}

double hole_integral(const Integrand& g, const Domain& dom,
                     const QuadratureSpec& q, double delta) {
  if (delta > 0.0)
    return integrate(g, dom, q.refined_at(Point::zero(dom.dim), delta)).value;
  return integrate(g, dom, q).value;
}

Vec sample_center(Rng& rng, const Domain& dom) {
  if (dom.kind == Domain::Kind::Ball)
    return rng.in_ball(dom.radius, dom.dim, dom.center);
  Vec xp = rng.in_ball(1.0, dom.dim - 1);
  Vec p = Vec::zero(dom.dim);
  for (int i = 0; i < dom.dim - 1; ++i) p[i] = xp[i];
  double zlo = (dom.kind == Domain::Kind::HalfCylinder) ? 0.0 : -1.0;
  p[dom.dim - 1] = rng.uniform(zlo, 1.0);
  return p;
}

// First center of every sampling stream: a canonical interior anchor.
Vec anchor_center(const Domain& dom) {
  if (dom.kind == Domain::Kind::HalfCylinder) {
    Vec p = Vec::zero(dom.dim);
    p[dom.dim - 1] = 0.5;
    return p;
  }
  if (dom.kind == Domain::Kind::Ball) return dom.center;
  return Vec::zero(dom.dim);
}

// Quadrature used inside the sampled-sup ball integrals: cheap and fixed, so
// the sup stays deterministic and the sampling budget dominates the cost.
QuadratureSpec sampling_quad() { return QuadratureSpec::gauss(8, 2); }

// Cutoff radius around an origin singularity inside a sampling ball.  An
// origin-centered ball integrates on a graded radial chart whose excluded
// measure is closed form, so the cutoff can sit very tight.  An off-center
// ball excises by skipping nodes, and a node that survives just outside a
// tight cutoff would dominate its whole cell; a wider margin caps that cell's
// share at a fraction of a percent of the ball integral.
double excision_radius(const Domain& ball) {
  bool centered = ball.center.norm() <= 1e-12 * ball.radius;
  return centered ? 1e-4 * ball.radius : 0.125 * ball.radius;
}

// Excised variant of the sampling quadrature when f blows up at the origin
// and the sampling ball reaches it.
QuadratureSpec sampling_quad_for(const Domain& ball, bool f_singular) {
  QuadratureSpec qs = sampling_quad();
  if (f_singular && ball.contains(Point::zero(ball.dim)))
    qs = qs.refined_at(Point::zero(ball.dim), excision_radius(ball));
  return qs;
}

// |f|^q over a sampling ball, excising the origin when f blows up there.
double ball_power_integral(const ClosedFormScalar& f, const Domain& ball,
                           double q_exp, bool f_singular) {
  auto g = [&](const Vec& x) {
    return std::pow(std::abs(f.value(x)), q_exp);
  };
  return integrate(g, ball, sampling_quad_for(ball, f_singular)).value;
}

}  // namespace

// ============================================================================
// Lp and Sobolev
// ============================================================================

NormReport lp_norm(const ClosedFormScalar& f, const Domain& dom, double p,
                   const QuadratureSpec& q) {
  if (!(p >= 1.0)) throw ParamOutOfRange("lp_norm: p must be >= 1");
  if (!f.value) throw ParamOutOfRange("lp_norm: field has no value fn");
  auto g = [&f, p](const Vec& x) {
    return std::pow(std::abs(f.value(x)), p);
  };
  NormReport rep;
  rep.kind = "lp";
  rep.params = fmt_params("p=" + fmt_real(p));
  const bool sing = origin_singular(f, dom);
  const auto levels = refine_levels(q);
  const double deltas[] = {1e-2, 1e-3, 1e-4};
  const double final_delta = sing ? deltas[2] : 0.0;

  for (int cells : levels) {
    QuadratureSpec ql = q;
    ql.cells_per_axis = cells;
    double v = std::pow(hole_integral(g, dom, ql, final_delta), 1.0 / p);
    rep.refine_trail.emplace_back(cells, v);
  }
  if (sing) {
    std::vector<double> trail;
    for (double d : deltas) {
      double v = std::pow(hole_integral(g, dom, q, d), 1.0 / p);
      rep.delta_trail.emplace_back(d, v);
      trail.push_back(v);
    }
    rep.value = trail.back();
    rep.inner_cutoff = final_delta;
    rep.diverging = trail_diverges(trail, trail.back());
  } else {
    rep.value = rep.refine_trail.back().second;
  }
  return rep;
}

NormReport w12_seminorm(const ClosedFormScalar& f, const Domain& dom,
                        const QuadratureSpec& q) {
  if (!f.gradient) throw ParamOutOfRange("w12_seminorm: no gradient");
  ClosedFormScalar gmag;
  gmag.dim = f.dim;
  gmag.name = f.name + " gradient magnitude";
  gmag.singular = f.singular;
  auto grad = f.gradient;
  gmag.value = [grad](const Vec& x) { return grad(x).norm(); };
  NormReport rep = lp_norm(gmag, dom, 2.0, q);
  rep.kind = "w12";
  rep.params = "";
  return rep;
}

// ============================================================================
// Orlicz L2-log
// ============================================================================

NormReport orlicz_l2ln_norm(const ClosedFormScalar& f, const Domain& dom,
                            const QuadratureSpec& q, const OrliczConfig& cfg) {
  if (!(cfg.k_lo > 0.0) || !(cfg.k_hi > cfg.k_lo))
    throw ParamOutOfRange("orlicz: need 0 < k_lo < k_hi");
  auto G = [&](double k, double delta, const QuadratureSpec& qs) {
    auto g = [&f, k](const Vec& x) {
      double t = f.value(x) / k;
      double t2 = t * t;
      return t2 * std::log1p(t2);
    };
    return hole_integral(g, dom, qs, delta);
  };
  NormReport rep;
  rep.kind = "orlicz-l2ln";
  rep.params = fmt_params("k_hi=" + fmt_real(cfg.k_hi));
  const bool sing = origin_singular(f, dom);
  const double final_delta = sing ? 1e-4 : 0.0;
  rep.inner_cutoff = final_delta;

  if (G(cfg.k_hi, final_delta, q) > 1.0)
    throw BracketFailure("orlicz: integral exceeds 1 at k_hi");

  auto bisect = [&](double delta, const QuadratureSpec& qs) {
    double glo = G(cfg.k_lo, delta, qs);
    if (glo == 0.0) return 0.0;  // f vanishes on the domain
    if (glo <= 1.0) return cfg.k_lo;
    double lo = cfg.k_lo, hi = cfg.k_hi;
    while (hi - lo > cfg.tol) {
      double mid = 0.5 * (lo + hi);
      if (G(mid, delta, qs) <= 1.0)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  };

  if (sing) {
    // Divergence evidence: the truncated norm itself must be Cauchy in the
    // cutoff.  (The raw integral at a fixed k is useless for this: far from
    // the unit level set it is vanishingly small even when the norm grows.)
    std::vector<double> trail;
    for (double d : {1e-2, 1e-3, 1e-4}) {
      double v = bisect(d, q);
      rep.delta_trail.emplace_back(d, v);
      trail.push_back(v);
    }
    rep.diverging = trail_diverges(trail, trail.back());
  }

  for (int cells : refine_levels(q)) {
    QuadratureSpec ql = q;
    ql.cells_per_axis = cells;
    rep.refine_trail.emplace_back(cells, bisect(final_delta, ql));
  }
  rep.value = rep.refine_trail.back().second;
  return rep;
}

// ============================================================================
// Morrey / BMO sampled suprema
// ============================================================================

namespace {

struct SampledSup {
  std::vector<std::pair<int, double>> prefix_trail;  // (centers, sup)
  double sup = 0.0;
};

// Walks the deterministic center stream, evaluates `ball_value` on dyadic
// radii under each center's clearance, and records prefix suprema so the
// monotone-in-budget property is visible in the report.
template <typename BallValue>
SampledSup sampled_ball_sup(const Domain& dom, const SamplingPlan& plan,
                            BallValue&& ball_value) {
  if (plan.centers < 1 || plan.radii < 1)
    throw ParamOutOfRange("sampling plan needs >= 1 center and radius");
  Rng rng(plan.seed);
  SampledSup out;
  double sup = 0.0;
  std::vector<int> marks = {std::max(1, plan.centers / 4),
                            std::max(1, plan.centers / 2), plan.centers};
  int next_mark = 0;
  for (int c = 0; c < plan.centers; ++c) {
    Vec x = (c == 0) ? anchor_center(dom) : sample_center(rng, dom);
    double rmax = boundary_clearance(dom, x);
    double r = rmax;
    for (int j = 0; j < plan.radii; ++j, r *= 0.5) {
      if (r < 1e-6) break;
      sup = std::max(sup, ball_value(x, r));
    }
    while (next_mark < int(marks.size()) && c + 1 == marks[next_mark]) {
      out.prefix_trail.emplace_back(marks[next_mark], sup);
      ++next_mark;
    }
  }
  while (next_mark < int(marks.size())) {
    out.prefix_trail.emplace_back(marks[next_mark], sup);
    ++next_mark;
  }
  out.sup = sup;
  return out;
}

}  // namespace

NormReport morrey_norm(const ClosedFormScalar& f, const Domain& dom,
                       double q_exp, double alpha, const SamplingPlan& plan,
                       const QuadratureSpec&) {
  if (!(q_exp >= 1.0)) throw ParamOutOfRange("morrey: q must be >= 1");
  if (!(alpha >= 0.0)) throw ParamOutOfRange("morrey: alpha must be >= 0");
  const bool sing = f.singular.description != "none";
  auto ball_value = [&](const Vec& x, double r) {
    Domain ball = Domain::ball(r, dom.dim, x);
    double integral = ball_power_integral(f, ball, q_exp, sing);
    return std::pow(r, -alpha) * std::pow(integral, 1.0 / q_exp);
  };
  SampledSup s = sampled_ball_sup(dom, plan, ball_value);
  NormReport rep;
  rep.kind = "morrey";
  rep.params =
      fmt_params("q=" + fmt_real(q_exp) + " alpha=" + fmt_real(alpha));
  rep.value = s.sup;
  rep.refine_trail = std::move(s.prefix_trail);
  return rep;
}

NormReport bmo_seminorm(const ClosedFormScalar& f, const Domain& dom,
                        const SamplingPlan& plan, const QuadratureSpec&) {
  const bool sing = f.singular.description != "none";
  auto ball_value = [&](const Vec& x, double r) {
    Domain ball = Domain::ball(r, dom.dim, x);
    QuadratureSpec qs = sampling_quad_for(ball, sing);
    // quadrature-consistent normalization: same nodes for measure and mean
    double meas = integrate([](const Vec&) { return 1.0; }, ball, qs).value;
    if (meas <= 0.0) return 0.0;
    double mean =
        integrate([&](const Vec& y) { return f.value(y); }, ball, qs).value /
        meas;
    double osc = integrate([&](const Vec& y) {
                   return std::abs(f.value(y) - mean);
                 }, ball, qs).value /
                 meas;
    return osc;
  };
  SampledSup s = sampled_ball_sup(dom, plan, ball_value);
  NormReport rep;
  rep.kind = "bmo";
  rep.params = "";
  rep.value = s.sup;
  rep.refine_trail = std::move(s.prefix_trail);
  return rep;
}

// ============================================================================
// Holder exponent and the unboundedness probe
// ============================================================================

HolderFit holder_exponent(const ClosedFormScalar& f, const Point& center,
                          const std::vector<double>& scales,
                          int sphere_samples) {
  if (scales.size() < 4)
    throw ParamOutOfRange("holder_exponent: need >= 4 scales");
  if (sphere_samples < 4)
    throw ParamOutOfRange("holder_exponent: need >= 4 sphere samples");
  const int n = f.dim;
  auto dirs = sphere_directions(n, sphere_samples);
  HolderFit fit;
  std::vector<double> xs, ys;
  for (double r : scales) {
    if (!(r > 0.0)) throw ParamOutOfRange("holder_exponent: scales > 0");
    double lo = f.value(center), hi = lo;
    for (const Vec& d : dirs) {
      double v = f.value(center + d * r);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    double osc = hi - lo;
    fit.osc.emplace_back(r, osc);
    if (osc > 0.0) {
      xs.push_back(std::log(r));
      ys.push_back(std::log(osc));
    }
  }
  if (xs.size() < 2) {
    fit.degenerate = true;
    fit.alpha_hat = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  double xm = 0, ym = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= xs.size();
  ym /= ys.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - xm) * (ys[i] - ym);
    den += (xs[i] - xm) * (xs[i] - xm);
  }
  fit.alpha_hat = num / den;
  double intercept = ym - fit.alpha_hat * xm;
  double rss = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (intercept + fit.alpha_hat * xs[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / xs.size());
  return fit;
}

double sampled_sup(const ClosedFormScalar& f, const Domain& dom,
                   double inner_radius, int samples) {
  if (!(inner_radius > 0.0))
    throw ParamOutOfRange("sampled_sup: inner_radius > 0");
  auto dirs = sphere_directions(dom.dim, samples);
  double sup = 0.0;
  Vec base = (dom.kind == Domain::Kind::Ball) ? dom.center
                                              : Vec::zero(dom.dim);
  for (double r = inner_radius; ; r *= 2.0) {
    bool any = false;
    for (const Vec& d : dirs) {
      Vec p = base + d * r;
      if (!dom.contains(p)) continue;
      any = true;
      sup = std::max(sup, std::abs(f.value(p)));
    }
    if (!any) break;
  }
  return sup;
}

ClosedFormScalar magnitude_field(const ClosedFormVector& b) {
  ClosedFormScalar f;
  f.dim = b.dim;
  f.name = b.name + " magnitude";
  f.singular = b.singular;
  auto val = b.value;
  f.value = [val](const Vec& x) { return val(x).norm(); };
  return f;
}

}  // namespace driftlab
