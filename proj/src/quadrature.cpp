#include "driftlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "driftlab/errors.hpp"
#include "driftlab/rng.hpp"

namespace driftlab {

// ============================================================================
// Gauss-Legendre rules
// ============================================================================

const std::vector<std::pair<double, double>>& gauss_rule(int order) {
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  if (order < 1 || order > 64)
    throw ParamOutOfRange("gauss order must be in [1, 64], got " +
                          std::to_string(order));

  const int n = order;
  std::vector<std::pair<double, double>> rule(n);
  // Roots of P_n by Newton iteration on the three-term recurrence.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 128; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule[i] = {-x, w};          // ascending order: negative roots first
    rule[n - 1 - i] = {x, w};
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

namespace {

// ============================================================================
// Tensor engine
// ============================================================================

struct Accum {
  double sum = 0.0, comp = 0.0;
  void add(double x) {  // Kahan compensated summation
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

struct Axis {
  std::vector<double> edges;  // strictly increasing, cells = edges.size()-1
  static Axis uniform(double a, double b, int m) {
    Axis ax;
    ax.edges.resize(m + 1);
    for (int i = 0; i <= m; ++i) ax.edges[i] = a + (b - a) * double(i) / m;
    return ax;
  }
  int cells() const { return int(edges.size()) - 1; }
};

const std::vector<std::pair<double, double>>& rule_for(const QuadratureSpec& q) {
  if (q.scheme == QuadScheme::TensorMidpoint) {
    static const std::vector<std::pair<double, double>> mid = {{0.0, 2.0}};
    return mid;
  }
  return gauss_rule(q.order);
}

// A chart maps per-axis coordinates to a point in R^n and returns the
// Jacobian factor of the coordinate change.
using Chart = std::function<double(const double*, Vec&)>;

// Optional node-skip predicate for excised holes that have no exact
// coordinate-aligned representation.
using SkipPred = std::function<bool(const Vec&)>;

struct RegionSums {
  Accum value;
  Accum skipped;  // measure carried by skipped nodes
  long long evaluations = 0;
};

void integrate_region(const Integrand& f, const std::vector<Axis>& axes,
                      const Chart& chart, const QuadratureSpec& q,
                      const SkipPred& skip, int dim, RegionSums& out) {
  const auto& rule = rule_for(q);
  const int k = int(axes.size());
  const int nn = int(rule.size());

  std::vector<int> ci(k, 0);   // cell multi-index
  std::vector<int> ni(k, 0);   // node multi-index within cell
  std::vector<double> pos(k), wgt(k), mid(k), half(k);
  std::vector<double> coords(k);
  Vec p = Vec::zero(dim);

  while (true) {
    for (int a = 0; a < k; ++a) {
      double lo = axes[a].edges[ci[a]], hi = axes[a].edges[ci[a] + 1];
      mid[a] = 0.5 * (lo + hi);
      half[a] = 0.5 * (hi - lo);
    }
    std::fill(ni.begin(), ni.end(), 0);
    while (true) {
      double w = 1.0;
      for (int a = 0; a < k; ++a) {
        coords[a] = mid[a] + half[a] * rule[ni[a]].first;
        w *= half[a] * rule[ni[a]].second;
      }
      double jac = chart(coords.data(), p);
      double full_w = w * jac;
      if (skip && skip(p)) {
        out.skipped.add(full_w);
      } else {
        double fv = f(p);
        ++out.evaluations;
        if (!std::isfinite(fv)) {
          std::ostringstream os;
          os << "integrand not finite at (";
          for (int d = 0; d < dim; ++d) os << (d ? ", " : "") << p[d];
          os << ")";
          throw NonFiniteSample(os.str());
        }
        out.value.add(full_w * fv);
      }
      int a = k - 1;
      while (a >= 0 && ++ni[a] == nn) ni[a--] = 0;
      if (a < 0) break;
    }
    int a = k - 1;
    while (a >= 0 && ++ci[a] == axes[a].cells()) ci[a--] = 0;
    if (a < 0) break;
  }
}

// ============================================================================
// Ball chart: spherical coordinates about the ball's own center
//   coords = (r, phi_1..phi_{n-1}),  phi_1..phi_{n-2} in [0,pi],
//   phi_{n-1} in [0,2pi);  J = r^{n-1} sin^{n-2}(phi_1)...sin(phi_{n-2}).
// ============================================================================

Chart ball_chart(int n, const Vec& center) {
  return [n, center](const double* c, Vec& p) -> double {
    double r = c[0];
    double jac = 1.0;
    for (int i = 0; i < n - 1; ++i) jac *= r;
    double s = 1.0;
    for (int j = 1; j <= n - 1; ++j) {
      double a = c[j];
      if (j <= n - 2) {
        p[j - 1] = r * s * std::cos(a);
        for (int e = 0; e < n - 1 - j; ++e) jac *= std::sin(a);
        s *= std::sin(a);
      } else {
        p[j - 1] = r * s * std::cos(a);
        p[j] = r * s * std::sin(a);
      }
    }
    for (int d = 0; d < n; ++d) p[d] += center[d];
    return jac;
  };
}

int angular_cells(int n, int cells_per_axis) {
  if (n == 2) return cells_per_axis;
  if (n == 3) return std::max(8, cells_per_axis / 4);
  return 8;  // high-dimension angular axes: Gauss converges spectrally
}

// Dyadically graded radial edges on [delta, R]; `annuli` > 0 forces a
// geometric split with that many bands instead.
std::vector<double> graded_edges(double delta, double R, int annuli,
                                 int cells_per_axis) {
  std::vector<double> bands;
  bands.push_back(delta);
  if (annuli > 0) {
    double ratio = std::pow(R / delta, 1.0 / annuli);
    double t = delta;
    for (int k = 1; k < annuli; ++k) {
      t *= ratio;
      bands.push_back(t);
    }
    bands.push_back(R);
  } else {
    double t = delta;
    while (t < R) {
      t = std::min(t * 2.0, R);
      bands.push_back(t);
    }
  }
  int per = std::max(4, cells_per_axis / 8);
  std::vector<double> edges;
  edges.push_back(bands[0]);
  for (size_t b = 0; b + 1 < bands.size(); ++b)
    for (int i = 1; i <= per; ++i)
      edges.push_back(bands[b] + (bands[b + 1] - bands[b]) * double(i) / per);
  return edges;
}

IntegralResult integrate_ball(const Integrand& f, const Domain& dom,
                              const QuadratureSpec& q) {
  const int n = dom.dim;
  std::vector<Axis> axes;
  Axis radial;
  double excluded = 0.0;
  SkipPred skip;

  if (q.polar) {
    const auto& pr = *q.polar;
    if (!(pr.delta > 0.0) || pr.delta >= dom.radius)
      throw ParamOutOfRange("polar refinement delta must lie in (0, R)");
    double dist = (pr.center.dim == n) ? (pr.center - dom.center).norm()
                                       : 0.0;
    if (dist <= 1e-12 * std::max(1.0, dom.radius)) {
      // hole at the ball's own center: exact radial grading
      radial.edges = graded_edges(pr.delta, dom.radius, pr.annuli,
                                  q.cells_per_axis);
      excluded = ball_volume(n) * std::pow(pr.delta, n);
    } else {
      // off-center hole: keep the regular grid, drop nodes inside the hole
      radial = Axis::uniform(0.0, dom.radius, q.cells_per_axis);
      Vec hc = pr.center;
      double d2 = pr.delta * pr.delta;
      skip = [hc, d2](const Vec& p) { return (p - hc).norm2() < d2; };
    }
  } else {
    radial = Axis::uniform(0.0, dom.radius, q.cells_per_axis);
  }
  axes.push_back(radial);

  int ac = angular_cells(n, q.cells_per_axis);
  for (int j = 1; j <= n - 1; ++j) {
    double hi = (j == n - 1) ? 2.0 * M_PI : M_PI;
    axes.push_back(Axis::uniform(0.0, hi, ac));
  }

  RegionSums sums;
  integrate_region(f, axes, ball_chart(n, dom.center), q, skip, n, sums);
  IntegralResult res;
  res.value = sums.value.sum;
  res.excluded_measure = excluded + sums.skipped.sum;
  res.evaluations = sums.evaluations;
  return res;
}

// ============================================================================
// Cylinder: meridian-plane reduction (axisymmetric integrands only; see
// header).  Representative point has x = (rho, 0, ..., 0, z).
// ============================================================================

Chart meridian_chart(int n) {
  double sigma = sphere_area(n - 1);  // measure of S^{n-2}
  return [n, sigma](const double* c, Vec& p) -> double {
    double rho = c[0], z = c[1];
    for (int d = 0; d < n; ++d) p[d] = 0.0;
    p[0] = rho;
    p[n - 1] = z;
    double jac = sigma;
    for (int e = 0; e < n - 2; ++e) jac *= rho;
    return jac;
  };
}

struct Rect {
  double r0, r1, z0, z1;
  bool empty() const { return r1 <= r0 + 1e-300 || z1 <= z0 + 1e-300; }
};

IntegralResult integrate_cylinder(const Integrand& f, const Domain& dom,
                                  const QuadratureSpec& q) {
  const int n = dom.dim;
  const double zlo = (dom.kind == Domain::Kind::HalfCylinder) ? 0.0 : -1.0;
  const double sigma = sphere_area(n - 1);
  RegionSums sums;
  double excluded = 0.0;

  if (q.polar) {
    const auto& pr = *q.polar;
    if (!(pr.delta > 0.0) || pr.delta >= 1.0)
      throw ParamOutOfRange("polar refinement delta must lie in (0, 1)");
    if (pr.center.dim == n && pr.center.norm() > 1e-12)
      throw ParamOutOfRange(
          "cylinder refinement is supported at the origin only");
    const double d = pr.delta;
    // L-infinity shells [s, 2s] in the meridian plane, decomposed into at
    // most three axis-aligned rectangles each, clipped to the domain.
    std::vector<Rect> rects;
    double s = d;
    while (s < 1.0) {
      double S = std::min(2.0 * s, 1.0);
      double Sz = std::min(2.0 * s, 1.0);
      rects.push_back({s, S, std::max(zlo, -Sz), Sz});            // right slab
      rects.push_back({0.0, s, s, Sz});                            // top slab
      if (zlo < 0.0) rects.push_back({0.0, s, -Sz, -s});           // bottom
      s *= 2.0;
    }
    int m = std::max(4, q.cells_per_axis / 8);
    for (const Rect& r : rects) {
      if (r.empty()) continue;
      std::vector<Axis> axes = {Axis::uniform(r.r0, r.r1, m),
                                Axis::uniform(r.z0, r.z1, m)};
      integrate_region(f, axes, meridian_chart(n), q, nullptr, n, sums);
    }
    // hole = {rho < d} x {|z| < d} intersected with the domain
    double zlen = (zlo < 0.0) ? 2.0 * d : d;
    excluded = sigma * std::pow(d, n - 1) / (n - 1) * zlen;
  } else {
    int zc = q.cells_per_axis * ((zlo < 0.0) ? 2 : 1);
    std::vector<Axis> axes = {Axis::uniform(0.0, 1.0, q.cells_per_axis),
                              Axis::uniform(zlo, 1.0, zc)};
    integrate_region(f, axes, meridian_chart(n), q, nullptr, n, sums);
  }

  IntegralResult res;
  res.value = sums.value.sum;
  res.excluded_measure = excluded + sums.skipped.sum;
  res.evaluations = sums.evaluations;
  return res;
}

}  // namespace

// ============================================================================
// Entry points
// ============================================================================

IntegralResult integrate(const Integrand& f, const Domain& dom,
                         const QuadratureSpec& q) {
  if (q.cells_per_axis < 2)
    throw ParamOutOfRange("cells_per_axis must be >= 2, got " +
                          std::to_string(q.cells_per_axis));
  if (q.scheme == QuadScheme::TensorGauss && (q.order < 1 || q.order > 64))
    throw ParamOutOfRange("gauss order out of range");
  switch (dom.kind) {
    case Domain::Kind::Ball:
      return integrate_ball(f, dom, q);
    case Domain::Kind::Cylinder:
    case Domain::Kind::HalfCylinder:
      return integrate_cylinder(f, dom, q);
  }
  throw ParamOutOfRange("unknown domain kind");
}

double integrate_interval(const std::function<double(double)>& f, double a,
                          double b, const QuadratureSpec& q) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  const auto& rule = rule_for(q);
  int m = std::max(2, q.cells_per_axis);
  Accum acc;
  for (int i = 0; i < m; ++i) {
    double lo = a + (b - a) * double(i) / m;
    double hi = a + (b - a) * double(i + 1) / m;
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (const auto& [x, w] : rule) {
      double v = f(mid + half * x);
      if (!std::isfinite(v))
        throw NonFiniteSample("1d integrand not finite at t = " +
                              std::to_string(mid + half * x));
      acc.add(half * w * v);
    }
  }
  return sign * acc.sum;
}

// ============================================================================
// Deterministic direction sets (declared in rng.hpp)
// ============================================================================

std::vector<Vec> sphere_directions(int n, int count) {
  if (n < 2 || n > kMaxDim) throw BadDimension("sphere_directions: bad dim");
  if (count < 1) throw ParamOutOfRange("sphere_directions: count >= 1");
  std::vector<Vec> out;
  out.reserve(count);
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      double a = 2.0 * M_PI * (i + 0.5) / count;
      out.push_back(Vec{std::cos(a), std::sin(a)});
    }
    return out;
  }
  if (n == 3) {
    // Fibonacci sphere
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      double z = 1.0 - (2.0 * i + 1.0) / count;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double a = ga * i;
      out.push_back(Vec{r * std::cos(a), r * std::sin(a), z});
    }
    return out;
  }
  // Higher dimensions: Halton pairs -> Box-Muller -> normalize.
  static const unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  int pairs = (n + 1) / 2;
  for (int i = 0; i < count; ++i) {
    Vec v = Vec::zero(n);
    for (int k = 0; k < pairs; ++k) {
      double u1 = radical_inverse(i + 1, primes[2 * k]);
      double u2 = radical_inverse(i + 1, primes[2 * k + 1]);
      u1 = std::max(u1, 1e-12);
      double r = std::sqrt(-2.0 * std::log(u1));
      v[2 * k] = r * std::cos(2.0 * M_PI * u2);
      if (2 * k + 1 < n) v[2 * k + 1] = r * std::sin(2.0 * M_PI * u2);
    }
    double nrm = v.norm();
    if (nrm < 1e-12) {
      v = Vec::zero(n);
      v[0] = 1.0;
      nrm = 1.0;
    }
    out.push_back(v * (1.0 / nrm));
  }
  return out;
}

}  // namespace driftlab
