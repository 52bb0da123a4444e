#include "driftlab/closed_form.hpp"

#include <cmath>

#include "driftlab/errors.hpp"

namespace driftlab {

namespace {

Vec shifted(const Vec& p, int axis, double dh) {
  Vec q = p;
  q[axis] += dh;
  return q;
}

void guard(const SingularSet& s, const Vec& p, double reach,
           const char* what) {
  if (s.distance && s.distance(p) <= reach)
    throw SingularProbe(std::string(what) +
                        ": stencil touches singular set (" + s.description +
                        ")");
}

}  // namespace

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& p,
                double h) {
  Vec g = Vec::zero(p.dim);
  for (int i = 0; i < p.dim; ++i)
    g[i] = (f(shifted(p, i, h)) - f(shifted(p, i, -h))) / (2.0 * h);
  return g;
}

double fd_laplacian(const std::function<double(const Vec&)>& f, const Vec& p,
                    double h) {
  double c = f(p), s = 0.0;
  for (int i = 0; i < p.dim; ++i)
    s += f(shifted(p, i, h)) - 2.0 * c + f(shifted(p, i, -h));
  return s / (h * h);
}

double fd_divergence(const std::function<Vec(const Vec&)>& F, const Vec& p,
                     double h, int order) {
  if (order != 2 && order != 4)
    throw ParamOutOfRange("fd_divergence: order must be 2 or 4");
  double s = 0.0;
  for (int i = 0; i < p.dim; ++i) {
    if (order == 2) {
      s += (F(shifted(p, i, h))[i] - F(shifted(p, i, -h))[i]) / (2.0 * h);
    } else {
      double f1 = F(shifted(p, i, h))[i], f2 = F(shifted(p, i, 2 * h))[i];
      double fm1 = F(shifted(p, i, -h))[i], fm2 = F(shifted(p, i, -2 * h))[i];
      s += (-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h);
    }
  }
  return s;
}

double fd_check_gradient(const ClosedFormScalar& f, const Point& p, double h) {
  if (!f.gradient) throw ParamOutOfRange("fd_check_gradient: no gradient");
  guard(f.singular, p, h, "fd_check_gradient");
  Vec a = f.gradient(p);
  Vec d = fd_gradient(f.value, p, h);
  double worst = 0.0;
  for (int i = 0; i < p.dim; ++i)
    worst = std::max(worst, std::abs(a[i] - d[i]));
  return worst;
}

double fd_check_laplacian(const ClosedFormScalar& f, const Point& p,
                          double h) {
  if (!f.laplacian) throw ParamOutOfRange("fd_check_laplacian: no laplacian");
  guard(f.singular, p, h, "fd_check_laplacian");
  return std::abs(f.laplacian(p) - fd_laplacian(f.value, p, h));
}

double fd_check_divergence(const ClosedFormVector& F, const Point& p, double h,
                           int order) {
  if (!F.divergence)
    throw ParamOutOfRange("fd_check_divergence: no divergence");
  guard(F.singular, p, (order == 4 ? 2.0 : 1.0) * h, "fd_check_divergence");
  return std::abs(F.divergence(p) - fd_divergence(F.value, p, h, order));
}

double decay_order(const std::vector<double>& hs,
                   const std::vector<double>& errs, double floor) {
  std::vector<double> x, y;
  for (size_t i = 0; i < hs.size() && i < errs.size(); ++i) {
    if (errs[i] > floor && errs[i] > 0.0 && hs[i] > 0.0) {
      x.push_back(std::log(hs[i]));
      y.push_back(std::log(errs[i]));
    }
  }
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double xm = 0, ym = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= x.size();
  ym /= y.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - xm) * (y[i] - ym);
    den += (x[i] - xm) * (x[i] - xm);
  }
  return num / den;
}

}  // namespace driftlab
