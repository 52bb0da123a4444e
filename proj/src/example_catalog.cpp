#include "driftlab/example_catalog.hpp"

#include <cmath>

#include "driftlab/errors.hpp"

namespace driftlab {

const char* to_string(ExampleId id) {
  switch (id) {
    case ExampleId::Ex1: return "ex1";
    case ExampleId::Ex2: return "ex2";
    case ExampleId::Ex3: return "ex3";
    case ExampleId::Ex4: return "ex4";
  }
  return "?";
}

std::optional<ExampleId> parse_example_id(std::string_view s) {
  if (s == "ex1" || s == "Ex1" || s == "1") return ExampleId::Ex1;
  if (s == "ex2" || s == "Ex2" || s == "2") return ExampleId::Ex2;
  if (s == "ex3" || s == "Ex3" || s == "3") return ExampleId::Ex3;
  if (s == "ex4" || s == "Ex4" || s == "4") return ExampleId::Ex4;
  return std::nullopt;
}

namespace {

// All four pairs are radial: u = U(r), b = B(r) x / r with scalar profiles.
// Gradients/Laplacians below are hand-derived; the FD cross-checks in the
// test suite guard them.

// ---------------------------------------------------------------- Example 1
// n = 2:  u = ln(-ln r),  b = -x / (r^2 ln r)
ExampleCase ex1() {
  ExampleCase c;
  c.id = ExampleId::Ex1;
  c.n = 2;
  c.R = std::exp(-1.0);
  c.u.dim = 2;
  c.u.name = "log-log blowup";
  c.u.singular = SingularSet::origin();
  c.u.value = [](const Vec& p) { return std::log(-std::log(p.norm())); };
  c.u.gradient = [](const Vec& p) {
    double r2 = p.norm2(), lr = std::log(p.norm());
    return p * (1.0 / (r2 * lr));
  };
  c.u.laplacian = [](const Vec& p) {
    double r2 = p.norm2(), lr = std::log(p.norm());
    return -1.0 / (r2 * lr * lr);
  };
  c.b.dim = 2;
  c.b.name = "log-log drift";
  c.b.singular = SingularSet::origin();
  c.b.value = [](const Vec& p) {
    double r2 = p.norm2(), lr = std::log(p.norm());
    return p * (-1.0 / (r2 * lr));
  };
  c.b.divergence = [](const Vec& p) {
    double r2 = p.norm2(), lr = std::log(p.norm());
    return 1.0 / (r2 * lr * lr);
  };
  c.claims = {"u unbounded near origin", "b in L2",
              "b Orlicz L2-log trail diverges", "div b != 0"};
  return c;
}

// ---------------------------------------------------------------- Example 2
// n = 2:  u = 1/ln r (0 at the origin),  b = -2x / (r^2 ln r)
ExampleCase ex2() {
  ExampleCase c;
  c.id = ExampleId::Ex2;
  c.n = 2;
  c.R = 0.5;
  c.u.dim = 2;
  c.u.name = "reciprocal-log";
  c.u.singular = SingularSet::origin();
  c.u.value = [](const Vec& p) {
    double r = p.norm();
    if (r == 0.0) return 0.0;  // continuous extension
    return 1.0 / std::log(r);
  };
  c.u.gradient = [](const Vec& p) {
    double r2 = p.norm2(), lr = std::log(p.norm());
    return p * (-1.0 / (r2 * lr * lr));
  };
  c.u.laplacian = [](const Vec& p) {
    double r2 = p.norm2(), lr = std::log(p.norm());
    return 2.0 / (r2 * lr * lr * lr);
  };
  c.b.dim = 2;
  c.b.name = "reciprocal-log drift";
  c.b.singular = SingularSet::origin();
  c.b.value = [](const Vec& p) {
    double r2 = p.norm2(), lr = std::log(p.norm());
    return p * (-2.0 / (r2 * lr));
  };
  c.b.divergence = [](const Vec& p) {
    double r2 = p.norm2(), lr = std::log(p.norm());
    return 2.0 / (r2 * lr * lr);
  };
  c.claims = {"u bounded", "u has no positive Holder exponent at origin",
              "b in L2", "div b != 0"};
  return c;
}

// ---------------------------------------------------------------- Example 3
// n >= 3:  u = ln r,  b = (n-2) x / r^2
ExampleCase ex3(int n) {
  ExampleCase c;
  c.id = ExampleId::Ex3;
  c.n = n;
  c.R = 1.0;
  c.u.dim = n;
  c.u.name = "log blowup";
  c.u.singular = SingularSet::origin();
  c.u.value = [](const Vec& p) { return std::log(p.norm()); };
  c.u.gradient = [](const Vec& p) { return p * (1.0 / p.norm2()); };
  c.u.laplacian = [n](const Vec& p) { return (n - 2.0) / p.norm2(); };
  c.b.dim = n;
  c.b.name = "inverse-distance drift";
  c.b.singular = SingularSet::origin();
  c.b.value = [n](const Vec& p) { return p * ((n - 2.0) / p.norm2()); };
  c.b.divergence = [n](const Vec& p) {
    return (n - 2.0) * (n - 2.0) / p.norm2();
  };
  c.claims = {"u unbounded near origin", "b in Lp only for p < n",
              "div b != 0"};
  return c;
}

// ---------------------------------------------------------------- Example 4
// n >= 3:  u = 1/ln r,  b = ((n-2) - 2/ln r) x / r^2.
// The coefficient is the unique radial profile that makes the strong
// residual vanish against Lap u = (2-n)/(r^2 ln^2 r) + 2/(r^2 ln^3 r).
ExampleCase ex4(int n) {
  ExampleCase c;
  c.id = ExampleId::Ex4;
  c.n = n;
  c.R = 0.5;
  c.u.dim = n;
  c.u.name = "reciprocal-log (higher dim)";
  c.u.singular = SingularSet::origin();
  c.u.value = [](const Vec& p) {
    double r = p.norm();
    if (r == 0.0) return 0.0;
    return 1.0 / std::log(r);
  };
  c.u.gradient = [](const Vec& p) {
    double r2 = p.norm2(), lr = std::log(p.norm());
    return p * (-1.0 / (r2 * lr * lr));
  };
  c.u.laplacian = [n](const Vec& p) {
    double r2 = p.norm2(), lr = std::log(p.norm());
    return (2.0 - n) / (r2 * lr * lr) + 2.0 / (r2 * lr * lr * lr);
  };
  c.b.dim = n;
  c.b.name = "corrected higher-dim drift";
  c.b.singular = SingularSet::origin();
  c.b.value = [n](const Vec& p) {
    double r2 = p.norm2(), lr = std::log(p.norm());
    return p * (((n - 2.0) - 2.0 / lr) / r2);
  };
  c.b.divergence = [n](const Vec& p) {
    double r2 = p.norm2(), lr = std::log(p.norm());
    return (n - 2.0) * (n - 2.0) / r2 - 2.0 * (n - 2.0) / (r2 * lr) +
           2.0 / (r2 * lr * lr);
  };
  c.claims = {"u has no positive Holder exponent at origin",
              "b in Lp only for p < n", "div b != 0"};
  return c;
}

}  // namespace

ExampleCase make_example(ExampleId id, std::optional<int> n_override) {
  switch (id) {
    case ExampleId::Ex1:
    case ExampleId::Ex2:
      if (n_override)
        throw BadDimension("this example is two-dimensional only");
      return id == ExampleId::Ex1 ? ex1() : ex2();
    case ExampleId::Ex3:
    case ExampleId::Ex4: {
      int n = n_override.value_or(3);
      if (n < 3) throw BadDimension("this example needs dimension >= 3");
      if (n > kMaxDim)
        throw BadDimension("dimension exceeds the supported maximum");
      return id == ExampleId::Ex3 ? ex3(n) : ex4(n);
    }
  }
  throw ParamOutOfRange("unknown example id");
}

double strong_residual(const ExampleCase& c, const Point& p) {
  if (p.dim != c.n) throw BadDimension("strong_residual: wrong point dim");
  double r = p.norm();
  if (r < 1e-12) throw SingularProbe("strong_residual: probe at the origin");
  if (r >= c.R) throw OutOfDomain("strong_residual: probe outside the ball");
  return -c.u.laplacian(p) + dot(c.b.value(p), c.u.gradient(p));
}

double solve_1d(const std::function<double(double)>& b, double C1, double C2,
                double x, const QuadratureSpec& q) {
  if (C1 == 0.0) return C2;  // constant solution, skip the quadrature
  auto inner = [&](double y) {
    return std::exp(integrate_interval(b, 0.0, y, q));
  };
  return C1 * integrate_interval(inner, 0.0, x, q) + C2;
}

}  // namespace driftlab
