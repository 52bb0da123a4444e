#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "driftlab/errors.hpp"
#include "driftlab/example_catalog.hpp"
#include "driftlab/weak_form.hpp"

using namespace driftlab;

namespace {

ClosedFormScalar constant_u(int n, double c) {
  ClosedFormScalar f;
  f.dim = n;
  f.name = "const";
  f.value = [c](const Vec&) { return c; };
  f.gradient = [n](const Vec&) { return Vec::zero(n); };
  return f;
}

// b = (x, -y): induced by the saddle potential x*y, divergence-free.
ClosedFormVector saddle_drift() {
  StreamField2D s;
  s.omega.dim = 2;
  s.omega.name = "saddle";
  s.omega.value = [](const Vec& p) { return p[0] * p[1]; };
  s.omega.gradient = [](const Vec& p) { return Vec{p[1], p[0]}; };
  return s.induced();
}

}  // namespace

// ------------------------------------------------------------------- bumps

TEST_CASE("bump profile anchors") {
  Point a{0.3, 0.4};
  BumpFunction h(a, 0.25);
  CHECK(h.value(a) == 1.0);
  // half-radius value: exp(1 - 1/(1 - 1/4)) = exp(-1/3)
  CHECK(h.value(Vec{0.425, 0.4}) ==
        doctest::Approx(std::exp(-1.0 / 3.0)).epsilon(1e-14));
  // exact center Laplacian: -2 n / radius^2
  CHECK(h.laplacian(a) == doctest::Approx(-2.0 * 2 / 0.0625).epsilon(1e-14));

  // identically zero at and beyond the support edge
  for (double s : {0.25, 0.2500000001, 0.3, 5.0}) {
    Vec x{0.3 + s, 0.4};
    CHECK(h.value(x) == 0.0);
    CHECK(h.gradient(x).norm() == 0.0);
    CHECK(h.laplacian(x) == 0.0);
  }

  // smooth to second order: FD agreement inside and near the seam
  auto f = h.as_scalar();
  for (double frac : {0.0, 0.3, 0.5, 0.8, 0.95}) {
    Point p{0.3 + frac * 0.25, 0.4};
    CHECK(fd_check_gradient(f, p, 1e-6) <= 1e-7);
    CHECK(fd_check_laplacian(f, p, 1e-5) <= 1e-4);
  }
  CHECK_THROWS_AS(BumpFunction(a, 0.0), ParamOutOfRange);
}

TEST_CASE("3d bump center Laplacian") {
  BumpFunction h(Point{0.0, 0.0, 0.0}, 0.5);
  CHECK(h.laplacian(Point{0.0, 0.0, 0.0}) ==
        doctest::Approx(-2.0 * 3 / 0.25).epsilon(1e-14));
}

// ------------------------------------------------------------ grad residual

TEST_CASE("constant u kills the grad-form residual exactly") {
  auto c = make_example(ExampleId::Ex1);
  BumpFunction h(Point{0.15, 0.0}, 0.1);
  auto r = weak_residual_grad_form(constant_u(2, 7.0), c.b, h,
                                   Domain::ball(c.R, 2),
                                   QuadratureSpec::gauss(32));
  CHECK(r.value == 0.0);
  for (auto& [cells, v] : r.trail) CHECK(v == 0.0);
}

TEST_CASE("grad-form residual vanishes off the singularity") {
  // the integral identity holds exactly when the strong equation does, so
  // quadrature on a support away from the origin must hit zero
  for (ExampleId id : {ExampleId::Ex1, ExampleId::Ex2}) {
    auto c = make_example(id);
    BumpFunction h(Point{0.15, 0.0}, 0.1);
    auto r = weak_residual_grad_form(c.u, c.b, h, Domain::ball(c.R, 2),
                                     QuadratureSpec::gauss(128));
    INFO("example ", std::string(to_string(id)));
    CHECK(std::abs(r.value) <= 1e-6);
  }
  // the n = 3 catalog entries, same story
  for (ExampleId id : {ExampleId::Ex3, ExampleId::Ex4}) {
    auto c = make_example(id);
    BumpFunction h(Point{0.4 * c.R, 0.0, 0.0}, 0.3 * c.R);
    auto r = weak_residual_grad_form(c.u, c.b, h, Domain::ball(c.R, 3),
                                     QuadratureSpec::gauss(48));
    INFO("example ", std::string(to_string(id)));
    CHECK(std::abs(r.value) <= 1e-6);
  }
}

TEST_CASE("grad-form residual decays at second order under midpoint") {
  auto c = make_example(ExampleId::Ex1);
  BumpFunction h(Point{0.15, 0.0}, 0.1);
  Domain dom = Domain::ball(c.R, 2);
  std::vector<double> hs, errs;
  for (int cells : {16, 32, 64, 128}) {
    auto r = weak_residual_grad_form(c.u, c.b, h, dom,
                                     QuadratureSpec::midpoint(cells));
    hs.push_back(1.0 / cells);
    errs.push_back(std::abs(r.value));
  }
  double order = decay_order(hs, errs, 1e-12);
  CHECK(order >= 1.9);
}

TEST_CASE("origin bump: residual follows the shrinking excision") {
  // support contains the singular point; with the hole at radius delta the
  // residual equals the inner flux ~ -4 pi delta, vanishing as delta -> 0
  auto c = make_example(ExampleId::Ex3);
  BumpFunction h(Point{0.0, 0.0, 0.0}, 0.5);
  Domain dom = Domain::ball(1.0, 3);
  std::vector<double> vals;
  for (double delta : {1e-3, 1e-4, 1e-5}) {
    auto q = QuadratureSpec::gauss(32).refined_at(Point::zero(3), delta);
    vals.push_back(weak_residual_grad_form(c.u, c.b, h, dom, q).value);
  }
  CHECK(std::abs(vals[0]) <= 2e-2);
  CHECK(std::abs(vals[2]) <= 2e-4);
  CHECK(std::abs(vals[2]) <= 0.02 * std::abs(vals[0]));
  // flux model: value = -4 pi delta h(delta) + O(delta^2)
  CHECK(vals[2] == doctest::Approx(-4.0 * M_PI * 1e-5).epsilon(1e-2));
}

TEST_CASE("support and dimension guards") {
  auto c = make_example(ExampleId::Ex1);
  Domain dom = Domain::ball(c.R, 2);
  CHECK_THROWS_AS(
      weak_residual_grad_form(c.u, c.b, BumpFunction(Point{0.3, 0.0}, 0.1),
                              dom, QuadratureSpec::gauss(16)),
      SupportViolation);
  CHECK_THROWS_AS(
      weak_residual_grad_form(c.u, c.b,
                              BumpFunction(Point{0.0, 0.0, 0.0}, 0.1), dom,
                              QuadratureSpec::gauss(16)),
      BadDimension);
}

// ------------------------------------------------------------- div residual

TEST_CASE("div-form residual with constant u and div-free drift") {
  // integral of lap h is zero by the divergence theorem, and so is
  // integral of b . grad h for div-free b
  BumpFunction h(Point{0.2, -0.1}, 0.3);
  auto r = weak_residual_div_form(constant_u(2, 1.0), saddle_drift(), h,
                                  Domain::ball(1.0, 2),
                                  QuadratureSpec::gauss(128));
  CHECK(std::abs(r.value) <= 1e-8);
}

TEST_CASE("solution of the gradient equation passes both forms") {
  // u = x1 is harmonic and b = (0, -cos x1) is div-free with b . grad u = 0,
  // so u solves both the gradient form and the divergence form
  ClosedFormScalar u;
  u.dim = 2;
  u.name = "coordinate";
  u.value = [](const Vec& p) { return p[0]; };
  u.gradient = [](const Vec&) { return Vec{1.0, 0.0}; };
  StreamField2D s;
  s.omega.dim = 2;
  s.omega.value = [](const Vec& p) { return std::sin(p[0]); };
  s.omega.gradient = [](const Vec& p) { return Vec{std::cos(p[0]), 0.0}; };
  auto b = s.induced();

  BumpFunction h(Point{0.1, 0.2}, 0.35);
  Domain dom = Domain::ball(1.0, 2);
  auto q = QuadratureSpec::gauss(128);
  CHECK(std::abs(weak_residual_grad_form(u, b, h, dom, q).value) <= 1e-8);
  CHECK(std::abs(weak_residual_div_form(u, b, h, dom, q).value) <= 1e-8);
}

TEST_CASE("div-form residual detects a non-solenoidal drift") {
  // for the inverse-square pair the drift has div b = 1/r^2, and the
  // div-form residual converges to -integral(u div b h) instead of zero;
  // the oracle evaluates that limit through the substitution r = exp(-s)
  auto c = make_example(ExampleId::Ex3);
  BumpFunction h(Point{0.0, 0.0, 0.0}, 0.5);
  Domain dom = Domain::ball(1.0, 3);

  auto hval = [&](double r) { return h.value(Vec{r, 0.0, 0.0}); };
  auto integrand = [&](double s) {
    double r = std::exp(-s);
    return -s * hval(r) * r;  // ln(r) h(r) dr pulled back to s
  };
  double inner = integrate_interval(integrand, std::log(2.0), 40.0,
                                    QuadratureSpec::gauss(64, 6));
  double oracle = -4.0 * M_PI * inner;
  CHECK(oracle > 1.0);  // genuinely far from zero

  auto q = QuadratureSpec::gauss(32).refined_at(Point::zero(3), 1e-4);
  auto r = weak_residual_div_form(c.u, c.b, h, dom, q);
  CHECK(r.value == doctest::Approx(oracle).epsilon(1e-2));
}

// ------------------------------------------------------------ trilinear form

TEST_CASE("trilinear form basics") {
  Domain dom = Domain::ball(1.0, 2);
  auto q = QuadratureSpec::gauss(64);
  auto b = saddle_drift();
  BumpFunction phi(Point{0.2, 0.1}, 0.3);
  BumpFunction psi(Point{0.1, 0.25}, 0.3);

  // zero drift annihilates the form exactly
  ClosedFormVector zero;
  zero.dim = 2;
  zero.name = "zero";
  zero.value = [](const Vec&) { return Vec::zero(2); };
  zero.divergence = [](const Vec&) { return 0.0; };
  CHECK(trilinear_form(zero, phi, psi, dom, q) == 0.0);

  // repeated argument: T(b, phi, phi) = 0 by parts
  CHECK(std::abs(trilinear_form(b, phi, phi, dom, q)) <= 1e-8);

  // antisymmetry across the two orderings
  double t1 = trilinear_form(b, phi, psi, dom, q);
  double t2 = trilinear_form(b, psi, phi, dom, q);
  CHECK(std::abs(t1) > 1e-6);  // the case is not vacuous
  CHECK(std::abs(t1 + t2) <= 1e-8);

  // a drift with nonzero divergence is rejected at the door
  ClosedFormVector bad;
  bad.dim = 2;
  bad.name = "dilation";
  bad.value = [](const Vec& p) { return p; };
  bad.divergence = [](const Vec&) { return 2.0; };
  CHECK_THROWS_AS(trilinear_form(bad, phi, psi, dom, q), NotDivergenceFree);
}

TEST_CASE("rayleigh quotient of a degenerate pair is zero-ish") {
  Domain dom = Domain::ball(1.0, 2);
  auto q = QuadratureSpec::gauss(32);
  BumpFunction phi(Point{0.2, 0.1}, 0.3);
  auto r = rayleigh_sweep({StreamField2D{constant_u(2, 1.0)}}, {{phi, phi}},
                          dom, q);
  CHECK(r.max_quotient <= 1e-8);
  CHECK(r.quotients.size() == 1);
}

TEST_CASE("random-stream sweep is finite and bit-reproducible") {
  Domain dom = Domain::ball(1.0, 2);
  auto q = QuadratureSpec::gauss(32);

  auto build = [&]() {
    Rng sr(101);
    std::vector<StreamField2D> streams;
    for (int i = 0; i < 10; ++i) streams.push_back(polynomial_stream(sr));
    Rng pr(777);
    std::vector<std::pair<BumpFunction, BumpFunction>> pairs;
    for (int i = 0; i < 5; ++i) {
      Vec c1 = pr.in_ball(0.5, 2);
      Vec c2 = pr.in_ball(0.5, 2);
      pairs.emplace_back(BumpFunction(c1, pr.uniform(0.1, 0.3)),
                         BumpFunction(c2, pr.uniform(0.1, 0.3)));
    }
    return rayleigh_sweep(streams, pairs, dom, q);
  };

  auto r1 = build();
  auto r2 = build();
  CHECK(r1.quotients.size() == 50);
  CHECK(r1.max_quotient > 0.0);
  CHECK(std::isfinite(r1.max_quotient));
  CHECK(r1.max_quotient == r2.max_quotient);  // bitwise
  for (size_t i = 0; i < r1.quotients.size(); ++i)
    CHECK(r1.quotients[i] == r2.quotients[i]);
}

TEST_CASE("unbounded stream keeps a bounded quotient under refinement") {
  auto s = loglog_stream();
  auto b = s.induced();
  Domain dom = Domain::ball(std::exp(-1.0), 2);
  BumpFunction phi(Point{0.05, 0.0}, 0.2);
  BumpFunction psi(Point{-0.08, 0.03}, 0.15);
  std::vector<double> quots;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    auto q = QuadratureSpec::gauss(64).refined_at(Point::zero(2), delta);
    quots.push_back(rayleigh_quotient(b, phi, psi, dom, q));
  }
  for (double v : quots) {
    CHECK(std::isfinite(v));
    CHECK(v < 1.0);
  }
  CHECK(std::abs(quots[2] - quots[1]) <= 0.05 * std::max(quots[1], 1e-12));
}
