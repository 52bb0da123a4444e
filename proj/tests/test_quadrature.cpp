#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "driftlab/errors.hpp"
#include "driftlab/quadrature.hpp"
#include "driftlab/rng.hpp"

using namespace driftlab;

static double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1e-300, std::abs(b));
}

TEST_CASE("gauss rule: symmetry, weight sum, polynomial exactness") {
  const auto& r4 = gauss_rule(4);
  REQUIRE(r4.size() == 4);
  double wsum = 0;
  for (auto& [x, w] : r4) wsum += w;
  CHECK(rel_err(wsum, 2.0) < 1e-14);
  CHECK(r4[0].first == doctest::Approx(-r4[3].first).epsilon(1e-14));
  // degree-7 exactness: int_{-1}^{1} t^6 dt = 2/7
  double s = 0;
  for (auto& [x, w] : r4) s += w * std::pow(x, 6);
  CHECK(rel_err(s, 2.0 / 7.0) < 1e-13);
}

TEST_CASE("unit disc area with the midpoint scheme") {
  auto one = [](const Vec&) { return 1.0; };
  auto r = integrate(one, Domain::ball(1.0, 2), QuadratureSpec::midpoint(64));
  CHECK(std::abs(r.value - M_PI) < 0.01);
  CHECK(r.excluded_measure == 0.0);
  CHECK(r.evaluations > 0);
}

TEST_CASE("zero integrand gives exactly zero") {
  auto zero = [](const Vec&) { return 0.0; };
  for (const Domain& d : {Domain::ball(0.5, 3), Domain::cylinder(3)}) {
    auto r = integrate(zero, d, QuadratureSpec::gauss(16));
    CHECK(r.value == 0.0);
  }
}

TEST_CASE("constants integrate to c * |domain|") {
  auto c7 = [](const Vec&) { return 7.25; };
  struct Row {
    Domain dom;
    double tol_gauss, tol_mid;
  };
  const Row rows[] = {
      {Domain::ball(1.0, 2), 1e-12, 1e-3},
      {Domain::ball(0.7, 3), 1e-9, 2e-2},
      {Domain::ball(1.3, 5), 1e-9, 2e-2},
      {Domain::cylinder(3), 1e-12, 1e-3},
      {Domain::half_cylinder(4), 1e-12, 1e-3},
  };
  for (const Row& row : rows) {
    double exact = 7.25 * row.dom.measure();
    auto g = integrate(c7, row.dom, QuadratureSpec::gauss(32));
    CHECK(rel_err(g.value, exact) < row.tol_gauss);
    auto m = integrate(c7, row.dom, QuadratureSpec::midpoint(32));
    CHECK(rel_err(m.value, exact) < row.tol_mid);
  }
}

TEST_CASE("inverse-square integrand over the unit ball, dyadic hole") {
  // int_{delta<|x|<1} |x|^-2 dx = 4 pi (1 - delta) in closed form
  auto f = [](const Vec& p) { return 1.0 / p.norm2(); };
  Domain B = Domain::ball(1.0, 3);
  double delta = 1e-4;
  auto q = QuadratureSpec::gauss(64).refined_at(Point::zero(3), delta);
  auto r = integrate(f, B, q);
  CHECK(rel_err(r.value, 4.0 * M_PI * (1.0 - delta)) < 1e-9);
  CHECK(std::abs(r.value - 4.0 * M_PI) < 0.01 * 4.0 * M_PI);  // headline anchor
  CHECK(rel_err(r.excluded_measure, ball_volume(3) * std::pow(delta, 3)) <
        1e-12);
}

TEST_CASE("logarithmic integrand needs the hole: 2D closed form") {
  // int_{B(1/e)} 1/(|x|^2 ln^2|x|) dx = 2 pi (1 - 1/|ln delta|)
  auto f = [](const Vec& p) {
    double r2 = p.norm2();
    double lr = std::log(p.norm());
    return 1.0 / (r2 * lr * lr);
  };
  Domain B = Domain::ball(std::exp(-1.0), 2);
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    auto q = QuadratureSpec::gauss(64).refined_at(Point::zero(2), delta);
    double exact = 2.0 * M_PI * (1.0 - 1.0 / std::abs(std::log(delta)));
    auto r = integrate(f, B, q);
    CHECK(rel_err(r.value, exact) < 1e-8);
  }
}

TEST_CASE("non-finite sample raises instead of propagating NaN") {
  auto f = [](const Vec& p) { return std::log(p[0]); };  // NaN for x<0
  CHECK_THROWS_AS(
      integrate(f, Domain::ball(1.0, 2), QuadratureSpec::gauss(8)),
      NonFiniteSample);
}

TEST_CASE("midpoint refinement converges monotonically on a smooth field") {
  auto f = [](const Vec& p) { return std::exp(p[0] - 0.3 * p[1]); };
  Domain B = Domain::ball(1.0, 2);
  auto ref = integrate(f, B, QuadratureSpec::midpoint(512)).value;
  double prev = 1e300;
  for (int cells : {16, 32, 64, 128}) {
    double err = std::abs(integrate(f, B, QuadratureSpec::midpoint(cells)).value - ref);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("off-center hole conserves measure and skips the right nodes") {
  auto one = [](const Vec&) { return 1.0; };
  Domain B = Domain::ball(1.0, 2);
  Vec hole{0.3, 0.0};
  double delta = 0.05;
  auto r = integrate(one, B, QuadratureSpec::gauss(128).refined_at(hole, delta));
  // value + skipped measure reproduces the whole disc
  CHECK(rel_err(r.value + r.excluded_measure, M_PI) < 1e-12);
  CHECK(r.excluded_measure ==
        doctest::Approx(M_PI * delta * delta).epsilon(0.3));
}

TEST_CASE("cylinder hole decomposition covers the domain exactly") {
  auto one = [](const Vec&) { return 1.0; };
  for (const Domain& dom : {Domain::cylinder(3), Domain::half_cylinder(3)}) {
    double delta = 0.01;
    auto r = integrate(one, dom,
                       QuadratureSpec::gauss(64).refined_at(Point::zero(3), delta));
    CHECK(rel_err(r.value + r.excluded_measure, dom.measure()) < 1e-12);
    double zlen = (dom.kind == Domain::Kind::Cylinder) ? 2 * delta : delta;
    double hole = sphere_area(2) * delta * delta / 2.0 * zlen;
    CHECK(rel_err(r.excluded_measure, hole) < 1e-12);
  }
}

TEST_CASE("cylinder power-law integrand against the closed form") {
  // axisymmetric integrand z^2 over the full cylinder, n = 3:
  // sigma_1 * int_0^1 rho drho * int_{-1}^{1} z^2 dz = 2pi * 1/2 * 2/3
  auto f = [](const Vec& p) { return p.z() * p.z(); };
  auto r = integrate(f, Domain::cylinder(3), QuadratureSpec::gauss(32));
  CHECK(rel_err(r.value, 2.0 * M_PI / 3.0) < 1e-12);
}

TEST_CASE("interval quadrature") {
  auto q = QuadratureSpec::gauss(32);
  double v = integrate_interval([](double t) { return std::exp(t); }, 0, 1, q);
  CHECK(rel_err(v, std::exp(1.0) - 1.0) < 1e-12);
  CHECK(integrate_interval([](double) { return 3.0; }, 1, 0, q) ==
        doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(integrate_interval([](double) { return 3.0; }, 2, 2, q) == 0.0);
}

TEST_CASE("direction sets are unit, deterministic, well spread") {
  for (int n : {2, 3, 4, 6}) {
    auto a = sphere_directions(n, 64);
    auto b = sphere_directions(n, 64);
    REQUIRE(a.size() == 64);
    Vec mean = Vec::zero(n);
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(std::abs(a[i].norm() - 1.0) < 1e-12);
      for (int d = 0; d < n; ++d) CHECK(a[i][d] == b[i][d]);  // bit-identical
      mean = mean + a[i];
    }
    // spread: the empirical mean of a balanced direction set is small
    CHECK(mean.norm() / 64.0 < 0.2);
  }
}

TEST_CASE("spec validation errors") {
  auto one = [](const Vec&) { return 1.0; };
  QuadratureSpec q;
  q.cells_per_axis = 1;
  CHECK_THROWS_AS(integrate(one, Domain::ball(1, 2), q), ParamOutOfRange);
  CHECK_THROWS_AS(integrate(one, Domain::ball(1, 2),
                            QuadratureSpec::gauss(8).refined_at(Point::zero(2), 2.0)),
                  ParamOutOfRange);
  CHECK_THROWS_AS(gauss_rule(0), ParamOutOfRange);
}
