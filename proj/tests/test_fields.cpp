#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "driftlab/closed_form.hpp"
#include "driftlab/errors.hpp"

using namespace driftlab;

namespace {

ClosedFormScalar quadratic() {
  ClosedFormScalar f;
  f.dim = 2;
  f.name = "|x|^2";
  f.value = [](const Vec& p) { return p.norm2(); };
  f.gradient = [](const Vec& p) { return p * 2.0; };
  f.laplacian = [](const Vec& p) { return 2.0 * p.dim; };
  return f;
}

}  // namespace

TEST_CASE("central differences are exact on quadratics up to roundoff") {
  auto f = quadratic();
  CHECK(fd_check_gradient(f, Vec{1.0, 1.0}, 1e-3) <= 1e-6);
  CHECK(fd_check_laplacian(f, Vec{1.0, 1.0}, 1e-3) <= 1e-8);
}

TEST_CASE("a negated gradient is flagged with error ~ 2|grad|") {
  auto f = quadratic();
  f.gradient = [](const Vec& p) { return p * -2.0; };
  // at (1,1) each true component is 2, so max mismatch is 4
  CHECK(fd_check_gradient(f, Vec{1.0, 1.0}, 1e-3) ==
        doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("singular-set guard") {
  auto f = quadratic();
  f.singular = SingularSet::origin();
  CHECK_THROWS_AS(fd_check_gradient(f, Vec{5e-4, 0.0}, 1e-3), SingularProbe);
  CHECK_NOTHROW(fd_check_gradient(f, Vec{0.5, 0.0}, 1e-3));
}

TEST_CASE("divergence stencils: order 2 vs order 4") {
  ClosedFormVector F;
  F.dim = 2;
  F.value = [](const Vec& p) {
    return Vec{std::sin(p[0] * p[1]), std::cos(p[0] + p[1])};
  };
  F.divergence = [](const Vec& p) {
    return p[1] * std::cos(p[0] * p[1]) - std::sin(p[0] + p[1]);
  };
  Vec p{0.3, 0.7};
  double e2 = fd_check_divergence(F, p, 1e-2, 2);
  double e4 = fd_check_divergence(F, p, 1e-2, 4);
  CHECK(e2 < 1e-4);
  CHECK(e4 < 1e-7);
  CHECK(e4 < e2);
  CHECK_THROWS_AS(fd_check_divergence(F, p, 1e-2, 3), ParamOutOfRange);
}

TEST_CASE("observed order of the gradient check is ~2 on a smooth field") {
  ClosedFormScalar f;
  f.dim = 2;
  f.value = [](const Vec& p) { return std::exp(p[0] + 2.0 * p[1]); };
  f.gradient = [](const Vec& p) {
    double v = std::exp(p[0] + 2.0 * p[1]);
    return Vec{v, 2.0 * v};
  };
  std::vector<double> hs, errs;
  for (int k = 0; k <= 6; ++k) {
    double h = 1e-2 / double(1 << k);
    hs.push_back(h);
    errs.push_back(fd_check_gradient(f, Vec{0.2, -0.1}, h));
  }
  double order = decay_order(hs, errs, 1e-12);
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("decay_order handles the roundoff plateau") {
  // synthetic: exact h^2 decay, then a flat noise floor
  std::vector<double> hs = {1e-2, 5e-3, 2.5e-3, 1e-15, 1e-16};
  std::vector<double> errs = {1e-4, 2.5e-5, 6.25e-6, 1e-13, 1e-13};
  CHECK(decay_order(hs, errs, 1e-12) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::isnan(decay_order({1e-2}, {1e-4})));
}
