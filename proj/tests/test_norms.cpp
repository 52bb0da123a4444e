#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "driftlab/errors.hpp"
#include "driftlab/example_catalog.hpp"
#include "driftlab/norms.hpp"

using namespace driftlab;

namespace {

ClosedFormScalar constant_field(int n, double c) {
  ClosedFormScalar f;
  f.dim = n;
  f.name = "const";
  f.value = [c](const Vec&) { return c; };
  f.gradient = [n](const Vec&) { return Vec::zero(n); };
  return f;
}

ClosedFormScalar smooth_field() {
  ClosedFormScalar f;
  f.dim = 2;
  f.name = "smooth";
  f.value = [](const Vec& p) { return std::exp(p[0] - 0.5 * p[1]); };
  return f;
}

}  // namespace

// ---------------------------------------------------------------------- Lp

TEST_CASE("lp of a constant on the unit disc") {
  auto q = QuadratureSpec::gauss(64);
  Domain B = Domain::ball(1.0, 2);
  for (double p : {1.0, 2.0, 3.5}) {
    auto rep = lp_norm(constant_field(2, 1.0), B, p, q);
    CHECK(rep.value == doctest::Approx(std::pow(M_PI, 1.0 / p)).epsilon(1e-9));
    CHECK(!rep.diverging);
    CHECK(rep.refine_trail.size() >= 3);
  }
}

TEST_CASE("inverse-distance drift: L2 anchor and L3 divergence") {
  auto c = make_example(ExampleId::Ex3);
  auto babs = magnitude_field(c.b);
  Domain B = Domain::ball(1.0, 3);
  auto q = QuadratureSpec::gauss(32);

  auto l2 = lp_norm(babs, B, 2.0, q);
  // closed form: integral of r^-2 over the unit ball = 4 pi
  CHECK(std::abs(l2.value - std::sqrt(4.0 * M_PI)) <
        0.005 * std::sqrt(4.0 * M_PI));
  CHECK(!l2.diverging);
  CHECK(l2.delta_trail.size() == 3);
  CHECK(l2.inner_cutoff == 1e-4);

  auto l3 = lp_norm(babs, B, 3.0, q);
  // integral of r^-3 = 4 pi ln(1/delta): the cutoff trail must fail Cauchy
  CHECK(l3.diverging);
  for (size_t i = 0; i + 1 < l3.delta_trail.size(); ++i)
    CHECK(l3.delta_trail[i].second < l3.delta_trail[i + 1].second);
}

TEST_CASE("log-log drift is square integrable (trail converges)") {
  auto c = make_example(ExampleId::Ex1);
  auto rep = lp_norm(magnitude_field(c.b), Domain::ball(c.R, 2), 2.0,
                     QuadratureSpec::gauss(64));
  CHECK(!rep.diverging);
  // closed form at the cutoff: sqrt(2 pi (1 - 1/ln(1/delta)))
  double exact = std::sqrt(2.0 * M_PI * (1.0 - 1.0 / std::log(1e4)));
  CHECK(rep.value == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("lp homogeneity and the inclusion inequality") {
  Domain B = Domain::ball(1.0, 2);
  auto q = QuadratureSpec::gauss(32);
  auto f = smooth_field();
  ClosedFormScalar f3 = f;
  f3.value = [](const Vec& p) { return 3.0 * std::exp(p[0] - 0.5 * p[1]); };
  double a = lp_norm(f3, B, 2.0, q).value;
  double b = lp_norm(f, B, 2.0, q).value;
  CHECK(a == doctest::Approx(3.0 * b).epsilon(1e-12));

  // ||f||_p1 <= |B|^{1/p1 - 1/p2} ||f||_p2 for p1 < p2
  double n2 = lp_norm(f, B, 2.0, q).value;
  double n4 = lp_norm(f, B, 4.0, q).value;
  CHECK(n2 <= std::pow(B.measure(), 0.5 - 0.25) * n4 * (1.0 + 1e-12));
  CHECK_THROWS_AS(lp_norm(f, B, 0.5, q), ParamOutOfRange);
}

// ------------------------------------------------------------------ Sobolev

TEST_CASE("first-order seminorm") {
  Domain B = Domain::ball(1.0, 2);
  auto q = QuadratureSpec::gauss(64);
  ClosedFormScalar lin;
  lin.dim = 2;
  lin.value = [](const Vec& p) { return p[0]; };
  lin.gradient = [](const Vec&) { return Vec{1.0, 0.0}; };
  CHECK(w12_seminorm(lin, B, q).value ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-9));

  // both bounded-gradient-energy examples converge in the cutoff trail
  auto c1 = make_example(ExampleId::Ex1);
  auto r1 = w12_seminorm(c1.u, Domain::ball(c1.R, 2), q);
  CHECK(!r1.diverging);
  double exact = std::sqrt(2.0 * M_PI * (1.0 - 1.0 / std::log(1e4)));
  CHECK(r1.value == doctest::Approx(exact).epsilon(1e-6));

  auto c2 = make_example(ExampleId::Ex2);
  auto r2 = w12_seminorm(c2.u, Domain::ball(c2.R, 2), q);
  CHECK(!r2.diverging);
}

// ------------------------------------------------------------------- Orlicz

TEST_CASE("orlicz norm basics") {
  Domain B = Domain::ball(1.0, 2);
  auto q = QuadratureSpec::gauss(32);
  OrliczConfig cfg;

  CHECK(orlicz_l2ln_norm(constant_field(2, 0.0), B, q, cfg).value == 0.0);

  // bisection result k satisfies the defining equation: G(k) = 1
  auto rep = orlicz_l2ln_norm(constant_field(2, 1.0), B, q, cfg);
  double k = rep.value;
  auto G = [&](double kk) {
    auto g = [kk](const Vec&) {
      double t2 = 1.0 / (kk * kk);
      return t2 * std::log1p(t2);
    };
    return integrate(g, B, q).value;
  };
  CHECK(G(k) == doctest::Approx(1.0).epsilon(1e-3));

  // monotone in the scale of f
  auto rep2 = orlicz_l2ln_norm(constant_field(2, 2.0), B, q, cfg);
  CHECK(rep2.value > rep.value);

  // bracket failure when even k_hi cannot tame the integrand
  CHECK_THROWS_AS(orlicz_l2ln_norm(constant_field(2, 1e9), B, q, cfg),
                  BracketFailure);
  OrliczConfig bad;
  bad.k_lo = 2.0;
  bad.k_hi = 1.0;
  CHECK_THROWS_AS(orlicz_l2ln_norm(constant_field(2, 1.0), B, q, bad),
                  ParamOutOfRange);
}

TEST_CASE("log-log drift: L2 converges but the L2-log trail does not") {
  auto c = make_example(ExampleId::Ex1);
  Domain B = Domain::ball(c.R, 2);
  auto q = QuadratureSpec::gauss(64);
  auto babs = magnitude_field(c.b);

  CHECK(!lp_norm(babs, B, 2.0, q).diverging);
  auto orl = orlicz_l2ln_norm(babs, B, q, OrliczConfig{});
  CHECK(orl.diverging);
  CHECK(orl.delta_trail.size() == 3);
}

TEST_CASE("orlicz of the drift away from the origin is an honest norm") {
  auto c = make_example(ExampleId::Ex1);
  auto bval = c.b.value;
  ClosedFormScalar masked;  // |b| on the annulus 0.1 <= |x| <= R, else 0
  masked.dim = 2;
  masked.name = "masked drift magnitude";
  masked.value = [bval](const Vec& p) {
    return (p.norm() >= 0.1) ? bval(p).norm() : 0.0;
  };
  Domain B = Domain::ball(c.R, 2);
  auto q = QuadratureSpec::gauss(64);
  auto rep = orlicz_l2ln_norm(masked, B, q, OrliczConfig{});
  CHECK(!rep.diverging);
  CHECK(rep.value > 0.0);
  // oracle: plugging the returned k back in gives a unit integral
  double k = rep.value;
  auto g = [&](const Vec& p) {
    double t = masked.value(p) / k;
    return t * t * std::log1p(t * t);
  };
  CHECK(integrate(g, B, q).value == doctest::Approx(1.0).epsilon(1e-3));
}

// ------------------------------------------------------------- Morrey / BMO

TEST_CASE("morrey sup of a constant sits on the largest inscribed ball") {
  Domain B = Domain::ball(1.0, 2);
  auto rep = morrey_norm(constant_field(2, 1.0), B, 2.0, 0.0, SamplingPlan{},
                         QuadratureSpec::gauss(16));
  CHECK(rep.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-9));
  CHECK(morrey_norm(constant_field(2, 0.0), B, 2.0, 0.0, SamplingPlan{},
                    QuadratureSpec::gauss(16)).value == 0.0);
}

TEST_CASE("inverse-distance drift lies on the critical Morrey shelf") {
  auto c = make_example(ExampleId::Ex3);
  Domain B = Domain::ball(1.0, 3);
  auto babs = magnitude_field(c.b);
  // alpha = n/q - 1 = 1/2: origin-centered balls give r^{-1/2} sqrt(4 pi r)
  SamplingPlan p1;
  p1.centers = 32;
  p1.radii = 8;
  auto r1 = morrey_norm(babs, B, 2.0, 0.5, p1, QuadratureSpec::gauss(16));
  CHECK(r1.value == doctest::Approx(std::sqrt(4.0 * M_PI)).epsilon(0.02));

  SamplingPlan p2 = p1;
  p2.centers = 64;
  p2.radii = 16;
  auto r2 = morrey_norm(babs, B, 2.0, 0.5, p2, QuadratureSpec::gauss(16));
  CHECK(r2.value >= r1.value);                               // monotone
  CHECK(std::abs(r2.value - r1.value) <= 0.05 * r1.value);   // stable
  // prefix trail is monotone nondecreasing by construction
  for (size_t i = 0; i + 1 < r2.refine_trail.size(); ++i)
    CHECK(r2.refine_trail[i].second <= r2.refine_trail[i + 1].second);
}

TEST_CASE("bmo seminorm") {
  Domain B = Domain::ball(1.0, 2);
  auto qs = QuadratureSpec::gauss(16);
  CHECK(bmo_seminorm(constant_field(2, 3.0), B, SamplingPlan{}, qs).value <=
        1e-12);

  // canonical BMO function: mean oscillation of ln|x| over origin balls
  // equals exp(-1) at every radius
  ClosedFormScalar lnr;
  lnr.dim = 2;
  lnr.name = "ln r";
  lnr.singular = SingularSet::origin();
  lnr.value = [](const Vec& p) { return std::log(p.norm()); };
  SamplingPlan p1;
  p1.centers = 32;
  auto r1 = bmo_seminorm(lnr, B, p1, qs);
  CHECK(r1.value >= std::exp(-1.0) * 0.999);
  CHECK(r1.value <= 1.5);  // same scale as the origin-ball value
  SamplingPlan p2;
  p2.centers = 64;
  auto r2 = bmo_seminorm(lnr, B, p2, qs);
  CHECK(r2.value >= r1.value);
  CHECK(std::abs(r2.value - r1.value) <= 0.10 * r1.value);

  // linear field: oscillation bounded by max|grad| times the diameter
  ClosedFormScalar lin;
  lin.dim = 2;
  lin.value = [](const Vec& p) { return p[0]; };
  CHECK(bmo_seminorm(lin, B, SamplingPlan{}, qs).value <= 2.0);
}

// ------------------------------------------------------------------- Holder

TEST_CASE("holder exponent recovers power laws") {
  std::vector<double> scales = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  for (double beta : {0.25, 0.5, 0.75, 1.0}) {
    ClosedFormScalar f;
    f.dim = 2;
    f.value = [beta](const Vec& p) { return std::pow(p.norm(), beta); };
    auto fit = holder_exponent(f, Point::zero(2), scales);
    CHECK(std::abs(fit.alpha_hat - beta) <= 0.05);
    CHECK(fit.residual <= 1e-10);
    CHECK(!fit.degenerate);
  }
}

TEST_CASE("constant field is flagged as oscillation-free") {
  auto fit = holder_exponent(constant_field(2, 4.0), Point::zero(2),
                             {1e-2, 1e-3, 1e-4, 1e-5});
  CHECK(fit.degenerate);
  CHECK(std::isnan(fit.alpha_hat));
}

TEST_CASE("reciprocal-log modulus: slope at desk scales, then deeper") {
  auto c = make_example(ExampleId::Ex2);
  // osc(B_r) = 1/|ln r| gives the exact least-squares slope 0.117607 over
  // the desk-scale window 1e-2..1e-6 (computed from the closed form)
  auto fit = holder_exponent(c.u, Point::zero(2),
                             {1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
  CHECK(fit.alpha_hat == doctest::Approx(0.117607).epsilon(1e-3));
  // far below desk scale the slope keeps sinking toward 0 (no positive
  // Holder exponent) - evaluated in closed form, still exact in doubles
  auto deep = holder_exponent(c.u, Point::zero(2),
                              {1e-14, 1e-15, 1e-16, 1e-17, 1e-18, 1e-19, 1e-20});
  CHECK(deep.alpha_hat < 0.05);
  CHECK(deep.alpha_hat > 0.0);
}

TEST_CASE("holder input validation") {
  auto f = constant_field(2, 1.0);
  CHECK_THROWS_AS(holder_exponent(f, Point::zero(2), {0.1, 0.01}),
                  ParamOutOfRange);
  CHECK_THROWS_AS(holder_exponent(f, Point::zero(2), {0.1, 0.01, -1.0, 0.5}),
                  ParamOutOfRange);
}

// ------------------------------------------------------- unboundedness probe

TEST_CASE("sup probe grows without bound for the blow-up solutions") {
  for (ExampleId id : {ExampleId::Ex1, ExampleId::Ex3}) {
    auto c = make_example(id);
    Domain B = Domain::ball(c.R, c.n);
    double s2 = sampled_sup(c.u, B, 1e-2);
    double s4 = sampled_sup(c.u, B, 1e-4);
    double s6 = sampled_sup(c.u, B, 1e-6);
    INFO("example ", to_string(id));
    CHECK(s2 < s4);
    CHECK(s4 < s6);
  }
  // anchor: the log-log solution's sup on |x| >= delta is ln(-ln delta)
  auto c1 = make_example(ExampleId::Ex1);
  CHECK(sampled_sup(c1.u, Domain::ball(c1.R, 2), 1e-4) ==
        doctest::Approx(std::log(-std::log(1e-4))).epsilon(1e-12));
}
