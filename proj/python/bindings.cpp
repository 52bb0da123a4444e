// Thin python face over the core library: the example catalog with its
// residuals and norms, the barrier profile/certificate, and the collar
// solve.  Heavy lifting stays in C++; this file only converts types.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>

#include "driftlab/barrier.hpp"
#include "driftlab/errors.hpp"
#include "driftlab/example_catalog.hpp"
#include "driftlab/norms.hpp"
#include "driftlab/solver.hpp"
#include "driftlab/weak_form.hpp"

namespace py = pybind11;
using namespace driftlab;

namespace {

ExampleCase lookup(const std::string& id) {
  auto parsed = parse_example_id(id);
  if (!parsed) throw py::value_error("unknown example id: " + id);
  return make_example(*parsed);
}

Vec to_vec(const std::vector<double>& xs) {
  if (xs.empty() || xs.size() > std::size_t(kMaxDim))
    throw py::value_error("point dimension out of range");
  Vec v = Vec::zero(int(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v[i] = xs[i];
  return v;
}

BarrierParams params(int n, double mu, double eps, double K, double p) {
  return BarrierParams::make(n, mu, eps, K, p);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "explicit drift counterexamples: residuals, norms, barrier, solve";

  py::register_exception<ParamOutOfRange>(m, "ParamOutOfRange",
                                          PyExc_ValueError);
  py::register_exception<BadDimension>(m, "BadDimension", PyExc_ValueError);
  py::register_exception<OutOfDomain>(m, "OutOfDomain", PyExc_ValueError);
  py::register_exception<GridTooCoarse>(m, "GridTooCoarse", PyExc_ValueError);

  // ------------------------------------------------------------- examples

  m.def("example_ids", [] {
    return std::vector<std::string>{"ex1", "ex2", "ex3", "ex4"};
  });

  m.def(
      "example_info",
      [](const std::string& id) {
        ExampleCase c = lookup(id);
        py::dict d;
        d["id"] = std::string(to_string(c.id));
        d["dim"] = c.n;
        d["radius"] = c.R;
        d["claims"] = c.claims;
        return d;
      },
      py::arg("id"));

  m.def(
      "strong_residual",
      [](const std::string& id, const std::vector<double>& x) {
        ExampleCase c = lookup(id);
        return strong_residual(c, to_vec(x));
      },
      py::arg("id"), py::arg("x"),
      "-lap u + b.grad u at a point of the example's punctured ball");

  m.def(
      "weak_residual",
      [](const std::string& id, const std::vector<double>& center,
         double radius, int cells, double hole) {
        ExampleCase c = lookup(id);
        BumpFunction h(to_vec(center), radius);
        QuadratureSpec q = QuadratureSpec::gauss(cells);
        if (hole > 0.0) q = q.refined_at(Point::zero(c.n), hole);
        return weak_residual_grad_form(c.u, c.b, h, Domain::ball(c.R, c.n), q)
            .value;
      },
      py::arg("id"), py::arg("center"), py::arg("radius"),
      py::arg("cells") = 48, py::arg("hole") = 0.0,
      "integral of grad u . (grad h + b h) against one bump function");

  m.def(
      "drift_norm",
      [](const std::string& id, double p) {
        ExampleCase c = lookup(id);
        NormReport r = lp_norm(magnitude_field(c.b), Domain::ball(c.R, c.n),
                               p, QuadratureSpec::gauss(48, 4));
        return py::make_tuple(r.value, r.diverging);
      },
      py::arg("id"), py::arg("p") = 2.0,
      "(L_p norm of |b|, diverging flag) over the example's ball");

  m.def(
      "orlicz_norm",
      [](const std::string& id) {
        ExampleCase c = lookup(id);
        NormReport r = orlicz_l2ln_norm(magnitude_field(c.b),
                                        Domain::ball(c.R, c.n),
                                        QuadratureSpec::gauss(48, 4),
                                        OrliczConfig{});
        return py::make_tuple(r.value, r.diverging);
      },
      py::arg("id"),
      "(L_2 ln L norm of |b|, diverging flag) over the example's ball");

  m.def(
      "holder_slope",
      [](const std::string& id, const std::vector<double>& scales) {
        ExampleCase c = lookup(id);
        HolderFit fit = holder_exponent(c.u, Point::zero(c.n), scales);
        py::dict d;
        d["alpha_hat"] = fit.alpha_hat;
        d["residual"] = fit.residual;
        d["degenerate"] = fit.degenerate;
        return d;
      },
      py::arg("id"), py::arg("scales"),
      "log-log oscillation slope of the example's u at the origin");

  // -------------------------------------------------------------- barrier

  m.def(
      "constants",
      [](int n, double mu) {
        DerivedConstants c = derive_constants(n, mu);
        py::dict d;
        d["d_mu"] = c.d_mu;
        d["c1"] = c.c1;
        d["c2"] = c.c2;
        d["c3"] = c.c3;
        d["K_min"] = c.K_min;
        return d;
      },
      py::arg("n") = 3, py::arg("mu") = 1.25);

  m.def(
      "profile",
      [](double z, int n, double mu, double eps, double K, double p) {
        RampValues v = f_eps(z, params(n, mu, eps, K, p));
        return py::make_tuple(v.f, v.fp, v.fpp);
      },
      py::arg("z"), py::arg("n") = 3, py::arg("mu") = 1.25,
      py::arg("eps") = 0.05, py::arg("K") = 70.0, py::arg("p") = 2.0,
      "(f, f', f'') of the normalized ramp profile at height z");

  m.def(
      "drift_at",
      [](double rho, double z, int n, double mu, double eps, double K,
         double p) {
        AxiVec b = b_eps(rho, z, params(n, mu, eps, K, p));
        return py::make_tuple(b.rho, b.z);
      },
      py::arg("rho"), py::arg("z"), py::arg("n") = 3, py::arg("mu") = 1.25,
      py::arg("eps") = 0.05, py::arg("K") = 70.0, py::arg("p") = 2.0,
      "meridian components of the mollified drift");

  m.def(
      "barrier_at",
      [](double rho, double z, int n, double mu, double eps, double K,
         double p) {
        BarrierValue v = v_eps(rho, z, params(n, mu, eps, K, p));
        py::dict d;
        d["v"] = v.v;
        d["d_rho"] = v.d_rho;
        d["d_z"] = v.d_z;
        d["lap"] = v.lap;
        return d;
      },
      py::arg("rho"), py::arg("z"), py::arg("n") = 3, py::arg("mu") = 1.25,
      py::arg("eps") = 0.05, py::arg("K") = 70.0, py::arg("p") = 2.0);

  m.def(
      "check_profile",
      [](int n, double mu, double eps, double K, double p, int count) {
        FPropertyCheck c = check_f_properties(params(n, mu, eps, K, p), count);
        py::dict d;
        d["pass"] = c.pass;
        d["f_at_2eps"] = c.f_at_2eps;
        d["min_growth_margin"] = c.min_growth_margin;
        d["min_damping_margin"] = c.min_damping_margin;
        d["points"] = c.points;
        return d;
      },
      py::arg("n") = 3, py::arg("mu") = 1.25, py::arg("eps") = 0.05,
      py::arg("K") = 70.0, py::arg("p") = 2.0, py::arg("count") = 4000,
      "sign, growth and damping properties of f on a z grid");

  m.def(
      "check_certificate",
      [](int n, double mu, double eps, double K, double p, int count) {
        BarrierCheck c = check_barrier_inequality(params(n, mu, eps, K, p),
                                                  count);
        py::dict d;
        d["min_value"] = c.min_value;
        d["argmin_rho"] = c.argmin_rho;
        d["argmin_z"] = c.argmin_z;
        d["samples"] = c.samples;
        return d;
      },
      py::arg("n") = 3, py::arg("mu") = 1.25, py::arg("eps") = 0.05,
      py::arg("K") = 70.0, py::arg("p") = 2.0, py::arg("count") = 4000,
      "min of lap v - b.grad v over cone samples; positive certifies");

  // ---------------------------------------------------------------- solve

  m.def(
      "solve_collar",
      [](double eps, int cells, int n, double mu, double K, double p) {
        BarrierParams bp = params(n, mu, eps, K, p);
        auto [u, rep] = solve_cylinder_eps(bp, AxisymGrid::make(cells, cells));
        double floor = 1e300;
        for (auto& [z, v] : rep.axis_profile)
          if (z >= 2.0 * eps) floor = std::min(floor, v);
        py::dict d;
        d["iterations"] = rep.iterations;
        d["residual"] = rep.residual;
        d["origin"] = rep.axis_profile.front().second;
        d["floor"] = floor;
        d["max_principle"] = rep.max_principle_pass;
        d["gradient_bound_ratio"] = rep.gradient_bound_ratio;
        d["axis"] = rep.axis_profile;
        return d;
      },
      py::arg("eps") = 0.1, py::arg("cells") = 64, py::arg("n") = 3,
      py::arg("mu") = 1.25, py::arg("K") = 70.0, py::arg("p") = 2.0,
      "solve the collar problem on the half cylinder; floor is the axis "
      "minimum above the collar");
}
