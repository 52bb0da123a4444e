// ============================================================================
// driftlab — command-line front end.
//
// One subcommand per module surface:
//
//   examples   catalog listing and pointwise residual verification
//   norms      Lp / Sobolev / Orlicz measurements of a catalog pair
//   weakform   trilinear antisymmetry and Rayleigh quotients for stream drifts
//   barrier    ramp/drift/barrier certificate for one parameter set
//   solve      one Dirichlet solve on the half or full cylinder
//   sweep      collar-width sweep with stabilization deltas
//   report     condensed all-module health report
//
// Machine-readable output goes to --out (or stdout when --out is omitted);
// a one-line human summary goes to stdout (stderr when stdout carries data).
// Exit codes: 0 all checks passed, 1 a check failed or a computation broke
// down, 2 usage error (bad flag, violated precondition — named on stderr,
// nothing computed).  Identical flags (and seed) give byte-identical files.
// ============================================================================

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "driftlab/barrier.hpp"
#include "driftlab/errors.hpp"
#include "driftlab/example_catalog.hpp"
#include "driftlab/norms.hpp"
#include "driftlab/reports.hpp"
#include "driftlab/rng.hpp"
#include "driftlab/solver.hpp"
#include "driftlab/weak_form.hpp"

using namespace driftlab;
using ordered_json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- plumbing

struct Output {
  std::string path;         // empty: primary text goes to stdout
  std::string format;       // "csv" | "json"; resolved before dispatch
  std::vector<std::string> written;

  bool to_stdout() const { return path.empty(); }
  bool json() const { return format == "json"; }

  // Primary machine-readable payload.
  void emit(const std::string& text) {
    if (to_stdout()) {
      std::cout << text;
      return;
    }
    write_file(path, text);
  }

  // Secondary payloads (axis profiles) derived from the main path.
  void emit_named(const std::string& file, const std::string& text) {
    if (to_stdout()) return;  // nowhere sensible to put them
    write_file(file, text);
  }

  // The summary line must not contaminate data sent to stdout.
  std::ostream& summary() { return to_stdout() ? std::cerr : std::cout; }

  std::string sibling(const std::string& suffix) const {
    std::string stem = path;
    std::size_t dot = stem.find_last_of('.');
    std::size_t slash = stem.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
      stem.resize(dot);
    return stem + suffix;
  }

 private:
  void write_file(const std::string& file, const std::string& text) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw ParamOutOfRange("cannot open output file " + file);
    os << text;
    written.push_back(file);
  }
};

std::string short_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string files_note(const Output& out) {
  if (out.written.empty()) return "";
  std::string s = " (wrote";
  for (const auto& f : out.written) s += " " + f;
  s += ")";
  return s;
}

std::string trail_text(const std::vector<std::pair<int, double>>& trail) {
  std::string s;
  for (std::size_t i = 0; i < trail.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(trail[i].first) + ":" + format_real(trail[i].second);
  }
  return s;
}

ExampleCase example_from_flags(const std::string& id_text,
                               std::optional<int> n_override) {
  auto id = parse_example_id(id_text);
  if (!id)
    throw ParamOutOfRange("--id must be one of ex1, ex2, ex3, ex4 (got '" +
                          id_text + "')");
  return make_example(*id, n_override);
}

AxisymGrid grid_from_flag(const std::string& text, bool full_cylinder) {
  int nr = 0, nz = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%dx%d%c", &nr, &nz, &tail) != 2)
    throw ParamOutOfRange("--grid expects NrhoxNz, e.g. 128x128 (got '" +
                          text + "')");
  if (!full_cylinder) return AxisymGrid::make(nr, nz);
  if (nz % 2 != 0)
    throw ParamOutOfRange("--grid Nz must be even for the full cylinder");
  return AxisymGrid::make_full(nr, nz / 2);
}

// --------------------------------------------------------------- examples

int run_examples_list(Output& out) {
  std::string csv = csv_line({"id", "n", "radius", "claims"});
  for (ExampleId id :
       {ExampleId::Ex1, ExampleId::Ex2, ExampleId::Ex3, ExampleId::Ex4}) {
    ExampleCase c = make_example(id);
    std::string claims;
    for (std::size_t k = 0; k < c.claims.size(); ++k) {
      if (k) claims += ';';
      claims += c.claims[k];
    }
    csv +=
        csv_line({to_string(id), std::to_string(c.n), format_real(c.R), claims});
  }
  out.emit(csv);
  out.summary() << "examples list: 4 cases" << files_note(out) << "\n";
  return 0;
}

int run_examples_verify(const std::string& id_text, std::optional<int> n_over,
                        int points, std::uint64_t seed, Output& out) {
  if (points < 1) throw ParamOutOfRange("--points must be at least 1");
  ExampleCase c = example_from_flags(id_text, n_over);

  Rng rng(seed);
  std::vector<Point> xs;
  std::vector<double> residuals;
  double max_res = 0.0;
  for (int k = 0; k < points; ++k) {
    Vec dir = rng.direction(c.n);
    double r = rng.uniform(1e-3, 0.9 * c.R);
    Point p = dir * r;
    double res = std::abs(strong_residual(c, p));
    xs.push_back(p);
    residuals.push_back(res);
    max_res = std::max(max_res, res);
  }
  const bool pass = max_res <= 1e-8;

  if (out.json()) {
    ordered_json rows = ordered_json::array();
    for (int k = 0; k < points; ++k) {
      ordered_json pt = ordered_json::array();
      for (int d = 0; d < c.n; ++d) pt.push_back(xs[k][d]);
      rows.push_back(ordered_json{{"point", pt},
                                  {"radius", xs[k].norm()},
                                  {"residual", residuals[k]}});
    }
    ordered_json j{{"id", to_string(c.id)}, {"n", c.n},
                   {"points", points},     {"max_residual", max_res},
                   {"pass", pass},         {"rows", std::move(rows)}};
    out.emit(j.dump(2) + "\n");
  } else {
    std::vector<std::string> header = {"index"};
    for (int d = 1; d <= c.n; ++d) header.push_back("x" + std::to_string(d));
    header.push_back("radius");
    header.push_back("strong_residual");
    std::string csv = csv_line(header);
    for (int k = 0; k < points; ++k) {
      std::vector<std::string> cells = {std::to_string(k)};
      for (int d = 0; d < c.n; ++d) cells.push_back(format_real(xs[k][d]));
      cells.push_back(format_real(xs[k].norm()));
      cells.push_back(format_real(residuals[k]));
      csv += csv_line(cells);
    }
    out.emit(csv);
  }
  out.summary() << "examples verify " << to_string(c.id) << ": " << points
                << " points, max residual " << short_real(max_res) << " -> "
                << (pass ? "PASS" : "FAIL") << files_note(out) << "\n";
  return pass ? 0 : 1;
}

// ------------------------------------------------------------------ norms

int run_norms(const std::string& id_text, std::optional<int> n_over,
              const std::string& kind, double p_exp, int quad_cells,
              int quad_order, Output& out) {
  ExampleCase c = example_from_flags(id_text, n_over);
  Domain dom = Domain::ball(c.R, c.n);
  QuadratureSpec q = QuadratureSpec::gauss(quad_cells, quad_order);

  NormReport r;
  if (kind == "lp") {
    if (p_exp < 1.0) throw ParamOutOfRange("--p must be at least 1");
    r = lp_norm(magnitude_field(c.b), dom, p_exp, q);
  } else if (kind == "orlicz") {
    r = orlicz_l2ln_norm(magnitude_field(c.b), dom, q, OrliczConfig{});
  } else {  // "w12", membership enforced by the flag parser
    r = w12_seminorm(c.u, dom, q);
  }
  r.params = std::string(to_string(c.id)) + " " + r.params;

  out.emit(out.json() ? norm_report_json(r) : norm_reports_csv({r}));
  out.summary() << "norms " << kind << " " << to_string(c.id) << ": value "
                << short_real(r.value)
                << (r.diverging ? " (diverging delta-trail)" : "")
                << files_note(out) << "\n";
  return 0;  // a measurement, not a check
}

// --------------------------------------------------------------- weakform

struct WeakRow {
  std::string form, label, bump;
  double value = 0.0;
  std::string trail;
};

std::string bump_text(const BumpFunction& b) {
  std::string s = "c=(";
  for (int d = 0; d < b.dim; ++d) s += (d ? " " : "") + short_real(b.center[d]);
  s += ") r=" + short_real(b.radius);
  return s;
}

int run_weakform(int streams, std::uint64_t seed, double delta, int quad_cells,
                 int quad_order, Output& out) {
  if (streams < 1) throw ParamOutOfRange("--samples must be at least 1");
  if (!(delta > 0.0) || delta >= 1e-2)
    throw ParamOutOfRange("--delta must lie in (0, 1e-2)");
  QuadratureSpec q = QuadratureSpec::gauss(quad_cells, quad_order);
  Domain dom = Domain::ball(1.0, 2);

  // Fixed fleet of test-function pairs strictly inside the unit disc.
  const std::vector<std::pair<BumpFunction, BumpFunction>> pairs = {
      {BumpFunction({0.25, 0.10}, 0.30), BumpFunction({-0.20, 0.15}, 0.35)},
      {BumpFunction({0.00, 0.00}, 0.45), BumpFunction({0.30, -0.25}, 0.28)},
      {BumpFunction({-0.30, -0.30}, 0.30), BumpFunction({0.10, 0.35}, 0.33)},
      {BumpFunction({0.40, 0.00}, 0.25), BumpFunction({-0.05, -0.40}, 0.30)},
      {BumpFunction({0.15, -0.15}, 0.40), BumpFunction({-0.35, 0.20}, 0.26)},
  };

  std::vector<WeakRow> rows;
  bool pass = true;
  Rng rng(seed);
  for (int s = 0; s < streams; ++s) {
    StreamField2D stream = polynomial_stream(rng);
    ClosedFormVector b = stream.induced();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto& [phi, psi] = pairs[k];
      double t_fw = trilinear_form(b, phi, psi, dom, q);
      double t_bw = trilinear_form(b, psi, phi, dom, q);
      // absolute floor so that near-vanishing T does not inflate the ratio
      double scale = std::max({1.0, std::abs(t_fw), std::abs(t_bw)});
      double antisym = std::abs(t_fw + t_bw) / scale;
      pass = pass && antisym <= 1e-8;
      std::string label =
          "stream" + std::to_string(s) + "-pair" + std::to_string(k);
      std::string bumps = bump_text(phi) + "; " + bump_text(psi);
      rows.push_back({"antisym", label, bumps, antisym, ""});
      rows.push_back({"rayleigh", label, bumps,
                      rayleigh_quotient(b, phi, psi, dom, q), ""});
    }
  }

  // The singular stream lives on the ball of radius 1/e (inside it
  // |ln r| >= 1, so only the origin is singular); the bumps straddle the
  // origin and the quadrature digs at it with a polar hole.  Trail keys are
  // -log10 of the hole radius.
  {
    StreamField2D sing = loglog_stream();
    ClosedFormVector b = sing.induced();
    Domain sdom = Domain::ball(std::exp(-1.0), 2);
    BumpFunction phi({0.05, 0.0}, 0.2);
    BumpFunction psi({-0.08, 0.03}, 0.15);
    std::vector<std::pair<int, double>> trail;
    double value = 0.0;
    for (double d : {1e-3, 1e-4, delta}) {
      QuadratureSpec qq = q.refined_at(Vec::zero(2), d);
      value = rayleigh_quotient(b, phi, psi, sdom, qq);
      trail.push_back({int(std::round(-std::log10(d))), value});
    }
    rows.push_back({"rayleigh-singular", "loglog",
                    bump_text(phi) + "; " + bump_text(psi), value,
                    trail_text(trail)});
  }

  if (out.json()) {
    ordered_json arr = ordered_json::array();
    for (const WeakRow& r : rows)
      arr.push_back(ordered_json{{"form", r.form},
                                 {"case", r.label},
                                 {"bump", r.bump},
                                 {"value", r.value},
                                 {"trail", r.trail}});
    ordered_json j{{"rows", std::move(arr)}, {"pass", pass}};
    out.emit(j.dump(2) + "\n");
  } else {
    std::string csv = csv_line({"form", "case", "bump", "value", "trail"});
    for (const WeakRow& r : rows)
      csv += csv_line({r.form, r.label, r.bump, format_real(r.value), r.trail});
    out.emit(csv);
  }

  out.summary() << "weakform: " << streams << " streams x " << pairs.size()
                << " pairs, antisymmetry " << (pass ? "PASS" : "FAIL")
                << files_note(out) << "\n";
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------- barrier

int run_barrier(int n, double mu, double eps, double K, double p_target,
                int samples, Output& out) {
  if (samples < 1) throw ParamOutOfRange("--samples must be at least 1");
  BarrierParams params = BarrierParams::make(n, mu, eps, K, p_target);
  BarrierReport report = make_barrier_report(params, samples, samples);

  out.emit(out.json() ? barrier_report_json(report)
                      : barrier_reports_csv({report}));
  out.summary() << "barrier check: min defect "
                << short_real(report.inequality.min_value) << ", f margins "
                << short_real(report.f_check.min_growth_margin) << "/"
                << short_real(report.f_check.min_damping_margin) << " -> "
                << (report.pass ? "PASS" : "FAIL") << files_note(out) << "\n";
  return report.pass ? 0 : 1;
}

// ------------------------------------------------------------------ solve

int run_solve(int n, double mu, double eps, double K, double p_target,
              const std::string& grid_text, bool full, double tol, int max_iter,
              Output& out) {
  if (!(tol > 0.0)) throw ParamOutOfRange("--tol must be positive");
  if (max_iter < 1) throw ParamOutOfRange("--max-iter must be at least 1");
  BarrierParams params = BarrierParams::make(n, mu, eps, K, p_target);
  AxisymGrid grid = grid_from_flag(grid_text, full);

  auto [field, report] = full
                             ? solve_cylinder_full(params, grid, tol, max_iter)
                             : solve_cylinder_eps(params, grid, tol, max_iter);
  const bool pass = report.max_principle_pass &&
                    (full || report.barrier_min_margin >= -1e-12);

  out.emit(out.json() ? solve_report_json(report)
                      : solve_reports_csv({report}));
  if (!out.to_stdout())
    out.emit_named(out.sibling("_axis.csv"),
                   axis_profile_csv(report.axis_profile));
  out.summary() << "solve eps=" << short_real(eps) << " grid=" << grid.n_rho
                << "x" << grid.n_z << ": " << report.iterations
                << " iterations, residual " << short_real(report.residual)
                << ", floor " << short_real(field.interpolate(0.0, 2 * eps))
                << " -> " << (pass ? "PASS" : "FAIL") << files_note(out)
                << "\n";
  return pass ? 0 : 1;
}

// ------------------------------------------------------------------ sweep

int run_sweep(int n, double mu, double K, double p_target,
              const std::vector<double>& eps_list, const std::string& grid_text,
              Output& out) {
  BarrierParams base = BarrierParams::make(n, mu, 0.1, K, p_target);
  GridPolicy policy;
  if (!grid_text.empty()) {
    AxisymGrid cap = grid_from_flag(grid_text, false);
    if (cap.n_rho != cap.n_z)
      throw ParamOutOfRange("--grid must be square for sweeps, e.g. 256x256");
    policy.max_cells = cap.n_rho;
    policy.min_cells = std::min(policy.min_cells, policy.max_cells);
  }

  std::vector<SweepRow> rows = epsilon_sweep(eps_list, base, policy);

  bool pass = true;
  double ratio_lo = rows.front().gradient_bound_ratio;
  double ratio_hi = ratio_lo;
  for (const SweepRow& r : rows) {
    pass =
        pass && r.max_principle_pass && std::isfinite(r.gradient_bound_ratio);
    ratio_lo = std::min(ratio_lo, r.gradient_bound_ratio);
    ratio_hi = std::max(ratio_hi, r.gradient_bound_ratio);
  }
  pass = pass && ratio_hi <= 3.0 * ratio_lo;

  out.emit(out.json() ? sweep_rows_json(rows) : sweep_rows_csv(rows));
  if (!out.to_stdout())
    for (const SweepRow& r : rows)
      out.emit_named(out.sibling("_eps" + short_real(r.eps) + "_axis.csv"),
                     axis_profile_csv(r.axis_profile));
  out.summary() << "sweep: " << rows.size() << " widths on "
                << rows.front().cells << "^2 cells, gradient ratio "
                << short_real(ratio_lo) << ".." << short_real(ratio_hi)
                << " -> " << (pass ? "PASS" : "FAIL") << files_note(out)
                << "\n";
  return pass ? 0 : 1;
}

// ----------------------------------------------------------------- report

struct HealthCheck {
  std::string section, name;
  double value = 0.0;
  bool pass = false;
};

int run_report(std::uint64_t seed, Output& out) {
  std::vector<HealthCheck> checks;
  auto add = [&checks](const std::string& sec, const std::string& name,
                       double value, bool ok) {
    checks.push_back({sec, name, value, ok});
  };

  // residual identities at modest budgets
  Rng rng(seed);
  for (ExampleId id :
       {ExampleId::Ex1, ExampleId::Ex2, ExampleId::Ex3, ExampleId::Ex4}) {
    ExampleCase c = make_example(id);
    double max_res = 0.0;
    for (int k = 0; k < 25; ++k) {
      Point p = rng.direction(c.n) * rng.uniform(1e-3, 0.9 * c.R);
      max_res = std::max(max_res, std::abs(strong_residual(c, p)));
    }
    add("examples", std::string("residual-") + to_string(id), max_res,
        max_res <= 1e-8);
  }

  // norm anchors
  {
    QuadratureSpec q = QuadratureSpec::gauss(48, 4);
    ExampleCase ex3 = make_example(ExampleId::Ex3);
    NormReport l2 =
        lp_norm(magnitude_field(ex3.b), Domain::ball(ex3.R, ex3.n), 2.0, q);
    double target = std::sqrt(4.0 * M_PI);
    add("norms", "ex3-drift-l2", l2.value,
        std::abs(l2.value - target) <= 0.005 * target);

    ExampleCase ex1 = make_example(ExampleId::Ex1);
    NormReport l2e1 =
        lp_norm(magnitude_field(ex1.b), Domain::ball(ex1.R, ex1.n), 2.0, q);
    add("norms", "ex1-drift-l2-converges", l2e1.value, !l2e1.diverging);
    NormReport orl = orlicz_l2ln_norm(magnitude_field(ex1.b),
                                      Domain::ball(ex1.R, ex1.n), q,
                                      OrliczConfig{});
    add("norms", "ex1-drift-orlicz-diverges", orl.value, orl.diverging);
  }

  // trilinear antisymmetry on a small fleet
  {
    QuadratureSpec q = QuadratureSpec::gauss(64, 6);
    Domain dom = Domain::ball(1.0, 2);
    BumpFunction phi({0.25, 0.1}, 0.3), psi({-0.2, 0.15}, 0.35);
    Rng wrng(seed);
    double worst = 0.0;
    for (int s = 0; s < 3; ++s) {
      ClosedFormVector b = polynomial_stream(wrng).induced();
      double fw = trilinear_form(b, phi, psi, dom, q);
      double bw = trilinear_form(b, psi, phi, dom, q);
      worst = std::max(
          worst,
          std::abs(fw + bw) / std::max({1.0, std::abs(fw), std::abs(bw)}));
    }
    add("weakform", "antisymmetry", worst, worst <= 1e-8);
  }

  // barrier certificate at the default corner
  {
    BarrierReport r =
        make_barrier_report(BarrierParams::defaults(0.05), 4000, 4000);
    add("barrier", "certificate", r.inequality.min_value, r.pass);
  }

  // one fast solve
  {
    BarrierParams p = BarrierParams::defaults(0.1);
    auto [field, rep] = solve_cylinder_eps(p, AxisymGrid::make(64, 64));
    add("solve", "max-principle", rep.u_max, rep.max_principle_pass);
    add("solve", "origin-pinned", field.at(0, 0), field.at(0, 0) == 0.0);
    add("solve", "floor-above-c1", field.interpolate(0.0, 0.2),
        field.interpolate(0.0, 0.2) >= p.consts.c1);
    add("solve", "barrier-dominated", rep.barrier_min_margin,
        rep.barrier_min_margin >= -1e-12);
  }

  bool all = true;
  for (const HealthCheck& c : checks) all = all && c.pass;

  if (out.json()) {
    ordered_json arr = ordered_json::array();
    for (const HealthCheck& c : checks)
      arr.push_back(ordered_json{{"section", c.section},
                                 {"check", c.name},
                                 {"value", c.value},
                                 {"pass", c.pass}});
    ordered_json j{{"checks", std::move(arr)}, {"pass", all}};
    out.emit(j.dump(2) + "\n");
  } else {
    std::string csv = csv_line({"section", "check", "value", "pass"});
    for (const HealthCheck& c : checks)
      csv += csv_line({c.section, c.name, format_real(c.value),
                       c.pass ? "true" : "false"});
    out.emit(csv);
  }
  int failed = 0;
  for (const HealthCheck& c : checks)
    if (!c.pass) ++failed;
  out.summary() << "report: " << checks.size() << " checks, " << failed
                << " failed -> " << (all ? "PASS" : "FAIL") << files_note(out)
                << "\n";
  return all ? 0 : 1;
}

}  // namespace

// ======================================================================
// argument wiring
// ======================================================================

int main(int argc, char** argv) {
  CLI::App app{"driftlab: drift-perturbed Laplace laboratory"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expanded help for every subcommand");

  // Shared knobs; each subcommand registers the subset it consumes.  The
  // initializers are the documented defaults — options not passed leave
  // them untouched.
  int n = 3;
  double mu = 1.25, eps = 0.05, K = 70.0, p_exp = 2.0, delta = 1e-5;
  double tol = 1e-10;
  int max_iter = 20000, samples = 10000, points = 100;
  int quad_cells = 64, quad_order = 4;
  std::uint64_t seed = 2024;
  std::string grid_text = "128x128", id_text, kind = "lp", sweep_grid;
  std::vector<double> eps_list;
  bool full = false;
  Output out;

  auto add_output = [&out](CLI::App* cmd) {
    cmd->add_option("--out", out.path, "output file (default: stdout)");
    cmd->add_option("--format", out.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  // examples ------------------------------------------------------------
  auto* cmd_examples = app.add_subcommand("examples", "explicit (u, b) pairs");
  cmd_examples->require_subcommand(1);
  auto* ex_list = cmd_examples->add_subcommand("list", "print the catalog");
  add_output(ex_list);
  auto* ex_verify = cmd_examples->add_subcommand(
      "verify", "pointwise residual of -lap u + b.grad u");
  ex_verify->add_option("--id", id_text, "case: ex1..ex4")->required();
  ex_verify->add_option("--n", n, "dimension override (ex3/ex4)");
  ex_verify->add_option("--points", points, "sample count (default 100)");
  ex_verify->add_option("--seed", seed, "sampling seed (default 2024)");
  add_output(ex_verify);

  // norms ---------------------------------------------------------------
  auto* cmd_norms =
      app.add_subcommand("norms", "Lp / Sobolev / Orlicz measurements");
  cmd_norms->add_option("--id", id_text, "case: ex1..ex4")->required();
  cmd_norms->add_option("--n", n, "dimension override (ex3/ex4)");
  cmd_norms
      ->add_option("--kind", kind,
                   "lp (of |b|), orlicz (of |b|), w12 (of u); default lp")
      ->check(CLI::IsMember({"lp", "orlicz", "w12"}));
  cmd_norms->add_option("--p", p_exp, "Lp exponent (default 2)");
  cmd_norms->add_option("--quad-cells", quad_cells,
                        "quadrature cells per axis (default 64)");
  cmd_norms->add_option("--quad-order", quad_order,
                        "Gauss points per cell (default 4)");
  add_output(cmd_norms);

  // weakform ------------------------------------------------------------
  auto* cmd_weak = app.add_subcommand(
      "weakform", "trilinear antisymmetry and Rayleigh quotients");
  cmd_weak->add_option("--samples", samples,
                       "number of random stream fields (default 10)");
  cmd_weak->add_option("--seed", seed, "stream coefficient seed (default 2024)");
  cmd_weak->add_option("--delta", delta,
                       "finest polar-refinement radius (default 1e-5)");
  cmd_weak->add_option("--quad-cells", quad_cells,
                       "quadrature cells per axis (default 64)");
  cmd_weak->add_option("--quad-order", quad_order,
                       "Gauss points per cell (default 6)");
  add_output(cmd_weak);

  // barrier -------------------------------------------------------------
  auto* cmd_barrier =
      app.add_subcommand("barrier", "comparison-barrier certificate");
  cmd_barrier->require_subcommand(1);
  auto* bar_check = cmd_barrier->add_subcommand(
      "check", "ramp properties + positivity of the barrier defect");
  bar_check->add_option("--n", n, "dimension >= 3 (default 3)");
  bar_check->add_option("--mu", mu, "drift growth exponent (default 1.25)");
  bar_check->add_option("--eps", eps, "collar width (default 0.05)");
  bar_check->add_option("--K", K, "drift strength (default 70)");
  bar_check->add_option("--p", p_exp, "target integrability (default 2)");
  bar_check->add_option("--samples", samples,
                        "cone sample count (default 10000)");
  add_output(bar_check);

  // solve ---------------------------------------------------------------
  auto* cmd_solve =
      app.add_subcommand("solve", "Dirichlet solve with the collar drift");
  cmd_solve->add_option("--eps", eps, "collar width")->required();
  cmd_solve->add_option("--n", n, "dimension >= 3 (default 3)");
  cmd_solve->add_option("--mu", mu, "drift growth exponent (default 1.25)");
  cmd_solve->add_option("--K", K, "drift strength (default 70)");
  cmd_solve->add_option("--p", p_exp, "target integrability (default 2)");
  cmd_solve->add_option("--grid", grid_text, "cells NrhoxNz (default 128x128)");
  cmd_solve->add_flag("--full", full,
                      "full cylinder z in [-1,1] (odd-extension check)");
  cmd_solve->add_option("--tol", tol,
                        "relative residual target (default 1e-10)");
  cmd_solve->add_option("--max-iter", max_iter,
                        "Krylov iteration cap (default 20000)");
  add_output(cmd_solve);

  // sweep ---------------------------------------------------------------
  auto* cmd_sweep =
      app.add_subcommand("sweep", "collar-width sweep on one common grid");
  cmd_sweep
      ->add_option("--eps", eps_list,
                   "strictly decreasing widths, e.g. 0.1,0.05,0.025")
      ->required()
      ->delimiter(',');
  cmd_sweep->add_option("--n", n, "dimension >= 3 (default 3)");
  cmd_sweep->add_option("--mu", mu, "drift growth exponent (default 1.25)");
  cmd_sweep->add_option("--K", K, "drift strength (default 70)");
  cmd_sweep->add_option("--p", p_exp, "target integrability (default 2)");
  cmd_sweep->add_option("--grid", sweep_grid,
                        "square cap for the common grid, e.g. 256x256");
  add_output(cmd_sweep);

  // report --------------------------------------------------------------
  auto* cmd_report =
      app.add_subcommand("report", "condensed all-module health report");
  cmd_report->add_option("--seed", seed, "sampling seed (default 2024)");
  add_output(cmd_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);  // prints the message to stderr
    return 2;
  }

  auto resolve_format = [&out](const char* def) {
    if (out.format.empty()) out.format = def;
  };

  try {
    if (ex_list->parsed()) {
      resolve_format("csv");
      return run_examples_list(out);
    }
    if (ex_verify->parsed()) {
      resolve_format("csv");
      std::optional<int> n_over;
      if (ex_verify->count("--n")) n_over = n;
      return run_examples_verify(id_text, n_over, points, seed, out);
    }
    if (cmd_norms->parsed()) {
      resolve_format("csv");
      std::optional<int> n_over;
      if (cmd_norms->count("--n")) n_over = n;
      return run_norms(id_text, n_over, kind, p_exp, quad_cells, quad_order,
                       out);
    }
    if (cmd_weak->parsed()) {
      resolve_format("csv");
      int streams = cmd_weak->count("--samples") ? samples : 10;
      int order = cmd_weak->count("--quad-order") ? quad_order : 6;
      return run_weakform(streams, seed, delta, quad_cells, order, out);
    }
    if (bar_check->parsed()) {
      resolve_format("json");
      return run_barrier(n, mu, eps, K, p_exp, samples, out);
    }
    if (cmd_solve->parsed()) {
      resolve_format("json");
      return run_solve(n, mu, eps, K, p_exp, grid_text, full, tol, max_iter,
                       out);
    }
    if (cmd_sweep->parsed()) {
      resolve_format("csv");
      return run_sweep(n, mu, K, p_exp, eps_list, sweep_grid, out);
    }
    if (cmd_report->parsed()) {
      resolve_format("json");
      return run_report(seed, out);
    }
  } catch (const ParamOutOfRange& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const BadDimension& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const GridTooCoarse& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    // computation-level failure: the run happened but a check broke down
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "usage error: no subcommand selected\n";
  return 2;
}
