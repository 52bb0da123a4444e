#include "driftlab/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "driftlab/errors.hpp"
#include "driftlab/norms.hpp"

namespace driftlab {

namespace {

// ======================================================================
// indexing and shared Krylov plumbing
// ======================================================================

int unknown_of(const AxisymGrid& g, int i, int j) {
  return (j - 1) * g.n_rho + i;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Eigen::SparseMatrix<double> to_eigen(const SparseSystem& sys) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(sys.coeffs.size());
  for (std::size_t k = 0; k < sys.coeffs.size(); ++k)
    trips.emplace_back(sys.rows[k], sys.cols[k], sys.coeffs[k]);
  Eigen::SparseMatrix<double> A(sys.unknowns, sys.unknowns);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

struct KrylovOutcome {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;
};

// BiCGSTAB with a Jacobi preconditioner.  The internal stopping rule runs a
// decade below the requested tolerance; acceptance is judged on the true
// relative residual so the preconditioner cannot mask a stall.
KrylovOutcome run_bicgstab(const Eigen::SparseMatrix<double>& A,
                           const Eigen::VectorXd& rhs, double tol,
                           int max_iter) {
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>,
                  Eigen::DiagonalPreconditioner<double>>
      krylov;
  krylov.setTolerance(std::max(0.1 * tol, 1e-300));
  krylov.setMaxIterations(max_iter);
  krylov.compute(A);
  KrylovOutcome out;
  out.x = krylov.solve(rhs);
  out.iterations = int(krylov.iterations());
  const double denom = rhs.norm() > 0.0 ? rhs.norm() : 1.0;
  out.residual = (A * out.x - rhs).norm() / denom;
  if (!(out.residual <= tol)) {
    // The recursively updated residual can drift from the true one near the
    // floor; one warm restart recomputes it and usually recovers a decade.
    out.x = krylov.solveWithGuess(rhs, out.x);
    out.iterations += int(krylov.iterations());
    out.residual = (A * out.x - rhs).norm() / denom;
  }
  if (!(out.residual <= tol))
    throw NoConvergence("krylov solve stalled at relative residual " +
                        fmt(out.residual) + " after " +
                        std::to_string(out.iterations) + " iterations");
  return out;
}

// Convection term b . grad v at interior node (i, j) with exactly the scheme
// selection used during assembly, so the successive-substitution operator is
// the assembled operator split into its diffusion and convection parts.
double convection_at(const GridField& v, const AxiVec& b, int i, int j,
                     bool force_upwind) {
  const AxisymGrid& g = v.grid;
  const double hr = g.h_rho(), hz = g.h_z();
  double c = 0.0;
  if (i > 0 && b.rho != 0.0) {
    bool up = force_upwind || std::abs(b.rho) * hr * 0.5 >= 1.0;
    if (up)
      c += b.rho > 0.0 ? b.rho * (v.at(i, j) - v.at(i - 1, j)) / hr
                       : b.rho * (v.at(i + 1, j) - v.at(i, j)) / hr;
    else
      c += b.rho * (v.at(i + 1, j) - v.at(i - 1, j)) / (2.0 * hr);
  }
  if (b.z != 0.0) {
    bool up = force_upwind || std::abs(b.z) * hz * 0.5 >= 1.0;
    if (up)
      c += b.z > 0.0 ? b.z * (v.at(i, j) - v.at(i, j - 1)) / hz
                     : b.z * (v.at(i, j + 1) - v.at(i, j)) / hz;
    else
      c += b.z * (v.at(i, j + 1) - v.at(i, j - 1)) / (2.0 * hz);
  }
  return c;
}

// Shared post-processing: scatter the unknowns into the shell field and fill
// the solution statistics of the report.
void finish_report(const SparseSystem& sys, const Eigen::VectorXd& x,
                   GridField& field, SolveReport& rep) {
  field = sys.shell;
  for (int k = 0; k < sys.unknowns; ++k) field.values[sys.node_index[k]] = x[k];
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : field.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  rep.u_min = lo;
  rep.u_max = hi;
  rep.max_principle_pass =
      sys.has_source ||
      (lo >= sys.boundary_min - 1e-12 && hi <= sys.boundary_max + 1e-12);
  rep.axis_profile.clear();
  for (int j = 0; j <= sys.grid.n_z; ++j)
    rep.axis_profile.emplace_back(sys.grid.z(j), field.at(0, j));
  rep.grad_l2_half_ball = gradient_l2_over_half_ball(field, sys.dim);
  rep.rows_central = rep.rows_upwind = 0;
  rep.rows_upwind_rho = rep.rows_upwind_z = 0;
  for (int k = 0; k < sys.unknowns; ++k) {
    bool ur = sys.upwind_rho[k], uz = sys.upwind_z[k];
    rep.rows_upwind_rho += ur;
    rep.rows_upwind_z += uz;
    (ur || uz ? rep.rows_upwind : rep.rows_central) += 1;
  }
}

// Drift norms over the full cylinder plus the margin of the solution over
// the explicit barrier on the closed truncated cone rho <= z, eps <= z <= 1.
void attach_drift_diagnostics(const BarrierParams& p, const GridField& u,
                              SolveReport& rep) {
  NormReport l1 = lp_norm(magnitude_field(b_eps_field(p)),
                          Domain::cylinder(p.n), 1.0,
                          QuadratureSpec::gauss(64, 4));
  rep.drift_l1 = l1.value;
  rep.gradient_bound_ratio =
      rep.grad_l2_half_ball / std::sqrt(1.0 + rep.drift_l1);
  double margin = std::numeric_limits<double>::infinity();
  long long count = 0;
  const AxisymGrid& g = u.grid;
  for (int j = 0; j <= g.n_z; ++j) {
    double zj = std::min(g.z(j), 1.0);
    if (zj < p.eps) continue;
    for (int i = 0; i <= g.n_rho; ++i) {
      double ri = g.rho(i);
      if (ri > zj * (1.0 + 1e-12)) break;
      double vv = v_eps(std::min(ri, zj), zj, p).v;
      margin = std::min(margin, u.at(i, j) - vv);
      ++count;
    }
  }
  rep.barrier_min_margin = margin;
  rep.barrier_nodes = count;
}

MeridianScalar cylinder_dirichlet(double sign_bottom) {
  return [sign_bottom](double rho, double z) {
    if (rho >= 1.0 - 1e-14) return 0.0;
    if (z >= 1.0 - 1e-14) return std::cos(0.5 * M_PI * rho);
    if (z <= -1.0 + 1e-14) return sign_bottom * std::cos(0.5 * M_PI * rho);
    return 0.0;
  };
}

}  // namespace

// ======================================================================
// assembly
// ======================================================================

SparseSystem assemble_axisym(const AxisymGrid& grid, const MeridianField& drift,
                             const MeridianScalar& dirichlet, int n,
                             const AssembleOptions& opts) {
  if (n < 2)
    throw BadDimension("meridian operator needs dimension n >= 2, got " +
                       std::to_string(n));
  const int nr = grid.n_rho, nz = grid.n_z;
  SparseSystem sys;
  sys.grid = grid;
  sys.dim = n;
  sys.unknowns = (nz - 1) * nr;
  sys.has_source = bool(opts.source);
  sys.shell = GridField::zeros(grid);
  for (int j = 0; j <= nz; ++j) sys.shell.at(nr, j) = dirichlet(1.0, grid.z(j));
  for (int i = 0; i < nr; ++i) {
    sys.shell.at(i, 0) = dirichlet(grid.rho(i), grid.z(0));
    sys.shell.at(i, nz) = dirichlet(grid.rho(i), grid.z(nz));
  }
  double bmin = std::numeric_limits<double>::infinity(), bmax = -bmin;
  auto take = [&](double v) {
    bmin = std::min(bmin, v);
    bmax = std::max(bmax, v);
  };
  for (int j = 0; j <= nz; ++j) take(sys.shell.at(nr, j));
  for (int i = 0; i < nr; ++i) {
    take(sys.shell.at(i, 0));
    take(sys.shell.at(i, nz));
  }
  sys.boundary_min = bmin;
  sys.boundary_max = bmax;

  const double hr = grid.h_rho(), hz = grid.h_z();
  const double ihr2 = 1.0 / (hr * hr), ihz2 = 1.0 / (hz * hz);
  sys.rows.reserve(std::size_t(sys.unknowns) * 5);
  sys.cols.reserve(std::size_t(sys.unknowns) * 5);
  sys.coeffs.reserve(std::size_t(sys.unknowns) * 5);
  sys.rhs.reserve(sys.unknowns);
  sys.node_index.reserve(sys.unknowns);

  auto push = [&sys](int r, int c, double v) {
    sys.rows.push_back(r);
    sys.cols.push_back(c);
    sys.coeffs.push_back(v);
  };

  for (int j = 1; j < nz; ++j) {
    for (int i = 0; i < nr; ++i) {
      const double rho_i = grid.rho(i), z_j = grid.z(j);
      AxiVec b = drift(rho_i, z_j);
      if (!std::isfinite(b.rho) || !std::isfinite(b.z))
        throw NonFiniteDrift("drift not finite at node (" + fmt(rho_i) + ", " +
                             fmt(z_j) + ")");
      double ad = 0.0, ae = 0.0, aw = 0.0, an = 0.0, asv = 0.0;
      bool up_r = false, up_z = false;

      if (i == 0) {
        // Axis row: even mirror turns the radial part into (n-1) u_rr with a
        // doubled east neighbor; radial convection is suppressed there.
        double w = 2.0 * (n - 1) * ihr2;
        ad += w;
        ae -= w;
      } else {
        ad += 2.0 * ihr2;
        ae -= ihr2;
        aw -= ihr2;
        double geo = (n - 2) / (2.0 * rho_i * hr);
        ae -= geo;
        aw += geo;
        if (b.rho != 0.0) {
          up_r = opts.force_upwind || std::abs(b.rho) * hr * 0.5 >= 1.0;
          if (up_r) {
            if (b.rho > 0.0) {
              ad += b.rho / hr;
              aw -= b.rho / hr;
            } else {
              ad -= b.rho / hr;
              ae += b.rho / hr;
            }
          } else {
            ae += b.rho / (2.0 * hr);
            aw -= b.rho / (2.0 * hr);
          }
        }
      }

      ad += 2.0 * ihz2;
      an -= ihz2;
      asv -= ihz2;
      if (b.z != 0.0) {
        up_z = opts.force_upwind || std::abs(b.z) * hz * 0.5 >= 1.0;
        if (up_z) {
          if (b.z > 0.0) {
            ad += b.z / hz;
            asv -= b.z / hz;
          } else {
            ad -= b.z / hz;
            an += b.z / hz;
          }
        } else {
          an += b.z / (2.0 * hz);
          asv -= b.z / (2.0 * hz);
        }
      }

      const int row = unknown_of(grid, i, j);
      double rhs_v = opts.source ? opts.source(rho_i, z_j) : 0.0;
      push(row, row, ad);
      if (i + 1 < nr)
        push(row, unknown_of(grid, i + 1, j), ae);
      else
        rhs_v -= ae * sys.shell.at(nr, j);
      if (i >= 1) push(row, unknown_of(grid, i - 1, j), aw);
      if (j + 1 < nz)
        push(row, unknown_of(grid, i, j + 1), an);
      else
        rhs_v -= an * sys.shell.at(i, nz);
      if (j - 1 >= 1)
        push(row, unknown_of(grid, i, j - 1), asv);
      else
        rhs_v -= asv * sys.shell.at(i, 0);
      sys.rhs.push_back(rhs_v);
      sys.node_index.push_back(j * (nr + 1) + i);

      double slack = 1e-12 * std::abs(ad);
      sys.m_matrix.push_back(ad > 0.0 && ae <= slack && aw <= slack &&
                             an <= slack && asv <= slack);
      sys.upwind_rho.push_back(up_r);
      sys.upwind_z.push_back(up_z);
    }
  }
  return sys;
}

// ======================================================================
// linear solve and the cylinder problems
// ======================================================================

std::pair<GridField, SolveReport> linear_solve(const SparseSystem& sys,
                                               double tol, int max_iter) {
  auto t0 = std::chrono::steady_clock::now();
  Eigen::SparseMatrix<double> A = to_eigen(sys);
  Eigen::VectorXd rhs =
      Eigen::Map<const Eigen::VectorXd>(sys.rhs.data(), sys.unknowns);
  KrylovOutcome out = run_bicgstab(A, rhs, tol, max_iter);
  SolveReport rep;
  rep.iterations = out.iterations;
  rep.residual = out.residual;
  GridField field;
  finish_report(sys, out.x, field, rep);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {field, rep};
}

std::pair<GridField, SolveReport> solve_cylinder_eps(
    const BarrierParams& params, const AxisymGrid& grid, double tol,
    int max_iter) {
  if (grid.z_min != 0.0)
    throw ParamOutOfRange("half-cylinder grid expected (z from 0 to 1)");
  if (grid.h_z() > params.eps / 4.0 * (1.0 + 1e-12))
    throw GridTooCoarse("collar needs h_z <= eps/4: h_z = " + fmt(grid.h_z()) +
                        ", eps = " + fmt(params.eps));
  MeridianField drift = [&params](double rho, double z) {
    return b_eps(rho, z, params);
  };
  SparseSystem sys = assemble_axisym(grid, drift, cylinder_dirichlet(0.0),
                                     params.n);
  auto solved = linear_solve(sys, tol, max_iter);
  attach_drift_diagnostics(params, solved.first, solved.second);
  return solved;
}

std::pair<GridField, SolveReport> solve_cylinder_full(
    const BarrierParams& params, const AxisymGrid& grid, double tol,
    int max_iter) {
  if (grid.z_min != -1.0)
    throw ParamOutOfRange("full-cylinder grid expected (z from -1 to 1)");
  if (grid.h_z() > params.eps / 4.0 * (1.0 + 1e-12))
    throw GridTooCoarse("collar needs h_z <= eps/4: h_z = " + fmt(grid.h_z()) +
                        ", eps = " + fmt(params.eps));
  MeridianField drift = [&params](double rho, double z) {
    return b_eps(rho, z, params);
  };
  SparseSystem sys = assemble_axisym(grid, drift, cylinder_dirichlet(-1.0),
                                     params.n);
  auto solved = linear_solve(sys, tol, max_iter);
  attach_drift_diagnostics(params, solved.first, solved.second);
  return solved;
}

// ======================================================================
// collar sweep
// ======================================================================

std::vector<SweepRow> epsilon_sweep(const std::vector<double>& eps_list,
                                    const BarrierParams& base,
                                    const GridPolicy& policy) {
  if (eps_list.empty()) throw ParamOutOfRange("collar sweep needs at least one width");
  for (std::size_t k = 1; k < eps_list.size(); ++k)
    if (!(eps_list[k] < eps_list[k - 1]))
      throw ParamOutOfRange("collar widths must be strictly decreasing");
  const std::vector<double> probes = {0.05, 0.1, 0.2, 0.4};
  // One common grid, sized for the smallest width: the stabilization deltas
  // compare successive solves, so every row must live on the same nodes or
  // the collar effect would be confounded with the discretization shift.
  int need = int(std::ceil(4.0 / eps_list.back() - 1e-9));
  int cells = policy.min_cells;
  while (cells < need && cells < policy.max_cells) cells *= 2;
  cells = std::min(cells, policy.max_cells);
  AxisymGrid grid = AxisymGrid::make(cells, cells);
  std::vector<SweepRow> rows;
  for (double eps : eps_list) {
    BarrierParams p =
        BarrierParams::make(base.n, base.mu, eps, base.K, base.p_target);
    auto [field, rep] = solve_cylinder_eps(p, grid);
    SweepRow row;
    row.eps = eps;
    row.cells = cells;
    row.probe_heights = probes;
    for (double zp : probes) row.axis_values.push_back(field.interpolate(0.0, zp));
    row.origin_value = field.at(0, 0);
    row.floor_at_2eps = field.interpolate(0.0, 2.0 * eps);
    row.drift_l1 = rep.drift_l1;
    row.drift_lp = lp_norm(magnitude_field(b_eps_field(p)),
                           Domain::cylinder(p.n), p.p_target,
                           QuadratureSpec::gauss(64, 4))
                       .value;
    row.grad_l2_half_ball = rep.grad_l2_half_ball;
    row.gradient_bound_ratio = rep.gradient_bound_ratio;
    row.max_principle_pass = rep.max_principle_pass;
    row.axis_profile = rep.axis_profile;
    if (!rows.empty()) {
      for (std::size_t q = 0; q < probes.size(); ++q)
        row.deltas_from_prev.push_back(row.axis_values[q] -
                                       rows.back().axis_values[q]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ======================================================================
// successive substitution against the drift-free operator
// ======================================================================

std::pair<GridField, SolveReport> neumann_series_solve(
    const MeridianScalar& source, const MeridianField& drift,
    const AxisymGrid& grid, int n, const MeridianScalar& dirichlet,
    double tol, int max_iter) {
  if (max_iter < 1) throw ParamOutOfRange("max_iter must be at least 1");
  auto t0 = std::chrono::steady_clock::now();
  AssembleOptions opts;
  opts.source = source;
  MeridianField no_drift = [](double, double) { return AxiVec{0.0, 0.0}; };
  SparseSystem base = assemble_axisym(grid, no_drift, dirichlet, n, opts);
  SparseSystem full = assemble_axisym(grid, drift, dirichlet, n, opts);
  Eigen::SparseMatrix<double> A0 = to_eigen(base);
  Eigen::SparseMatrix<double> Af = to_eigen(full);
  Eigen::VectorXd rhs0 =
      Eigen::Map<const Eigen::VectorXd>(base.rhs.data(), base.unknowns);
  Eigen::VectorXd rhsf =
      Eigen::Map<const Eigen::VectorXd>(full.rhs.data(), full.unknowns);
  const double denom = rhsf.norm() > 0.0 ? rhsf.norm() : 1.0;
  const double inner_tol = std::max(0.01 * tol, 1e-14);

  GridField v = base.shell;  // boundary data, zero interior
  Eigen::VectorXd xk = Eigen::VectorXd::Zero(base.unknowns);
  SolveReport rep;
  double d_prev = -1.0;
  int bad = 0;
  double resid = std::numeric_limits<double>::infinity();
  int outer = 0;
  while (outer < max_iter) {
    ++outer;
    Eigen::VectorXd rk = rhs0;
    for (int k = 0; k < base.unknowns; ++k) {
      int node = base.node_index[k];
      int i = node % grid.points_rho();
      int j = node / grid.points_rho();
      AxiVec b = drift(grid.rho(i), grid.z(j));
      rk[k] -= convection_at(v, b, i, j, false);
    }
    KrylovOutcome inner = run_bicgstab(A0, rk, inner_tol, 10000);
    double d = (inner.x - xk).norm();
    if (d_prev > 0.0) {
      double ratio = d / d_prev;
      rep.contraction_factors.push_back(ratio);
      if (!(ratio < 1.0)) {
        if (++bad >= 3)
          throw ContractionFailure(
              "update norms grew for three consecutive steps (last ratio " +
              fmt(ratio) + "); drift too strong for successive substitution");
      } else {
        bad = 0;
      }
    }
    d_prev = d;
    xk = inner.x;
    for (int k = 0; k < base.unknowns; ++k) v.values[base.node_index[k]] = xk[k];
    resid = (Af * xk - rhsf).norm() / denom;
    if (resid <= tol) break;
  }
  if (!(resid <= tol))
    throw NoConvergence("successive substitution stalled at relative residual " +
                        fmt(resid) + " after " + std::to_string(outer) +
                        " sweeps");
  rep.iterations = outer;
  rep.residual = resid;
  GridField field;
  finish_report(full, xk, field, rep);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {field, rep};
}

// ======================================================================
// gradient energy over the half ball
// ======================================================================

double gradient_l2_over_half_ball(const GridField& u, int dim) {
  const AxisymGrid& g = u.grid;
  const double hr = g.h_rho(), hz = g.h_z();
  const double sigma = sphere_area(dim - 1);
  double sum = 0.0;
  for (int j = 0; j < g.n_z; ++j) {
    double zm = g.z(j) + 0.5 * hz;
    for (int i = 0; i < g.n_rho; ++i) {
      double rm = (i + 0.5) * hr;
      if (rm * rm + zm * zm >= 0.25) continue;
      double dur = 0.5 *
                   ((u.at(i + 1, j) - u.at(i, j)) +
                    (u.at(i + 1, j + 1) - u.at(i, j + 1))) /
                   hr;
      double duz = 0.5 *
                   ((u.at(i, j + 1) - u.at(i, j)) +
                    (u.at(i + 1, j + 1) - u.at(i + 1, j))) /
                   hz;
      sum += (dur * dur + duz * duz) * std::pow(rm, dim - 2) * hr * hz;
    }
  }
  double total = sigma * sum * (g.z_min < 0.0 ? 1.0 : 2.0);
  return std::sqrt(total);
}

}  // namespace driftlab
