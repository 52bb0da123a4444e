#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "driftlab/barrier.hpp"
#include "driftlab/grid.hpp"

namespace driftlab {

// ============================================================================
// Finite-difference discretization of  -Lap u + b . grad u = f  on the
// meridian rectangle, written in cylindrical coordinates for dimension n:
//
//   -u_rr - (n-2)/rho u_r - u_zz + b_rho u_r + b_z u_z = f.
//
// The axis rho = 0 is a symmetry line: the radial part collapses to
// (n-1) u_rr with a mirrored neighbor, and any radial drift component
// supplied there is ignored (the even reflection forces u_r = 0).  All other
// edges are Dirichlet.  Convection switches per node and per direction from
// central differencing to first-order upwinding when the cell Peclet number
// |b| h / 2 reaches 1, which keeps the assembled rows diagonally dominant
// with nonpositive off-diagonal entries wherever the switch engages.
// ============================================================================

using MeridianScalar = std::function<double(double rho, double z)>;
using MeridianField = std::function<AxiVec(double rho, double z)>;

struct AssembleOptions {
  MeridianScalar source;      // right-hand side f; empty means zero
  bool force_upwind = false;  // upwind everywhere regardless of Peclet
};

// One assembled linear system in COO form.  Unknowns are the interior nodes
// (j = 1..n_z-1, i = 0..n_rho-1) numbered (j-1)*n_rho + i; `node_index` maps
// an unknown back to its flat grid node.  `shell` holds the Dirichlet data on
// boundary nodes and zeros inside.  Per-row flags record which convection
// scheme fired and whether the row came out with the sign pattern of an
// M-matrix row (positive diagonal, nonpositive off-diagonals).
struct SparseSystem {
  AxisymGrid grid;
  int dim = 3;
  int unknowns = 0;
  std::vector<int> rows, cols;
  std::vector<double> coeffs;
  std::vector<double> rhs;
  std::vector<int> node_index;
  std::vector<char> m_matrix, upwind_rho, upwind_z;
  GridField shell;
  bool has_source = false;
  double boundary_min = 0.0, boundary_max = 0.0;
};

// Throws BadDimension for n < 2 and NonFiniteDrift if the drift evaluates to
// a non-finite value at any interior node.  n = 2 drops the geometric term
// and discretizes the plain Laplacian on the square.
SparseSystem assemble_axisym(const AxisymGrid& grid, const MeridianField& drift,
                             const MeridianScalar& dirichlet, int n,
                             const AssembleOptions& opts = {});

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;    // relative true residual (absolute if rhs == 0)
  double wall_seconds = 0.0;  // in-memory diagnostic; never serialized
  long long rows_central = 0, rows_upwind = 0;
  long long rows_upwind_rho = 0, rows_upwind_z = 0;
  double u_min = 0.0, u_max = 0.0;
  // For source-free runs: solution stays inside the boundary-data range up to
  // 1e-12.  Vacuously true when a source term is present.
  bool max_principle_pass = true;
  std::vector<std::pair<double, double>> axis_profile;  // (z_j, u(0, z_j))
  double grad_l2_half_ball = 0.0;   // ||grad u||_L2 over the ball r < 1/2
  double drift_l1 = 0.0;            // ||b||_L1 over the cylinder
  double gradient_bound_ratio = 0.0;  // grad_l2_half_ball / sqrt(1 + drift_l1)
  double barrier_min_margin = 0.0;  // min of u - v over the truncated cone
  long long barrier_nodes = 0;
  std::vector<double> contraction_factors;  // successive-substitution mode
};

// Krylov solve (BiCGSTAB, Jacobi preconditioner) of the assembled system.
// Deterministic for fixed inputs.  Throws NoConvergence with the reached
// residual if the tolerance is not met within max_iter iterations.
std::pair<GridField, SolveReport> linear_solve(const SparseSystem& sys,
                                               double tol, int max_iter);

// Dirichlet problem for the mollified cone drift on the half cylinder:
// u = 0 on z = 0 and rho = 1, u = cos(pi rho / 2) on z = 1.  Requires
// h_z <= eps / 4 (GridTooCoarse otherwise) so the collar is resolved.
// Fills the drift norms, the gradient-to-drift ratio, and the margin of the
// solution over the explicit barrier on the truncated cone.
std::pair<GridField, SolveReport> solve_cylinder_eps(const BarrierParams& params,
                                                     const AxisymGrid& grid,
                                                     double tol = 1e-10,
                                                     int max_iter = 20000);

// Same problem posed on the full cylinder z in [-1, 1] with odd boundary
// data (u = -cos(pi rho / 2) on z = -1, no condition on z = 0).  Used to
// confirm that the computed solution is odd in z, which justifies solving on
// the half cylinder.  The grid must come from AxisymGrid::make_full.
std::pair<GridField, SolveReport> solve_cylinder_full(const BarrierParams& params,
                                                      const AxisymGrid& grid,
                                                      double tol = 1e-10,
                                                      int max_iter = 20000);

struct GridPolicy {
  int min_cells = 128;
  int max_cells = 256;
};

// One row of the collar-width sweep: the axis profile sampled at fixed
// heights, the value at z = 2 eps (the floor the barrier guarantees), drift
// norms, and the gradient ratio.  `deltas_from_prev` holds the change of the
// probe values against the previous (coarser-collar) row.
struct SweepRow {
  double eps = 0.0;
  int cells = 0;
  std::vector<double> probe_heights;
  std::vector<double> axis_values;
  std::vector<double> deltas_from_prev;
  double origin_value = 0.0;
  double floor_at_2eps = 0.0;
  double drift_lp = 0.0;  // L_{p_target} norm of the mollified drift
  double drift_l1 = 0.0;
  double grad_l2_half_ball = 0.0;
  double gradient_bound_ratio = 0.0;
  bool max_principle_pass = false;
  std::vector<std::pair<double, double>> axis_profile;  // (z, u(0, z))
};

// Runs solve_cylinder_eps for each collar width (strictly decreasing list).
// All entries share one grid — the smallest power of two at or above
// ceil(4 / eps_min), clamped to the policy range — so that the
// deltas_from_prev column compares solves on identical nodes and is not
// confounded by a discretization shift.
std::vector<SweepRow> epsilon_sweep(const std::vector<double>& eps_list,
                                    const BarrierParams& base,
                                    const GridPolicy& policy = {});

// Successive substitution u_{k+1} = L0^{-1}(f - b . grad u_k) built on the
// same discretization as assemble_axisym (L0 is the drift-free operator).
// Records the per-step contraction factors and throws ContractionFailure
// after three consecutive non-contracting steps.  Converges to the direct
// solve of the full system because both use identical stencils.
std::pair<GridField, SolveReport> neumann_series_solve(
    const MeridianScalar& source, const MeridianField& drift,
    const AxisymGrid& grid, int n, const MeridianScalar& dirichlet,
    double tol, int max_iter);

// ||grad u||_L2 over the ball of radius 1/2, from per-cell midpoint averages
// of the face differences.  Half-cylinder grids count the mirror half once
// more; full-cylinder grids integrate both halves directly.
double gradient_l2_over_half_ball(const GridField& u, int dim);

}  // namespace driftlab
