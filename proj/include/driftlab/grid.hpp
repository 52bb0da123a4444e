#pragma once

#include <cstddef>
#include <vector>

namespace driftlab {

// ============================================================================
// Tensor meridian grid for the axisymmetric cylinder problems.  rho spans
// [0, 1]; z spans [z_min, z_max] ([0,1] for the half cylinder used by the
// oddness reduction, [-1,1] for full-cylinder consistency runs).  Node (i, j)
// sits at (i h_rho, z_min + j h_z).  The axis i = 0 carries degrees of
// freedom; every other edge is Dirichlet.
// ============================================================================

struct AxisymGrid {
  int n_rho = 8, n_z = 8;  // cell counts per direction
  double z_min = 0.0, z_max = 1.0;

  double h_rho() const { return 1.0 / n_rho; }
  double h_z() const { return (z_max - z_min) / n_z; }
  int points_rho() const { return n_rho + 1; }
  int points_z() const { return n_z + 1; }
  double rho(int i) const { return i * h_rho(); }
  double z(int j) const { return z_min + j * h_z(); }

  // Half-cylinder meridian [0,1] x [0,1].  Throws ParamOutOfRange below 8
  // cells per direction.
  static AxisymGrid make(int n_rho, int n_z);
  // Full-cylinder meridian [0,1] x [-1,1] with the same spacing as the half
  // grid of n_z_half cells.
  static AxisymGrid make_full(int n_rho, int n_z_half);
};

// Node values in row-major order with z slowest: values[j * (n_rho+1) + i].
struct GridField {
  AxisymGrid grid;
  std::vector<double> values;

  static GridField zeros(const AxisymGrid& g);

  double& at(int i, int j) {
    return values[std::size_t(j) * grid.points_rho() + i];
  }
  double at(int i, int j) const {
    return values[std::size_t(j) * grid.points_rho() + i];
  }
  // Bilinear interpolation, arguments clamped to the grid rectangle.
  double interpolate(double rho, double z) const;
};

}  // namespace driftlab
