#include "driftlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "driftlab/errors.hpp"

namespace driftlab {

AxisymGrid AxisymGrid::make(int n_rho, int n_z) {
  if (n_rho < 8 || n_z < 8)
    throw ParamOutOfRange("grid needs at least 8 cells per direction, got " +
                          std::to_string(n_rho) + "x" + std::to_string(n_z));
  AxisymGrid g;
  g.n_rho = n_rho;
  g.n_z = n_z;
  g.z_min = 0.0;
  g.z_max = 1.0;
  return g;
}

AxisymGrid AxisymGrid::make_full(int n_rho, int n_z_half) {
  AxisymGrid g = make(n_rho, n_z_half);  // validates the counts
  g.n_z = 2 * n_z_half;
  g.z_min = -1.0;
  g.z_max = 1.0;
  return g;
}

GridField GridField::zeros(const AxisymGrid& g) {
  GridField f;
  f.grid = g;
  f.values.assign(std::size_t(g.points_rho()) * g.points_z(), 0.0);
  return f;
}

double GridField::interpolate(double rho, double z) const {
  double s = std::clamp(rho, 0.0, 1.0) / grid.h_rho();
  double t = (std::clamp(z, grid.z_min, grid.z_max) - grid.z_min) / grid.h_z();
  int i = std::min(int(s), grid.n_rho - 1);
  int j = std::min(int(t), grid.n_z - 1);
  double a = s - i, b = t - j;
  return (1.0 - a) * (1.0 - b) * at(i, j) + a * (1.0 - b) * at(i + 1, j) +
         (1.0 - a) * b * at(i, j + 1) + a * b * at(i + 1, j + 1);
}

}  // namespace driftlab
