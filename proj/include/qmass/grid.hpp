// Structured grids on S^1 and S^2 with quadrature weights and 4th-order
// centered finite differences.
//
// The S^2 grid is equiangular lat-long with cell-midpoint colatitudes
// theta_i = (i + 1/2) * pi / n_theta (no pole nodes) and uniform azimuths.
// Stencils cross the poles by the symmetric extension
// f(-theta, phi) = f(theta, phi + pi), which needs an even n_phi.
// Quadrature weights are exact spherical cell areas, so the total weight is
// omega_n to rounding at any resolution.
#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "qmass/common.hpp"

namespace qmass {

struct SphericalGrid {
  int n = 2;                 // base sphere dimension, 1 or 2
  int n_theta = 0;           // rows (n=2 only)
  int n_phi = 0;             // columns
  double dtheta = 0.0;
  double dphi = 0.0;
  std::vector<double> theta, sin_theta, cos_theta;  // per row (n=2)
  std::vector<double> phi, sin_phi, cos_phi;        // per column
  std::vector<double> weight;                        // per node, sums to omega_n
  std::vector<std::array<double, 3>> dir;            // unit node directions

  std::size_t num_nodes() const {
    return n == 1 ? static_cast<std::size_t>(n_phi)
                  : static_cast<std::size_t>(n_theta) * n_phi;
  }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_phi + j;
  }
};

using GridPtr = std::shared_ptr<const SphericalGrid>;

// n=1: make_grid(1, N); n=2: make_grid(2, n_theta, n_phi) with n_phi even.
GridPtr make_grid(int n, int res0, int res1 = 0);

// First and second grid-coordinate partial derivatives of a scalar field.
// For n=1 only dp/dpp are populated.
struct GridDerivs {
  std::vector<double> dt, dp, dtt, dtp, dpp;
};

void grid_derivatives(const SphericalGrid& grid, const std::vector<double>& f,
                      GridDerivs& out, bool second = true);

// Quadrature: sum of w_i * f_i, accumulated serially.
double integrate(const SphericalGrid& grid, const std::vector<double>& f);

// Bilinear (n=2) or linear (n=1) interpolation of a grid field at a unit
// direction; used by diagnostics and tests, not by the resampling pipeline.
double interpolate(const SphericalGrid& grid, const std::vector<double>& f,
                   const std::array<double, 3>& u);

}  // namespace qmass
