// Plain serial reference implementations of the parallel kernels, kept for
// equivalence testing and for the benchmark target.
#pragma once

#include "qmass/curvature.hpp"
#include "qmass/duality.hpp"

namespace qmass::serial_ref {

// Straight-line per-node loop; same formulas as compute_curvature but with
// no threading and scalar accumulation order.
CurvatureField compute_curvature(const RadialGraphBody& body);

// Barycentric (piecewise-linear) polar pipeline without threading.
RadialGraphBody polar_linear(const RadialGraphBody& body);

double integrate(const SphericalGrid& grid, const std::vector<double>& f);

}  // namespace qmass::serial_ref
