// Shared test utilities: deterministic random bodies and exact oracles.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qmass/body.hpp"
#include "qmass/curvature.hpp"

namespace qmass::testing {

// Closed-form radial volume antiderivatives, independent of the library's
// adaptive quadrature path.
inline double radial_volume_exact(const SpaceForm& space, int n, double rho) {
  switch (space.kind) {
    case SpaceKind::Sphere:
      return n == 1 ? 1.0 - std::cos(rho)
                    : 0.5 * (rho - std::sin(rho) * std::cos(rho));
    case SpaceKind::Hyperbolic:
      return n == 1 ? std::cosh(rho) - 1.0
                    : 0.5 * (std::sinh(rho) * std::cosh(rho) - rho);
    case SpaceKind::DeSitterUpper:
      return n == 1 ? std::sinh(rho)
                    : 0.5 * (std::sinh(rho) * std::cosh(rho) + rho);
  }
  return 0.0;
}

// A boosted coordinate slice of de Sitter space: spacelike with constant
// principal curvature tanh(a), non-trivial as a graph. Its polar is the
// hyperbolic ball of radius a centered at boost distance beta along u.
inline RadialGraphBody make_boosted_slice(double a, double beta,
                                          const std::array<double, 3>& u,
                                          GridPtr grid) {
  const SpaceForm space = make_space(SpaceKind::DeSitterUpper);
  RadialGraphBody body{space, grid, std::vector<double>(grid->num_nodes())};
  const double A = std::cosh(beta);
  for (std::size_t k = 0; k < body.rho.size(); ++k) {
    const auto& d = grid->dir[k];
    const double B = std::sinh(beta) * (d[0] * u[0] + d[1] * u[1] + d[2] * u[2]);
    const double R = std::sqrt(A * A - B * B);
    const double psi = std::atanh(B / A);
    body.rho[k] = psi + std::asinh(std::sinh(a) / R);
  }
  validate_body(body);
  return body;
}

struct RandomBodyOptions {
  double r_min = 0.5, r_max = 1.0;
  double amp = 0.04;        // relative to r
  int max_mode = 8;         // triangular harmonic index bound (n=2)
  int num_modes = 3;
  bool require_h_convex = false;     // hyperbolic
  bool require_unit_bounded = false; // de Sitter
  bool even_only = false;            // antipodally symmetric modes only
};

// Deterministic hypothesis-satisfying random perturbed ball; shrinks the
// amplitudes until the classification gate passes.
inline RadialGraphBody random_convex_body(const SpaceForm& space, GridPtr grid,
                                          std::mt19937_64& rng,
                                          const RandomBodyOptions& opt = {}) {
  std::uniform_real_distribution<double> ur(opt.r_min, opt.r_max);
  std::uniform_real_distribution<double> ua(-1.0, 1.0);
  const double r = ur(rng);
  std::vector<Perturbation> modes;
  std::uniform_int_distribution<int> um(1, opt.max_mode);
  for (int i = 0; i < opt.num_modes; ++i) {
    int m = um(rng);
    if (opt.even_only && grid->n == 2) {
      // Triangular index of (l, q): keep only even-degree l rows (2,4).
      m = (i % 2 == 0) ? 3 + (m % 3) : 6 + (m % 4) + 4;  // l=2 or l=4 rows
    }
    modes.push_back({m, opt.amp * r * ua(rng)});
  }
  for (double shrink = 1.0; shrink > 1e-3; shrink *= 0.5) {
    std::vector<Perturbation> scaled = modes;
    for (auto& p : scaled) p.amplitude *= shrink;
    RadialGraphBody body = make_perturbed_ball(space, r, scaled, grid);
    try {
      const CurvatureField f = compute_curvature(body);
      const ConvexityClass c = classify(f, space);
      if (!c.strictly_convex) continue;
      if (opt.require_h_convex && !c.h_convex) continue;
      if (opt.require_unit_bounded && !c.unit_bounded) continue;
      return body;
    } catch (const Error&) {
      continue;
    }
  }
  return make_ball(space, r, 0.0, {0, 0, 1}, grid);
}

}  // namespace qmass::testing
