// First/second fundamental forms, principal curvatures, normalized mean
// curvatures and area weights for radial graphs in the three ambients.
//
// With sigma = +1 (Riemannian) or -1 (de Sitter), lambda = warp(rho) and
// rho_{;ab} the covariant Hessian on (S^n, sigma_round):
//   g_ab   = sigma rho_a rho_b + lambda^2 sigma_ab
//   v^2    = 1 + sigma |D rho|^2 / lambda^2
//   h_ab   = [ sigma(-rho_{;ab} + 2 (lambda'/lambda) rho_a rho_b)
//              + lambda lambda' sigma_ab ] / v
// The signs are pinned by the geodesic-sphere values cot r, coth r, tanh r
// (outward normal in the Riemannian cases, future-directed in de Sitter).
#pragma once

#include <vector>

#include "qmass/body.hpp"

namespace qmass {

struct CurvatureField {
  int n = 2;
  std::size_t N = 0;
  // Symmetric 2x2 blocks packed as (11, 12, 22); only the first entry is
  // used for n=1.
  std::vector<double> g11, g12, g22;
  std::vector<double> h11, h12, h22;
  std::vector<double> kappa;    // N*n, ascending per node
  std::vector<double> E;        // N*(n+1), E_0..E_n per node
  std::vector<double> area_w;   // quadrature-ready dmu weight per node
  std::vector<double> density;  // dmu density relative to the round measure
  std::vector<double> v;        // graph factor
  std::vector<double> grad;     // N*n, coordinate gradient (rho_t, rho_p)

  const double* kappa_at(std::size_t k) const { return &kappa[k * n]; }
  const double* E_at(std::size_t k) const { return &E[k * (n + 1)]; }
};

CurvatureField compute_curvature(const RadialGraphBody& body);

// e_k(kappa) / C(n,k) by the stable recurrence.
double normalized_symmetric(const std::vector<double>& kappa, int k);
void elementary_to_normalized(const double* kappa, int n, double* E_out);

// Ascending eigenvalues of g^{-1} h (g SPD, h symmetric, packed 11/12/22)
// via the symmetric reduction L^{-1} h L^{-T}.
void weingarten_eigen(int n, const double* g, const double* h, double* kappa);

struct ConvexityClass {
  bool strictly_convex = false;
  bool h_convex = false;       // hyperbolic only
  bool unit_bounded = false;   // de Sitter only: 0 < kappa_i <= 1
  std::vector<bool> m_convex;  // index m-1 -> kappa in Gamma^+_m everywhere
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double spacelike_margin = 0.0;  // min v^2 (de Sitter)
};

ConvexityClass classify(const CurvatureField& field, const SpaceForm& space);

}  // namespace qmass
