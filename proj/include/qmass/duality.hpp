// Gauss-map embeddings and polar (dual) bodies across the three ambient
// pairs S <-> S, H -> dS, dS -> H.
//
// Per node the flat position X and the normal representative X* satisfy
// <X, X*> = 0 in the ambient bilinear form; X* is the outward normal for
// Riemannian sources and the future-directed normal representative for
// de Sitter sources. X* read in the dual ambient is the polar hypersurface.
#pragma once

#include <array>
#include <vector>

#include "qmass/body.hpp"
#include "qmass/curvature.hpp"
#include "qmass/resample.hpp"

namespace qmass {

struct AmbientEmbedding {
  SpaceKind source;
  SpaceKind dual;
  std::vector<std::array<double, 4>> X;      // positions, flat coordinates
  std::vector<std::array<double, 4>> Xstar;  // normal representatives
};

SpaceKind dual_space_of(SpaceKind kind);

AmbientEmbedding embed(const RadialGraphBody& body,
                       const CurvatureField& field);

// Principal curvatures of the polar hypersurface evaluated at the Gauss-map
// image of every source node, by finite differencing the embedding fields on
// the source grid (no resampling involved). Also returns the dual area
// weights, which satisfy dmu* = E_n dmu.
struct DualCurvature {
  std::vector<double> kappa;   // N*n, ascending per node
  std::vector<double> area_w;  // dual dmu weight per node
};
DualCurvature gauss_map_dual_curvature(const RadialGraphBody& body,
                                       const CurvatureField& field);

struct PolarOptions {
  ResampleOrder order = ResampleOrder::Quadratic;
  bool recenter_source = true;   // sphere/hyperbolic sources
  double min_kappa = 1e-6;       // degeneracy guard before dualizing
};

// Full polar pipeline: guard, recenter (Riemannian), Gauss map, dual radius
// extraction, triangulated resampling onto the standard grid.
RadialGraphBody polar(const RadialGraphBody& body, const PolarOptions& opts = {});

// max over nodes and principal directions of |kappa_i * kappa*_i - 1| with
// the dual curvatures taken at the Gauss-map image (sorted lists matched in
// opposite order).
double dual_curvature_check(const RadialGraphBody& body);

// Independent oracle: the polar radius in one dual direction by bisecting
// the support condition sup_x <x, y(rho*, dir)> = 0 over the sampled
// boundary.
double brute_force_polar_radius(const RadialGraphBody& body,
                                const std::array<double, 3>& direction);

}  // namespace qmass
