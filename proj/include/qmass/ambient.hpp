// The three ambient space forms as warped products over S^n.
//
// All three are realized as level sets in a flat (n+2)-dimensional vector
// space: the sphere in Euclidean R^{n+2}, hyperbolic space and the upper
// branch of de Sitter space in Minkowski R^{n+1,1} (index 0 is the time
// axis). A point at warped-product coordinates (r, theta) embeds as
//     embed0(r) * e0 + embed1(r) * theta,
// with (embed0, embed1) = (cos, sin), (cosh, sinh), (sinh, cosh).
#pragma once

#include <array>
#include <string>

#include "qmass/common.hpp"

namespace qmass {

enum class SpaceKind { Sphere, Hyperbolic, DeSitterUpper };

struct Interval {
  double lo;
  double hi;  // half-open [lo, hi); hi may be infinity
};

struct SpaceForm {
  SpaceKind kind;

  // Metric signature of the radial direction: +1 Riemannian, -1 Lorentzian.
  int sigma() const { return kind == SpaceKind::DeSitterUpper ? -1 : 1; }
  // Ambient sectional curvature.
  int epsilon() const { return kind == SpaceKind::Hyperbolic ? -1 : 1; }
  // Sign pattern of the recursion coupling term; de Sitter follows the
  // hyperbolic pattern.
  int epsilon_recursion() const { return kind == SpaceKind::Sphere ? 1 : -1; }

  Interval radial_interval() const;
  bool riemannian() const { return kind != SpaceKind::DeSitterUpper; }

  // Diagonal entry of the flat bilinear form on the e0 axis.
  double form_e0() const { return kind == SpaceKind::Sphere ? 1.0 : -1.0; }

  // Warp factor lambda(r) and its derivative.
  double warp(double r) const;
  double dwarp(double r) const;

  // Flat embedding scalars and their derivatives.
  double embed0(double r) const;   // e0 component
  double embed1(double r) const;   // warp direction component (= warp)
  double dembed0(double r) const;
  double dembed1(double r) const;

  std::string name() const;
};

SpaceForm make_space(SpaceKind kind);
SpaceForm space_from_name(const std::string& name);

// warp with domain checking (throws ErrorCode::Domain outside the interval).
double warp(const SpaceForm& space, double r);
double dwarp(const SpaceForm& space, double r);

// Common principal curvature of the geodesic sphere {r = const} with the
// conventions pinned by the ball values: cot r, coth r, tanh r.
double ball_principal_curvature(const SpaceForm& space, double r);

}  // namespace qmass
