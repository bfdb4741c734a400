// Quermassintegrals W_0..W_{n+1}, the ball functions f_k and their inverses,
// mean radii, and the pairing constants C_{n,k}.
//
// Recursion (epsilon_rec = +1 sphere, -1 hyperbolic and de Sitter):
//   W_0 = Vol, W_1 = Area/(n+1),
//   W_{k+1} = Int(E_k dmu)/(n+1) + epsilon_rec * k/(n+2-k) * W_{k-1}.
// The closed forms expand W_m (1 <= m <= n) into double-factorial
// combinations of the curvature integrals, with a volume term for even m.
#pragma once

#include <vector>

#include "qmass/body.hpp"
#include "qmass/curvature.hpp"

namespace qmass {

enum class QuermassMethod { Recursion, ClosedForm };

struct QuermassVector {
  SpaceForm space;
  int n = 2;
  std::vector<double> W;          // W_0..W_{n+1}
  std::vector<double> zeta;       // zeta_0..zeta_n (NaN when out of range)
  std::vector<bool> zeta_ok;      // range flags for zeta
  QuermassMethod method = QuermassMethod::Recursion;
};

// Enclosed volume: per-node adaptive Simpson of warp(r)^n composed with the
// grid weights (de Sitter: region between the zero slice and the graph).
double body_volume(const RadialGraphBody& body);

QuermassVector quermassintegrals(const RadialGraphBody& body,
                                 const CurvatureField& field,
                                 QuermassMethod method = QuermassMethod::Recursion);

// Curvature integrals Int(E_k dmu), k = 0..n (shared by both methods).
std::vector<double> curvature_integrals(const CurvatureField& field);

// f_k(r) = W_k(B_r) through the exact boundary integrals
// Int(E_m dmu) = omega_n lambda^{n-m} lambda'^m; de Sitter reads the slice
// region {0 <= r' <= r}.
double ball_f(const SpaceForm& space, int n, int k, double r);
double ball_f_derivative(const SpaceForm& space, int n, int k, double r);

// Exact quermass vector of a ball/slice (closed-form path, no grid).
std::vector<double> ball_quermass(const SpaceForm& space, int n, double r);

// zeta_k = f_k^{-1}(w): bisection bracket from a cached monotone-cubic table
// (4096 samples) polished by Newton on the exact f_k.
double invert_f(const SpaceForm& space, int n, int k, double w);

// Range of f_k: [f_k(0), f_k(r_max)) with r_max = pi/2 for the sphere.
void ball_f_range(const SpaceForm& space, int n, int k, double* lo, double* hi);

enum class PairKind { SphereSphere, HyperbolicDeSitter };

// The constant value of the conserved pairing of Theorems 1.1/1.2-type:
// sphere pair: (k+1) W_k(K) + (n+1-k) W_{n-k}(K*);
// hyperbolic/de Sitter pair: (n+1-k) W_{n-k}(K*) - (k+1) W_k(K) for a
// hyperbolic primal (the sign that is actually conserved).
double constant_Cnk(PairKind pair, int n, int k);

// The conserved pairing evaluated from the two quermass vectors; source is
// the space of K. Equals constant_Cnk(..., n, k) for sphere/hyperbolic
// primals and constant_Cnk(..., n, n-k) for de Sitter primals.
double pair_functional(const SpaceForm& source, int n, int k,
                       const std::vector<double>& W_K,
                       const std::vector<double>& W_dual);
double pair_constant(const SpaceForm& source, int n, int k);

}  // namespace qmass
