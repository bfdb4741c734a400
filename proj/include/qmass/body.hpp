// Bodies as radial graphs over a discretized S^n, plus generators and JSON
// serialization.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmass/ambient.hpp"
#include "qmass/grid.hpp"

namespace qmass {

struct RadialGraphBody {
  SpaceForm space;
  GridPtr grid;
  std::vector<double> rho;
};

struct Perturbation {
  // n=1: mode m adds a*cos(m*phi), negative m adds a*sin(|m|*phi).
  // n=2: modes enumerate real spherical harmonics (l,q) in the triangular
  // order (1,0),(1,1),(2,0),(2,1),(2,2),(3,0),... (Schmidt semi-normalized).
  int mode;
  double amplitude;
};

struct BodySpec {
  enum class Kind { Ball, PerturbedBall, Grid };
  Kind kind = Kind::Ball;
  std::string space = "hyperbolic";
  int n = 2;
  int res0 = 64, res1 = 128;
  double r = 1.0;
  double offset = 0.0;
  std::array<double, 3> offset_dir = {0.0, 0.0, 1.0};
  std::vector<Perturbation> perturbations;
  std::vector<double> rho;  // Kind::Grid only
};

RadialGraphBody make_body(const BodySpec& spec);

// Geodesic ball of radius r whose center sits at distance d from the graph
// origin along direction u. The radial function comes from the law of
// cosines in each space form, so node values are exact. d must be 0 in
// de Sitter space (coordinate slices only).
RadialGraphBody make_ball(const SpaceForm& space, double r, double d,
                          const std::array<double, 3>& u, GridPtr grid);

RadialGraphBody make_perturbed_ball(const SpaceForm& space, double r,
                                    const std::vector<Perturbation>& modes,
                                    GridPtr grid);

// Structural validation: radial range, hemisphere bound for the sphere, and
// the spacelike condition v^2 > 0 for de Sitter graphs.
void validate_body(const RadialGraphBody& body);

// Evaluation of the perturbation basis (exposed for tests).
double perturbation_mode(int n, int mode, double theta, double phi);

void save_body(const RadialGraphBody& body, const std::string& path,
               const std::string& meta_json = "");
RadialGraphBody load_body(const std::string& path);
std::string body_to_json(const RadialGraphBody& body,
                         const std::string& meta_json = "");
RadialGraphBody body_from_json(const std::string& text);

// Moves the Chebyshev center of the boundary (minimizer of the maximal node
// distance, found by coordinate descent) to the graph origin and resamples.
// Near-centered bodies are returned unchanged. Sphere and hyperbolic only.
RadialGraphBody recenter(const RadialGraphBody& body);

}  // namespace qmass
