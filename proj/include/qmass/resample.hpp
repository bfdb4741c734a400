// Resampling of a scalar field known at the image of a structured grid under
// a smooth direction map (Gauss maps, ambient isometries) back onto the
// standard grid.
//
// n=2: the source connectivity triangulates the image directions (two
// triangles per lat-long cell plus polar fans around synthetic cap vertices).
// Each query direction is located inside an image triangle through a
// lat-long bin index, then the value is interpolated either barycentrically
// (Linear) or by a kernel-weighted local quadratic fit over the triangle's
// vertex neighborhoods (Quadratic). The quadratic mode keeps the resampled
// field smooth enough for downstream finite differencing.
//
// n=1: image angles are sorted and interpolated with a sliding 4-point
// Lagrange polynomial.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qmass/grid.hpp"

namespace qmass {

enum class ResampleOrder { Linear, Quadratic };

class ImageMesh {
public:
  // Directions/values are indexed like the source grid's nodes.
  ImageMesh(const SphericalGrid& source,
            std::vector<std::array<double, 3>> directions,
            std::vector<double> values);

  // Interpolated value at a unit direction. Throws ErrorCode::Resample when
  // the direction is not covered (fold-over / non-convex image).
  double query(const std::array<double, 3>& u, ResampleOrder order) const;

  // Resample onto every node of a target grid.
  std::vector<double> resample(const SphericalGrid& target,
                               ResampleOrder order) const;

private:
  int n_;
  // n=2 data
  std::vector<std::array<double, 3>> pts_;
  std::vector<double> val_;
  std::vector<std::array<int, 3>> tris_;
  std::vector<std::vector<int>> neighborhood_;  // per vertex, for MLS
  int bins_z_ = 0, bins_p_ = 0;
  std::vector<std::vector<int>> bins_;
  // n=1 data
  std::vector<double> ang_;
  std::vector<double> ang_val_;

  int locate(const std::array<double, 3>& u, double* bary) const;
  double query2(const std::array<double, 3>& u, ResampleOrder order) const;
  double query1(const std::array<double, 3>& u, ResampleOrder order) const;
};

}  // namespace qmass
