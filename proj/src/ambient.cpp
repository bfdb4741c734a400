#include "qmass/ambient.hpp"

#include <cmath>
#include <limits>

namespace qmass {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_radial(const SpaceForm& space, double r) {
  const Interval iv = space.radial_interval();
  if (!(r >= iv.lo && r < iv.hi))
    fail(ErrorCode::Domain, "radial value " + std::to_string(r) +
                                " outside the " + space.name() + " interval");
}
}  // namespace

Interval SpaceForm::radial_interval() const {
  switch (kind) {
    case SpaceKind::Sphere:
      return {0.0, kPi};
    case SpaceKind::Hyperbolic:
    case SpaceKind::DeSitterUpper:
      return {0.0, kInf};
  }
  return {0.0, 0.0};
}

double SpaceForm::warp(double r) const {
  switch (kind) {
    case SpaceKind::Sphere:
      return std::sin(r);
    case SpaceKind::Hyperbolic:
      return std::sinh(r);
    case SpaceKind::DeSitterUpper:
      return std::cosh(r);
  }
  return 0.0;
}

double SpaceForm::dwarp(double r) const {
  switch (kind) {
    case SpaceKind::Sphere:
      return std::cos(r);
    case SpaceKind::Hyperbolic:
      return std::cosh(r);
    case SpaceKind::DeSitterUpper:
      return std::sinh(r);
  }
  return 0.0;
}

double SpaceForm::embed0(double r) const {
  switch (kind) {
    case SpaceKind::Sphere:
      return std::cos(r);
    case SpaceKind::Hyperbolic:
      return std::cosh(r);
    case SpaceKind::DeSitterUpper:
      return std::sinh(r);
  }
  return 0.0;
}

double SpaceForm::embed1(double r) const { return warp(r); }

double SpaceForm::dembed0(double r) const {
  switch (kind) {
    case SpaceKind::Sphere:
      return -std::sin(r);
    case SpaceKind::Hyperbolic:
      return std::sinh(r);
    case SpaceKind::DeSitterUpper:
      return std::cosh(r);
  }
  return 0.0;
}

double SpaceForm::dembed1(double r) const { return dwarp(r); }

std::string SpaceForm::name() const {
  switch (kind) {
    case SpaceKind::Sphere:
      return "sphere";
    case SpaceKind::Hyperbolic:
      return "hyperbolic";
    case SpaceKind::DeSitterUpper:
      return "desitter";
  }
  return "?";
}

SpaceForm make_space(SpaceKind kind) { return SpaceForm{kind}; }

SpaceForm space_from_name(const std::string& name) {
  if (name == "sphere") return make_space(SpaceKind::Sphere);
  if (name == "hyperbolic") return make_space(SpaceKind::Hyperbolic);
  if (name == "desitter") return make_space(SpaceKind::DeSitterUpper);
  fail(ErrorCode::Parse, "unknown space \"" + name + "\"");
}

double warp(const SpaceForm& space, double r) {
  check_radial(space, r);
  return space.warp(r);
}

double dwarp(const SpaceForm& space, double r) {
  check_radial(space, r);
  return space.dwarp(r);
}

double ball_principal_curvature(const SpaceForm& space, double r) {
  check_radial(space, r);
  switch (space.kind) {
    case SpaceKind::Sphere:
      if (r == 0.0)
        fail(ErrorCode::SingularCurvature, "geodesic sphere of radius 0");
      return std::cos(r) / std::sin(r);
    case SpaceKind::Hyperbolic:
      if (r == 0.0)
        fail(ErrorCode::SingularCurvature, "geodesic sphere of radius 0");
      return std::cosh(r) / std::sinh(r);
    case SpaceKind::DeSitterUpper:
      return std::tanh(r);
  }
  return 0.0;
}

}  // namespace qmass
