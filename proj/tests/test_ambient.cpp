#include <doctest.h>

#include <random>

#include "qmass/ambient.hpp"

using namespace qmass;

TEST_SUITE_BEGIN("ambient");

TEST_CASE("warp values") {
  CHECK(warp(make_space(SpaceKind::Sphere), 0.5 * kPi) == doctest::Approx(1.0));
  CHECK(warp(make_space(SpaceKind::Hyperbolic), 0.0) == doctest::Approx(0.0));
  CHECK(warp(make_space(SpaceKind::DeSitterUpper), 0.0) ==
        doctest::Approx(1.0));
}

TEST_CASE("warp domain errors") {
  CHECK_THROWS_AS(warp(make_space(SpaceKind::Sphere), kPi + 0.1), Error);
  CHECK_THROWS_AS(warp(make_space(SpaceKind::Hyperbolic), -0.1), Error);
}

TEST_CASE("warp identity lambda'^2 - eps lambda^2") {
  std::mt19937_64 rng(7);
  for (const SpaceKind kind :
       {SpaceKind::Sphere, SpaceKind::Hyperbolic, SpaceKind::DeSitterUpper}) {
    const SpaceForm s = make_space(kind);
    std::uniform_real_distribution<double> ur(
        0.01, kind == SpaceKind::Sphere ? kPi - 0.01 : 3.0);
    for (int i = 0; i < 100; ++i) {
      const double r = ur(rng);
      const double l = s.warp(r), dl = s.dwarp(r);
      if (kind == SpaceKind::DeSitterUpper)
        CHECK(dl * dl == doctest::Approx(l * l - 1.0).epsilon(1e-12));
      else
        CHECK(dl * dl - s.epsilon() * l * l ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("ball principal curvature values and monotonicity") {
  const SpaceForm sph = make_space(SpaceKind::Sphere);
  const SpaceForm hyp = make_space(SpaceKind::Hyperbolic);
  const SpaceForm ds = make_space(SpaceKind::DeSitterUpper);
  CHECK(ball_principal_curvature(sph, 0.25 * kPi) == doctest::Approx(1.0));
  CHECK(ball_principal_curvature(hyp, 0.8) ==
        doctest::Approx(1.0 / std::tanh(0.8)));
  CHECK(ball_principal_curvature(ds, 0.8) == doctest::Approx(std::tanh(0.8)));
  CHECK_THROWS_AS(ball_principal_curvature(hyp, 0.0), Error);
  CHECK_THROWS_AS(ball_principal_curvature(sph, 0.0), Error);

  double prev_s = 1e300, prev_h = 1e300, prev_d = -1e300;
  for (double r = 0.1; r < 1.5; r += 0.1) {
    const double ks = ball_principal_curvature(sph, r);
    const double kh = ball_principal_curvature(hyp, r);
    const double kd = ball_principal_curvature(ds, r);
    CHECK(ks < prev_s);
    CHECK(kh < prev_h);
    CHECK(kd > prev_d);
    prev_s = ks;
    prev_h = kh;
    prev_d = kd;
  }
}

TEST_SUITE_END();
