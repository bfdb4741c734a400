#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "helpers.hpp"
#include "qmass/body.hpp"

using namespace qmass;

TEST_SUITE_BEGIN("body");

TEST_CASE("centered ball is constant") {
  auto grid = make_grid(2, 16, 32);
  const auto body =
      make_ball(make_space(SpaceKind::Sphere), 0.7, 0.0, {0, 0, 1}, grid);
  for (double r : body.rho) CHECK(r == 0.7);
}

TEST_CASE("offset ball radial values along the axis") {
  auto grid = make_grid(1, 64);
  const auto body = make_ball(make_space(SpaceKind::Hyperbolic), 0.8, 0.3,
                              {1, 0, 0}, grid);
  CHECK(body.rho[0] == doctest::Approx(1.1).epsilon(1e-14));   // gamma=0
  CHECK(body.rho[32] == doctest::Approx(0.5).epsilon(1e-14));  // gamma=pi
}

TEST_CASE("sphere offset ball at gamma=pi/2 solves the law of cosines") {
  auto grid = make_grid(1, 64);
  const auto body =
      make_ball(make_space(SpaceKind::Sphere), 0.6, 0.2, {1, 0, 0}, grid);
  const double rho = body.rho[16];  // phi = pi/2
  CHECK(std::cos(0.6) ==
        doctest::Approx(std::cos(0.2) * std::cos(rho)).epsilon(1e-14));
  // Cross-check: the point lies at geodesic distance r from the center
  // c = (cos d, sin d, 0) in the (e0, e1) plane of R^{n+2}.
  const double cosdist = std::cos(0.2) * std::cos(rho) +
                         std::sin(0.2) * std::sin(rho) * grid->dir[16][0];
  CHECK(std::acos(cosdist) == doctest::Approx(0.6).epsilon(1e-13));
}

TEST_CASE("offset ball preconditions") {
  auto grid = make_grid(2, 16, 32);
  CHECK_THROWS_AS(
      make_ball(make_space(SpaceKind::Sphere), 1.0, 0.8, {0, 0, 1}, grid),
      Error);  // r + d >= pi/2
  CHECK_THROWS_AS(
      make_ball(make_space(SpaceKind::Hyperbolic), 0.4, 0.5, {0, 0, 1}, grid),
      Error);  // origin outside
  CHECK_THROWS_AS(make_ball(make_space(SpaceKind::DeSitterUpper), 0.5, 0.1,
                            {0, 0, 1}, grid),
                  Error);  // dS offset unsupported
}

TEST_CASE("perturbed ball with zero amplitudes equals the ball") {
  auto grid = make_grid(2, 16, 32);
  const auto a =
      make_ball(make_space(SpaceKind::Hyperbolic), 1.0, 0.0, {0, 0, 1}, grid);
  const auto b = make_perturbed_ball(make_space(SpaceKind::Hyperbolic), 1.0,
                                     {{2, 0.0}, {5, 0.0}}, grid);
  CHECK(a.rho == b.rho);
}

TEST_CASE("perturbed ball passes strict convexity validation") {
  auto grid = make_grid(2, 24, 48);
  const auto body = make_perturbed_ball(make_space(SpaceKind::Hyperbolic), 1.0,
                                        {{3, 0.02}}, grid);
  const auto cls = classify(compute_curvature(body), body.space);
  CHECK(cls.strictly_convex);
}

TEST_CASE("amplitude cap enforced") {
  auto grid = make_grid(2, 16, 32);
  CHECK_THROWS_AS(make_perturbed_ball(make_space(SpaceKind::Hyperbolic), 1.0,
                                      {{2, 0.2}}, grid),
                  Error);
}

TEST_CASE("json round-trip is node-wise identical") {
  auto grid = make_grid(2, 16, 32);
  const auto body = make_perturbed_ball(make_space(SpaceKind::Sphere), 0.7,
                                        {{4, 0.01}, {-5, 0.007}}, grid);
  const std::string path = "/tmp/qmass_test_body.json";
  save_body(body, path, "{\"origin\":\"test\"}");
  const auto loaded = load_body(path);
  REQUIRE(loaded.rho.size() == body.rho.size());
  for (std::size_t k = 0; k < body.rho.size(); ++k)
    CHECK(loaded.rho[k] == body.rho[k]);
  CHECK(loaded.space.kind == body.space.kind);
  std::filesystem::remove(path);
}

TEST_CASE("loader names missing and invalid fields") {
  CHECK_THROWS_WITH_AS(body_from_json("{\"n\":2}"), doctest::Contains("space"),
                       Error);
  CHECK_THROWS_WITH_AS(
      body_from_json("{\"space\":\"sphere\",\"n\":2,\"resolution\":[4,8]}"),
      doctest::Contains("rho"), Error);
  // rho values outside the sphere's radial interval
  const std::string big =
      "{\"space\":\"sphere\",\"n\":1,\"resolution\":[8],"
      "\"rho\":[3.2,3.2,3.2,3.2,3.2,3.2,3.2,3.2]}";
  CHECK_THROWS_AS(body_from_json(big), Error);
}

TEST_CASE("recenter leaves centered balls unchanged") {
  auto grid = make_grid(2, 16, 32);
  const auto body =
      make_ball(make_space(SpaceKind::Hyperbolic), 0.9, 0.0, {0, 0, 1}, grid);
  const auto out = recenter(body);
  for (std::size_t k = 0; k < body.rho.size(); ++k)
    CHECK(out.rho[k] == doctest::Approx(body.rho[k]).epsilon(1e-12));
}

TEST_CASE("recenter maps offset balls to centered balls") {
  for (const SpaceKind kind : {SpaceKind::Hyperbolic, SpaceKind::Sphere}) {
    auto grid = make_grid(2, 32, 64);
    const double r = kind == SpaceKind::Sphere ? 0.5 : 0.8;
    const auto body =
        make_ball(make_space(kind), r, 0.25, {0.48, 0.6, 0.64}, grid);
    const auto out = recenter(body);
    double worst = 0.0;
    for (double rho : out.rho) worst = std::max(worst, std::abs(rho - r));
    CHECK(worst < 5e-6);  // grid interpolation tolerance
  }
}

TEST_CASE("recenter is idempotent at its fixed point") {
  auto grid = make_grid(2, 24, 48);
  const auto body =
      make_ball(make_space(SpaceKind::Hyperbolic), 0.8, 0.2, {0, 1, 0}, grid);
  const auto once = recenter(body);
  const auto twice = recenter(once);
  for (std::size_t k = 0; k < once.rho.size(); ++k)
    CHECK(twice.rho[k] == doctest::Approx(once.rho[k]).epsilon(1e-7));
}

TEST_CASE("recenter rejects de Sitter input") {
  auto grid = make_grid(2, 16, 32);
  const auto body = make_ball(make_space(SpaceKind::DeSitterUpper), 0.8, 0.0,
                              {0, 0, 1}, grid);
  CHECK_THROWS_AS(recenter(body), Error);
}

TEST_CASE("generated bodies pass their own invariants") {
  std::mt19937_64 rng(5);
  auto grid = make_grid(2, 16, 32);
  for (const SpaceKind kind :
       {SpaceKind::Sphere, SpaceKind::Hyperbolic, SpaceKind::DeSitterUpper}) {
    testing::RandomBodyOptions opt;
    opt.r_min = 0.5;
    opt.r_max = kind == SpaceKind::Sphere ? 0.8 : 1.2;
    const auto body =
        testing::random_convex_body(make_space(kind), grid, rng, opt);
    CHECK_NOTHROW(validate_body(body));
  }
}

TEST_SUITE_END();
