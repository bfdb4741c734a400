#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qmass/quermass.hpp"

using namespace qmass;
using namespace qmass::testing;

TEST_SUITE_BEGIN("quermass");

TEST_CASE("ball boundary integrals against the closed forms") {
  // Int(E_m dmu) over a geodesic sphere equals omega_n lambda^{n-m} lambda'^m.
  auto grid = make_grid(2, 32, 64);
  for (const SpaceKind kind :
       {SpaceKind::Sphere, SpaceKind::Hyperbolic, SpaceKind::DeSitterUpper}) {
    const SpaceForm space = make_space(kind);
    const double r = kind == SpaceKind::Sphere ? 0.6 : 0.9;
    const auto body = make_ball(space, r, 0.0, {0, 0, 1}, grid);
    const auto I = curvature_integrals(compute_curvature(body));
    for (int m = 0; m <= 2; ++m) {
      const double exact = omega_n(2) * std::pow(space.warp(r), 2 - m) *
                           std::pow(space.dwarp(r), m);
      CHECK(I[m] == doctest::Approx(exact).epsilon(1e-10));
    }
  }
}

TEST_CASE("volume quadrature matches analytic antiderivatives") {
  auto grid = make_grid(2, 24, 48);
  std::mt19937_64 rng(17);
  for (const SpaceKind kind :
       {SpaceKind::Sphere, SpaceKind::Hyperbolic, SpaceKind::DeSitterUpper}) {
    const SpaceForm space = make_space(kind);
    RandomBodyOptions opt;
    opt.r_max = kind == SpaceKind::Sphere ? 0.9 : 1.3;
    const auto body = random_convex_body(space, grid, rng, opt);
    std::vector<double> S(body.rho.size());
    for (std::size_t k = 0; k < S.size(); ++k)
      S[k] = radial_volume_exact(space, 2, body.rho[k]);
    const double exact = integrate(*grid, S);
    CHECK(body_volume(body) == doctest::Approx(exact).epsilon(1e-11));
  }
}

TEST_CASE("recursion and closed form agree to rounding") {
  auto grid = make_grid(2, 24, 48);
  std::mt19937_64 rng(23);
  for (const SpaceKind kind :
       {SpaceKind::Sphere, SpaceKind::Hyperbolic, SpaceKind::DeSitterUpper}) {
    const SpaceForm space = make_space(kind);
    RandomBodyOptions opt;
    opt.r_max = kind == SpaceKind::Sphere ? 0.9 : 1.3;
    const auto body = random_convex_body(space, grid, rng, opt);
    const auto field = compute_curvature(body);
    const auto qa = quermassintegrals(body, field, QuermassMethod::Recursion);
    const auto qb = quermassintegrals(body, field, QuermassMethod::ClosedForm);
    for (int k = 0; k <= 3; ++k)
      CHECK(qa.W[k] ==
            doctest::Approx(qb.W[k]).epsilon(1e-12).scale(std::abs(qa.W[k])));
  }
}

TEST_CASE("hyperbolic n=2 closed-form W_2 uses the volume with a minus sign") {
  auto grid = make_grid(2, 24, 48);
  const auto body =
      make_ball(make_space(SpaceKind::Hyperbolic), 1.0, 0.0, {0, 0, 1}, grid);
  const auto field = compute_curvature(body);
  const auto I = curvature_integrals(field);
  const double vol = body_volume(body);
  const auto q = quermassintegrals(body, field, QuermassMethod::ClosedForm);
  CHECK(q.W[2] == doctest::Approx(I[1] / 3.0 - vol / 3.0).epsilon(1e-13));
}

TEST_CASE("sphere W_2 of a ball matches the paper's closed form") {
  // W_2 = (4 pi sin r cos r)/3 + Vol(B_r)/3 for n=2.
  const double r = 0.55;
  const auto W = ball_quermass(make_space(SpaceKind::Sphere), 2, r);
  const double expect =
      4.0 * kPi * std::sin(r) * std::cos(r) / 3.0 +
      omega_n(2) * radial_volume_exact(make_space(SpaceKind::Sphere), 2, r) /
          3.0;
  CHECK(W[2] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("zeta of balls recovers the radius") {
  auto grid = make_grid(2, 64, 128);
  for (const SpaceKind kind :
       {SpaceKind::Sphere, SpaceKind::Hyperbolic, SpaceKind::DeSitterUpper}) {
    const SpaceForm space = make_space(kind);
    const double r = kind == SpaceKind::Sphere ? 0.7 : 1.0;
    const auto body = make_ball(space, r, 0.0, {0, 0, 1}, grid);
    const auto q = quermassintegrals(body, compute_curvature(body));
    for (int k = 0; k <= 2; ++k) {
      REQUIRE(q.zeta_ok[k]);
      CHECK(q.zeta[k] == doctest::Approx(r).epsilon(1e-6));
    }
  }
}

TEST_CASE("f_k values, limits and monotonicity") {
  const SpaceForm sph = make_space(SpaceKind::Sphere);
  const SpaceForm ds = make_space(SpaceKind::DeSitterUpper);
  for (const SpaceKind kind : {SpaceKind::Sphere, SpaceKind::Hyperbolic}) {
    for (int k = 0; k <= 2; ++k)
      CHECK(ball_f(make_space(kind), 2, k, 0.0) == 0.0);
  }
  CHECK(ball_f(sph, 2, 1, 0.5 * kPi) ==
        doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
  CHECK(ball_f(sph, 2, 2, 0.5 * kPi) ==
        doctest::Approx(kPi * kPi / 3.0).epsilon(1e-12));
  // de Sitter zero-slice limits: omega_n/(n+1) for k=1, zero for even k.
  CHECK(ball_f(ds, 2, 1, 0.0) ==
        doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
  CHECK(ball_f(ds, 2, 0, 0.0) == doctest::Approx(0.0));
  CHECK(std::abs(ball_f(ds, 2, 2, 0.0)) < 1e-12);

  for (const SpaceKind kind :
       {SpaceKind::Sphere, SpaceKind::Hyperbolic, SpaceKind::DeSitterUpper}) {
    const SpaceForm space = make_space(kind);
    const double top = kind == SpaceKind::Sphere ? 0.5 * kPi : 2.5;
    for (int k = 0; k <= 2; ++k) {
      double prev = ball_f(space, 2, k, 1e-3);
      for (double r = 0.05; r < top; r += 0.05) {
        const double cur = ball_f(space, 2, k, r);
        CHECK(cur > prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("invert_f round-trips and rejects out-of-range") {
  std::mt19937_64 rng(31);
  for (const SpaceKind kind :
       {SpaceKind::Sphere, SpaceKind::Hyperbolic, SpaceKind::DeSitterUpper}) {
    const SpaceForm space = make_space(kind);
    std::uniform_real_distribution<double> ur(
        0.05, kind == SpaceKind::Sphere ? 0.5 * kPi - 0.05 : 2.5);
    for (int n = 1; n <= 2; ++n)
      for (int trial = 0; trial < 25; ++trial) {
        const int k = static_cast<int>(rng() % (n + 1));
        const double r = ur(rng);
        const double w = ball_f(space, n, k, r);
        CHECK(invert_f(space, n, k, w) == doctest::Approx(r).epsilon(1e-9));
      }
  }
  CHECK(invert_f(make_space(SpaceKind::Sphere), 2, 1, 0.0) == 0.0);
  CHECK_THROWS_AS(invert_f(make_space(SpaceKind::Sphere), 2, 1,
                           4.0 * kPi / 3.0 + 0.01),
                  Error);
  // de Sitter: below the zero-slice floor is unattainable.
  CHECK_THROWS_AS(invert_f(make_space(SpaceKind::DeSitterUpper), 2, 1, 1.0),
                  Error);
}

TEST_CASE("pairing constants") {
  CHECK(constant_Cnk(PairKind::SphereSphere, 2, 0) ==
        doctest::Approx(kPi * kPi).epsilon(1e-14));
  CHECK(constant_Cnk(PairKind::HyperbolicDeSitter, 2, 1) ==
        doctest::Approx(8.0 * kPi / 3.0).epsilon(1e-14));
  CHECK(constant_Cnk(PairKind::HyperbolicDeSitter, 2, 0) == 0.0);
  CHECK(constant_Cnk(PairKind::HyperbolicDeSitter, 2, 2) == 0.0);
  CHECK(constant_Cnk(PairKind::HyperbolicDeSitter, 1, 0) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-14));
}

TEST_CASE("pairing is constant in the radius (closed-form path)") {
  for (int n = 1; n <= 2; ++n) {
    for (int k = 0; k <= n; ++k) {
      // sphere pair
      for (double r = 0.15; r < 0.5 * kPi - 0.15; r += 0.2) {
        const auto WK = ball_quermass(make_space(SpaceKind::Sphere), n, r);
        const auto WD =
            ball_quermass(make_space(SpaceKind::Sphere), n, 0.5 * kPi - r);
        CHECK(pair_functional(make_space(SpaceKind::Sphere), n, k, WK, WD) ==
              doctest::Approx(pair_constant(make_space(SpaceKind::Sphere), n, k))
                  .epsilon(1e-10));
      }
      // hyperbolic/de Sitter pair (dual slice radius equals the ball radius)
      for (double r = 0.2; r < 1.8; r += 0.4) {
        const auto WK = ball_quermass(make_space(SpaceKind::Hyperbolic), n, r);
        const auto WD =
            ball_quermass(make_space(SpaceKind::DeSitterUpper), n, r);
        const double J =
            pair_functional(make_space(SpaceKind::Hyperbolic), n, k, WK, WD);
        const double C =
            pair_constant(make_space(SpaceKind::Hyperbolic), n, k);
        CHECK(J == doctest::Approx(C).epsilon(1e-10).scale(1.0));
      }
    }
  }
}

TEST_CASE("hyperbolic Gauss-Bonnet value on strictly convex bodies") {
  auto grid = make_grid(2, 32, 64);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 3; ++trial) {
    const auto body = random_convex_body(make_space(SpaceKind::Hyperbolic),
                                         grid, rng, {});
    const auto q = quermassintegrals(body, compute_curvature(body));
    CHECK(q.W[3] == doctest::Approx(omega_n(2) / 3.0).epsilon(2e-4));
  }
  // n=1: W_2 = pi for any convex curve in either Riemannian space form.
  auto g1 = make_grid(1, 512);
  std::mt19937_64 rng1(43);
  const auto curve =
      random_convex_body(make_space(SpaceKind::Sphere), g1, rng1, {});
  const auto q1 = quermassintegrals(curve, compute_curvature(curve));
  CHECK(q1.W[2] == doctest::Approx(kPi).epsilon(1e-10));
}

TEST_CASE("variational formula by centered differences") {
  // dW_k/dt = ((n+1-k)/(n+1)) Int((eta/v) E_k dmu) for rho_t = rho + t eta.
  std::mt19937_64 rng(47);
  auto grid = make_grid(2, 24, 48);
  for (const SpaceKind kind :
       {SpaceKind::Sphere, SpaceKind::Hyperbolic, SpaceKind::DeSitterUpper}) {
    const SpaceForm space = make_space(kind);
    RandomBodyOptions opt;
    opt.r_max = kind == SpaceKind::Sphere ? 0.8 : 1.2;
    const auto body = random_convex_body(space, grid, rng, opt);
    std::vector<double> eta(body.rho.size());
    for (std::size_t k = 0; k < eta.size(); ++k) {
      const auto& u = grid->dir[k];
      eta[k] = 0.3 + 0.2 * u[2] + 0.15 * u[0] * u[1];
    }
    const auto field = compute_curvature(body);
    const double delta = 1e-4;
    RadialGraphBody plus = body, minus = body;
    for (std::size_t k = 0; k < eta.size(); ++k) {
      plus.rho[k] += delta * eta[k];
      minus.rho[k] -= delta * eta[k];
    }
    const auto qp = quermassintegrals(plus, compute_curvature(plus));
    const auto qm = quermassintegrals(minus, compute_curvature(minus));
    for (int k = 0; k <= 2; ++k) {
      const double fd = (qp.W[k] - qm.W[k]) / (2.0 * delta);
      double integral = 0.0;
      for (std::size_t q = 0; q < field.N; ++q)
        integral +=
            (eta[q] / field.v[q]) * field.E_at(q)[k] * field.area_w[q];
      integral *= double(3 - k) / 3.0;
      CHECK(fd == doctest::Approx(integral)
                      .epsilon(5e-6)
                      .scale(std::max(1.0, std::abs(integral))));
    }
  }
}

TEST_SUITE_END();
