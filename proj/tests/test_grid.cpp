#include <doctest.h>

#include <cmath>

#include "qmass/grid.hpp"

using namespace qmass;

TEST_SUITE_BEGIN("grid");

TEST_CASE("total weight equals omega_n") {
  auto g1 = make_grid(1, 256);
  CHECK(integrate(*g1, std::vector<double>(g1->num_nodes(), 1.0)) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-13));
  auto g2 = make_grid(2, 64, 128);
  CHECK(integrate(*g2, std::vector<double>(g2->num_nodes(), 1.0)) ==
        doctest::Approx(4.0 * kPi).epsilon(1e-13));
  auto g3 = make_grid(2, 8, 16);
  CHECK(integrate(*g3, std::vector<double>(g3->num_nodes(), 1.0)) ==
        doctest::Approx(4.0 * kPi).epsilon(1e-13));
}

TEST_CASE("quadrature of cos(theta) vanishes at coarse resolution") {
  auto g = make_grid(2, 8, 16);
  std::vector<double> f(g->num_nodes());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = g->dir[k][2];
  CHECK(std::abs(integrate(*g, f)) < 1e-12);
}

TEST_CASE("unsupported dimension") {
  CHECK_THROWS_AS(make_grid(3, 16, 16), Error);
  CHECK_THROWS_AS(make_grid(2, 16, 15), Error);  // odd azimuth count
}

namespace {
double smooth_fn(const std::array<double, 3>& u) {
  return std::exp(u[0]) * (1.0 + 0.5 * u[1] * u[2]) + std::sin(2.0 * u[2]);
}
double quad_error(int nt) {
  auto g = make_grid(2, nt, 2 * nt);
  std::vector<double> f(g->num_nodes());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = smooth_fn(g->dir[k]);
  // Reference from a much finer grid.
  auto gr = make_grid(2, 512, 1024);
  std::vector<double> fr(gr->num_nodes());
  for (std::size_t k = 0; k < fr.size(); ++k) fr[k] = smooth_fn(gr->dir[k]);
  return std::abs(integrate(*g, f) - integrate(*gr, fr));
}
}  // namespace

TEST_CASE("quadrature converges at second order or better") {
  const double e16 = quad_error(16), e32 = quad_error(32), e64 = quad_error(64);
  CHECK(e32 < e16 / 3.5);
  CHECK(e64 < e32 / 3.5);
}

TEST_CASE("fourth-order derivatives across the poles") {
  // f = exp(z) * (1 + x*y) restricted to the sphere: smooth through poles.
  auto err_at = [](int nt) {
    auto g = make_grid(2, nt, 2 * nt);
    std::vector<double> f(g->num_nodes());
    for (int i = 0; i < g->n_theta; ++i)
      for (int j = 0; j < g->n_phi; ++j) {
        const auto& u = g->dir[g->idx(i, j)];
        f[g->idx(i, j)] = std::exp(u[2]) * (1.0 + u[0] * u[1]);
      }
    GridDerivs d;
    grid_derivatives(*g, f, d, true);
    double worst = 0.0;
    for (int i = 0; i < g->n_theta; ++i)
      for (int j = 0; j < g->n_phi; ++j) {
        const double th = g->theta[i], ph = g->phi[j];
        const double st = std::sin(th), ct = std::cos(th);
        const double sp = std::sin(ph), cp = std::cos(ph);
        // Exact derivative of f(theta,phi) = e^{cos th}(1 + sin^2 th sin cos)
        const double s2 = st * st;
        const double q = sp * cp;
        const double E = std::exp(ct);
        const double ft = E * (-st * (1.0 + s2 * q) + 2.0 * st * ct * q);
        const double fp = E * s2 * (cp * cp - sp * sp);
        worst = std::max(worst, std::abs(d.dt[g->idx(i, j)] - ft));
        worst = std::max(worst, std::abs(d.dp[g->idx(i, j)] - fp));
      }
    return worst;
  };
  const double e32 = err_at(32), e64 = err_at(64);
  CHECK(e64 < e32 / 12.0);  // ~16x for 4th order
}

TEST_CASE("n=1 periodic derivatives") {
  auto g = make_grid(1, 128);
  std::vector<double> f(g->num_nodes());
  for (int j = 0; j < g->n_phi; ++j) f[j] = std::sin(3.0 * g->phi[j]);
  GridDerivs d;
  grid_derivatives(*g, f, d, true);
  for (int j = 0; j < g->n_phi; j += 7) {
    CHECK(d.dp[j] == doctest::Approx(3.0 * std::cos(3.0 * g->phi[j]))
                         .epsilon(5e-5)
                         .scale(3.0));
    CHECK(d.dpp[j] == doctest::Approx(-9.0 * std::sin(3.0 * g->phi[j]))
                          .epsilon(5e-5)
                          .scale(9.0));
  }
}

TEST_SUITE_END();
