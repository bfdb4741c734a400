#include "qmass/grid.hpp"

#include <cmath>

#include "qmass/parallel.hpp"

namespace qmass {

GridPtr make_grid(int n, int res0, int res1) {
  if (n != 1 && n != 2)
    fail(ErrorCode::UnsupportedDimension,
         "unsupported base dimension n=" + std::to_string(n));

  auto g = std::make_shared<SphericalGrid>();
  g->n = n;
  if (n == 1) {
    if (res0 < 8) fail(ErrorCode::Domain, "n=1 grid needs at least 8 nodes");
    g->n_phi = res0;
    g->dphi = 2.0 * kPi / res0;
    g->phi.resize(res0);
    g->sin_phi.resize(res0);
    g->cos_phi.resize(res0);
    g->weight.assign(res0, g->dphi);
    g->dir.resize(res0);
    for (int j = 0; j < res0; ++j) {
      g->phi[j] = j * g->dphi;
      g->sin_phi[j] = std::sin(g->phi[j]);
      g->cos_phi[j] = std::cos(g->phi[j]);
      g->dir[j] = {g->cos_phi[j], g->sin_phi[j], 0.0};
    }
    return g;
  }

  if (res0 < 4 || res1 < 8)
    fail(ErrorCode::Domain, "n=2 grid needs at least 4x8 nodes");
  if (res1 % 2 != 0)
    fail(ErrorCode::Domain, "n=2 grid needs an even azimuthal count");

  g->n_theta = res0;
  g->n_phi = res1;
  g->dtheta = kPi / res0;
  g->dphi = 2.0 * kPi / res1;
  g->theta.resize(res0);
  g->sin_theta.resize(res0);
  g->cos_theta.resize(res0);
  for (int i = 0; i < res0; ++i) {
    g->theta[i] = (i + 0.5) * g->dtheta;
    g->sin_theta[i] = std::sin(g->theta[i]);
    g->cos_theta[i] = std::cos(g->theta[i]);
  }
  g->phi.resize(res1);
  g->sin_phi.resize(res1);
  g->cos_phi.resize(res1);
  for (int j = 0; j < res1; ++j) {
    g->phi[j] = j * g->dphi;
    g->sin_phi[j] = std::sin(g->phi[j]);
    g->cos_phi[j] = std::cos(g->phi[j]);
  }

  g->weight.resize(g->num_nodes());
  g->dir.resize(g->num_nodes());
  for (int i = 0; i < res0; ++i) {
    // Exact cell area: integrates constants exactly at any resolution.
    const double w =
        g->dphi * (std::cos(i * g->dtheta) - std::cos((i + 1) * g->dtheta));
    for (int j = 0; j < res1; ++j) {
      const std::size_t k = g->idx(i, j);
      g->weight[k] = w;
      g->dir[k] = {g->sin_theta[i] * g->cos_phi[j],
                   g->sin_theta[i] * g->sin_phi[j], g->cos_theta[i]};
    }
  }
  return g;
}

namespace {

// 4th-order centered first/second derivative from 5 samples.
inline double d1_stencil(double m2, double m1, double p1, double p2,
                         double h) {
  return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
}
inline double d2_stencil(double m2, double m1, double c, double p1, double p2,
                         double h) {
  return (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
}

// Row index with symmetric pole extension; flips the azimuth by pi.
inline std::size_t pole_idx(const SphericalGrid& g, int i, int j) {
  int jj = j;
  if (i < 0) {
    i = -1 - i;
    jj += g.n_phi / 2;
  } else if (i >= g.n_theta) {
    i = 2 * g.n_theta - 1 - i;
    jj += g.n_phi / 2;
  }
  jj %= g.n_phi;
  if (jj < 0) jj += g.n_phi;
  return g.idx(i, jj);
}

inline std::size_t wrap_idx(const SphericalGrid& g, int i, int j) {
  int jj = j % g.n_phi;
  if (jj < 0) jj += g.n_phi;
  return g.idx(i, jj);
}

}  // namespace

void grid_derivatives(const SphericalGrid& grid, const std::vector<double>& f,
                      GridDerivs& out, bool second) {
  const std::size_t N = grid.num_nodes();
  if (f.size() != N) fail(ErrorCode::Internal, "field size mismatch");

  if (grid.n == 1) {
    out.dp.resize(N);
    if (second) out.dpp.resize(N);
    const double h = grid.dphi;
    const int np = grid.n_phi;
    parallel_for(N, [&](std::size_t k) {
      const int j = static_cast<int>(k);
      const double m2 = f[(j - 2 + np) % np], m1 = f[(j - 1 + np) % np];
      const double p1 = f[(j + 1) % np], p2 = f[(j + 2) % np];
      out.dp[k] = d1_stencil(m2, m1, p1, p2, h);
      if (second) out.dpp[k] = d2_stencil(m2, m1, f[k], p1, p2, h);
    });
    return;
  }

  out.dt.resize(N);
  out.dp.resize(N);
  if (second) {
    out.dtt.resize(N);
    out.dtp.resize(N);
    out.dpp.resize(N);
  }

  const double ht = grid.dtheta, hp = grid.dphi;
  parallel_for(N, [&](std::size_t k) {
    const int i = static_cast<int>(k) / grid.n_phi;
    const int j = static_cast<int>(k) % grid.n_phi;

    const double tm2 = f[pole_idx(grid, i - 2, j)];
    const double tm1 = f[pole_idx(grid, i - 1, j)];
    const double tp1 = f[pole_idx(grid, i + 1, j)];
    const double tp2 = f[pole_idx(grid, i + 2, j)];
    out.dt[k] = d1_stencil(tm2, tm1, tp1, tp2, ht);

    const double pm2 = f[wrap_idx(grid, i, j - 2)];
    const double pm1 = f[wrap_idx(grid, i, j - 1)];
    const double pp1 = f[wrap_idx(grid, i, j + 1)];
    const double pp2 = f[wrap_idx(grid, i, j + 2)];
    out.dp[k] = d1_stencil(pm2, pm1, pp1, pp2, hp);

    if (second) {
      out.dtt[k] = d2_stencil(tm2, tm1, f[k], tp1, tp2, ht);
      out.dpp[k] = d2_stencil(pm2, pm1, f[k], pp1, pp2, hp);
    }
  });

  if (second) {
    // Mixed derivative: phi-stencil applied to the theta-derivative field.
    parallel_for(N, [&](std::size_t k) {
      const int i = static_cast<int>(k) / grid.n_phi;
      const int j = static_cast<int>(k) % grid.n_phi;
      const double m2 = out.dt[wrap_idx(grid, i, j - 2)];
      const double m1 = out.dt[wrap_idx(grid, i, j - 1)];
      const double p1 = out.dt[wrap_idx(grid, i, j + 1)];
      const double p2 = out.dt[wrap_idx(grid, i, j + 2)];
      out.dtp[k] = d1_stencil(m2, m1, p1, p2, hp);
    });
  }
}

double integrate(const SphericalGrid& grid, const std::vector<double>& f) {
  double s = 0.0;
  const std::size_t N = grid.num_nodes();
  for (std::size_t k = 0; k < N; ++k) s += grid.weight[k] * f[k];
  return s;
}

double interpolate(const SphericalGrid& grid, const std::vector<double>& f,
                   const std::array<double, 3>& u) {
  if (grid.n == 1) {
    double a = std::atan2(u[1], u[0]);
    if (a < 0) a += 2.0 * kPi;
    const double x = a / grid.dphi;
    const int j0 = static_cast<int>(std::floor(x)) % grid.n_phi;
    const double t = x - std::floor(x);
    return (1.0 - t) * f[j0] + t * f[(j0 + 1) % grid.n_phi];
  }
  const double th = std::acos(clamp(u[2], -1.0, 1.0));
  double ph = std::atan2(u[1], u[0]);
  if (ph < 0) ph += 2.0 * kPi;
  const double x = th / grid.dtheta - 0.5;
  const int i0 = static_cast<int>(std::floor(x));
  const double s = x - std::floor(x);
  const double y = ph / grid.dphi;
  const int j0 = static_cast<int>(std::floor(y)) % grid.n_phi;
  const double t = y - std::floor(y);
  const double f00 = f[pole_idx(grid, i0, j0)];
  const double f01 = f[pole_idx(grid, i0, j0 + 1)];
  const double f10 = f[pole_idx(grid, i0 + 1, j0)];
  const double f11 = f[pole_idx(grid, i0 + 1, j0 + 1)];
  return (1.0 - s) * ((1.0 - t) * f00 + t * f01) +
         s * ((1.0 - t) * f10 + t * f11);
}

}  // namespace qmass
