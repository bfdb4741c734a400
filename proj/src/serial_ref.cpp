#include "qmass/serial_ref.hpp"

#include <cmath>

namespace qmass::serial_ref {

namespace {

// Serial 5-point stencils with the same pole extension as the grid module.
std::size_t pole_idx(const SphericalGrid& g, int i, int j) {
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

}  // namespace

CurvatureField compute_curvature(const RadialGraphBody& body) {
  const SphericalGrid& g = *body.grid;
  const SpaceForm& space = body.space;
  const int n = g.n;
  const std::size_t N = g.num_nodes();
  const double sg = space.sigma();

  CurvatureField f;
  f.n = n;
  f.N = N;
  f.g11.resize(N);
  f.h11.resize(N);
  if (n == 2) {
    f.g12.resize(N);
    f.g22.resize(N);
    f.h12.resize(N);
    f.h22.resize(N);
  }
  f.kappa.resize(N * n);
  f.E.resize(N * (n + 1));
  f.area_w.resize(N);
  f.density.resize(N);
  f.v.resize(N);
  f.grad.resize(N * n);

  const std::vector<double>& rho = body.rho;
  auto d1 = [](double m2, double m1, double p1, double p2, double h) {
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
  };
  auto d2 = [](double m2, double m1, double c, double p1, double p2,
               double h) {
    return (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
  };

  if (n == 1) {
    const int np = g.n_phi;
    for (int j = 0; j < np; ++j) {
      const double m2 = rho[(j - 2 + np) % np], m1 = rho[(j - 1 + np) % np];
      const double p1 = rho[(j + 1) % np], p2 = rho[(j + 2) % np];
      const double rp = d1(m2, m1, p1, p2, g.dphi);
      const double hess = d2(m2, m1, rho[j], p1, p2, g.dphi);
      const double lam = space.warp(rho[j]);
      const double dlam = space.dwarp(rho[j]);
      const double v = std::sqrt(1.0 + sg * rp * rp / (lam * lam));
      const double gg = sg * rp * rp + lam * lam;
      const double hh =
          (sg * (-hess + 2.0 * (dlam / lam) * rp * rp) + lam * dlam) / v;
      f.g11[j] = gg;
      f.h11[j] = hh;
      f.v[j] = v;
      f.grad[j] = rp;
      f.kappa[j] = hh / gg;
      f.E[2 * j] = 1.0;
      f.E[2 * j + 1] = hh / gg;
      f.density[j] = std::sqrt(gg);
      f.area_w[j] = g.weight[j] * f.density[j];
    }
    return f;
  }

  for (int i = 0; i < g.n_theta; ++i) {
    for (int j = 0; j < g.n_phi; ++j) {
      const std::size_t k = g.idx(i, j);
      const double tm2 = rho[pole_idx(g, i - 2, j)];
      const double tm1 = rho[pole_idx(g, i - 1, j)];
      const double tp1 = rho[pole_idx(g, i + 1, j)];
      const double tp2 = rho[pole_idx(g, i + 2, j)];
      const double pm2 = rho[g.idx(i, (j - 2 + g.n_phi) % g.n_phi)];
      const double pm1 = rho[g.idx(i, (j - 1 + g.n_phi) % g.n_phi)];
      const double pp1 = rho[g.idx(i, (j + 1) % g.n_phi)];
      const double pp2 = rho[g.idx(i, (j + 2) % g.n_phi)];
      const double rt = d1(tm2, tm1, tp1, tp2, g.dtheta);
      const double rp = d1(pm2, pm1, pp1, pp2, g.dphi);
      const double rtt = d2(tm2, tm1, rho[k], tp1, tp2, g.dtheta);
      const double rpp = d2(pm2, pm1, rho[k], pp1, pp2, g.dphi);
      // theta-derivative field at the phi neighbors for the mixed term
      auto rt_at = [&](int jj) {
        const int jw = ((jj % g.n_phi) + g.n_phi) % g.n_phi;
        return d1(rho[pole_idx(g, i - 2, jw)], rho[pole_idx(g, i - 1, jw)],
                  rho[pole_idx(g, i + 1, jw)], rho[pole_idx(g, i + 2, jw)],
                  g.dtheta);
      };
      const double rtp =
          d1(rt_at(j - 2), rt_at(j - 1), rt_at(j + 1), rt_at(j + 2), g.dphi);

      const double st = g.sin_theta[i], ct = g.cos_theta[i];
      const double lam = space.warp(rho[k]);
      const double dlam = space.dwarp(rho[k]);
      const double u = dlam / lam;
      const double Htt = rtt;
      const double Htp = rtp - (ct / st) * rp;
      const double Hpp = rpp + st * ct * rt;
      const double s22 = st * st;
      const double grad2 = rt * rt + rp * rp / s22;
      const double v = std::sqrt(1.0 + sg * grad2 / (lam * lam));
      const double g11 = sg * rt * rt + lam * lam;
      const double g12 = sg * rt * rp;
      const double g22 = sg * rp * rp + lam * lam * s22;
      const double h11 = (sg * (-Htt + 2.0 * u * rt * rt) + lam * dlam) / v;
      const double h12 = (sg * (-Htp + 2.0 * u * rt * rp)) / v;
      const double h22 =
          (sg * (-Hpp + 2.0 * u * rp * rp) + lam * dlam * s22) / v;
      const double gp[3] = {g11, g12, g22};
      const double hp[3] = {h11, h12, h22};
      f.g11[k] = g11;
      f.g12[k] = g12;
      f.g22[k] = g22;
      f.h11[k] = h11;
      f.h12[k] = h12;
      f.h22[k] = h22;
      f.v[k] = v;
      f.grad[2 * k] = rt;
      f.grad[2 * k + 1] = rp;
      weingarten_eigen(2, gp, hp, &f.kappa[2 * k]);
      double E[3];
      elementary_to_normalized(&f.kappa[2 * k], 2, E);
      f.E[3 * k] = E[0];
      f.E[3 * k + 1] = E[1];
      f.E[3 * k + 2] = E[2];
      const double detg = g11 * g22 - g12 * g12;
      f.density[k] = std::sqrt(detg) / st;
      f.area_w[k] = g.weight[k] * f.density[k];
    }
  }
  return f;
}

RadialGraphBody polar_linear(const RadialGraphBody& body) {
  PolarOptions opts;
  opts.order = ResampleOrder::Linear;
  return qmass::polar(body, opts);
}

double integrate(const SphericalGrid& grid, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < grid.num_nodes(); ++k)
    s += grid.weight[k] * f[k];
  return s;
}

}  // namespace qmass::serial_ref
