#include "qmass/curvature.hpp"

#include <cmath>

#include "qmass/parallel.hpp"

namespace qmass {

namespace {

// Eigenvalues of g^{-1} h for SPD g via the symmetric reduction
// L^{-1} h L^{-T} with g = L L^T; guarantees real values.
void weingarten_2x2(double g11, double g12, double g22, double h11, double h12,
                    double h22, double* k1, double* k2) {
  const double l11 = std::sqrt(g11);
  const double l21 = g12 / l11;
  const double l22 = std::sqrt(g22 - l21 * l21);
  const double m11 = h11 / l11, m12 = h12 / l11;
  const double m21 = (h12 - l21 * m11) / l22;
  const double m22 = (h22 - l21 * m12) / l22;
  const double a11 = m11 / l11;
  const double a12 = -m11 * l21 / (l11 * l22) + m12 / l22;
  const double a21 = m21 / l11;
  const double a22 = -m21 * l21 / (l11 * l22) + m22 / l22;
  const double off = 0.5 * (a12 + a21);
  const double mid = 0.5 * (a11 + a22);
  // Cancellation-free discriminant: exact for repeated eigenvalues.
  const double disc = std::hypot(0.5 * (a11 - a22), off);
  *k1 = mid - disc;
  *k2 = mid + disc;
}

}  // namespace

void weingarten_eigen(int n, const double* g, const double* h, double* kappa) {
  if (n == 1) {
    kappa[0] = h[0] / g[0];
    return;
  }
  weingarten_2x2(g[0], g[1], g[2], h[0], h[1], h[2], &kappa[0], &kappa[1]);
}

void elementary_to_normalized(const double* kappa, int n, double* E_out) {
  // e[k] via the one-pass recurrence, then divide by C(n,k).
  double e[9] = {1.0};
  for (int k = 1; k <= n; ++k) e[k] = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = std::min(i + 1, n); k >= 1; --k)
      e[k] += kappa[i] * e[k - 1];
  for (int k = 0; k <= n; ++k) E_out[k] = e[k] / binomial(n, k);
}

double normalized_symmetric(const std::vector<double>& kappa, int k) {
  const int n = static_cast<int>(kappa.size());
  if (k < 0 || k > n) fail(ErrorCode::Domain, "symmetric order out of range");
  if (n > 8) fail(ErrorCode::Domain, "at most 8 curvatures supported");
  double E[9];
  elementary_to_normalized(kappa.data(), n, E);
  return E[k];
}

CurvatureField compute_curvature(const RadialGraphBody& body) {
  const SphericalGrid& grid = *body.grid;
  const SpaceForm& space = body.space;
  const int n = grid.n;
  const std::size_t N = grid.num_nodes();
  const double sg = space.sigma();

  GridDerivs d;
  grid_derivatives(grid, body.rho, d, true);

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

  std::vector<char> bad_g(N, 0), bad_v(N, 0);

  parallel_for(N, [&](std::size_t k) {
    const double rho = body.rho[k];
    const double lam = space.warp(rho);
    const double dlam = space.dwarp(rho);
    const double u = dlam / lam;

    if (n == 1) {
      const double rp = d.dp[k];
      const double hess = d.dpp[k];
      const double grad2 = rp * rp;
      const double v2 = 1.0 + sg * grad2 / (lam * lam);
      if (space.kind == SpaceKind::DeSitterUpper && v2 < kSpacelikeMargin) {
        bad_v[k] = 1;
        return;
      }
      const double v = std::sqrt(std::max(v2, 0.0));
      const double g = sg * grad2 + lam * lam;
      if (!(g > 0.0)) {
        bad_g[k] = 1;
        return;
      }
      const double h = (sg * (-hess + 2.0 * u * grad2) + lam * dlam) / v;
      f.g11[k] = g;
      f.h11[k] = h;
      f.v[k] = v;
      f.grad[k] = rp;
      f.kappa[k] = h / g;
      f.E[2 * k] = 1.0;
      f.E[2 * k + 1] = h / g;
      f.density[k] = std::sqrt(g);
      f.area_w[k] = grid.weight[k] * f.density[k];
      return;
    }

    const int i = static_cast<int>(k) / grid.n_phi;
    const double st = grid.sin_theta[i], ct = grid.cos_theta[i];
    const double rt = d.dt[k], rp = d.dp[k];
    // Covariant Hessian on the round sphere in the (theta, phi) chart.
    const double Htt = d.dtt[k];
    const double Htp = d.dtp[k] - (ct / st) * rp;
    const double Hpp = d.dpp[k] + st * ct * rt;

    const double s22 = st * st;
    const double grad2 = rt * rt + rp * rp / s22;
    const double v2 = 1.0 + sg * grad2 / (lam * lam);
    if (space.kind == SpaceKind::DeSitterUpper && v2 < kSpacelikeMargin) {
      bad_v[k] = 1;
      return;
    }
    const double v = std::sqrt(std::max(v2, 0.0));

    const double g11 = sg * rt * rt + lam * lam;
    const double g12 = sg * rt * rp;
    const double g22 = sg * rp * rp + lam * lam * s22;
    const double detg = g11 * g22 - g12 * g12;
    if (!(g11 > 0.0) || !(detg > 0.0)) {
      bad_g[k] = 1;
      return;
    }

    const double h11 = (sg * (-Htt + 2.0 * u * rt * rt) + lam * dlam) / v;
    const double h12 = (sg * (-Htp + 2.0 * u * rt * rp)) / v;
    const double h22 =
        (sg * (-Hpp + 2.0 * u * rp * rp) + lam * dlam * s22) / v;

    double k1, k2;
    weingarten_2x2(g11, g12, g22, h11, h12, h22, &k1, &k2);

    f.g11[k] = g11;
    f.g12[k] = g12;
    f.g22[k] = g22;
    f.h11[k] = h11;
    f.h12[k] = h12;
    f.h22[k] = h22;
    f.v[k] = v;
    f.grad[2 * k] = rt;
    f.grad[2 * k + 1] = rp;
    f.kappa[2 * k] = k1;
    f.kappa[2 * k + 1] = k2;
    double E[3];
    const double kk[2] = {k1, k2};
    elementary_to_normalized(kk, 2, E);
    f.E[3 * k] = E[0];
    f.E[3 * k + 1] = E[1];
    f.E[3 * k + 2] = E[2];
    f.density[k] = std::sqrt(detg) / st;
    f.area_w[k] = grid.weight[k] * f.density[k];
  });

  for (std::size_t k = 0; k < N; ++k) {
    if (bad_v[k])
      fail(ErrorCode::SpacelikeViolation,
           "spacelike condition violated at node " + std::to_string(k));
    if (bad_g[k])
      fail(ErrorCode::Immersion,
           "induced metric not positive definite at node " + std::to_string(k));
  }
  return f;
}

ConvexityClass classify(const CurvatureField& field, const SpaceForm& space) {
  ConvexityClass c;
  c.kappa_min = field.kappa[0];
  c.kappa_max = field.kappa[0];
  for (double k : field.kappa) {
    c.kappa_min = std::min(c.kappa_min, k);
    c.kappa_max = std::max(c.kappa_max, k);
  }
  c.strictly_convex = c.kappa_min > kConvexityTol;
  if (space.kind == SpaceKind::Hyperbolic)
    c.h_convex = c.kappa_min >= 1.0 - kConvexityTol;
  if (space.kind == SpaceKind::DeSitterUpper) {
    c.unit_bounded =
        c.kappa_min > kConvexityTol && c.kappa_max <= 1.0 + kConvexityTol;
    c.spacelike_margin = field.v[0] * field.v[0];
    for (double v : field.v)
      c.spacelike_margin = std::min(c.spacelike_margin, v * v);
  }
  c.m_convex.assign(field.n, true);
  for (std::size_t k = 0; k < field.N; ++k) {
    const double* E = field.E_at(k);
    for (int m = 1; m <= field.n; ++m)
      if (!(E[m] > kConvexityTol)) {
        for (int mm = m; mm <= field.n; ++mm) c.m_convex[mm - 1] = false;
        break;
      }
  }
  return c;
}

}  // namespace qmass
