#include "qmass/duality.hpp"

#include <algorithm>
#include <cmath>

#include "qmass/parallel.hpp"
#include "qmass/resample.hpp"

namespace qmass {

namespace {

using V3 = std::array<double, 3>;
using V4 = std::array<double, 4>;

// Flat bilinear form: Euclidean for the sphere pair, Minkowski otherwise.
inline double form(const SpaceForm& space, const V4& a, const V4& b) {
  return space.form_e0() * a[0] * b[0] + a[1] * b[1] + a[2] * b[2] +
         a[3] * b[3];
}

// Coordinate partials of the unit direction field.
inline V3 theta_tangent(const SphericalGrid& g, std::size_t k, int axis) {
  if (g.n == 1) {
    return {-g.sin_phi[k], g.cos_phi[k], 0.0};
  }
  const int i = static_cast<int>(k) / g.n_phi;
  const int j = static_cast<int>(k) % g.n_phi;
  if (axis == 0)
    return {g.cos_theta[i] * g.cos_phi[j], g.cos_theta[i] * g.sin_phi[j],
            -g.sin_theta[i]};
  return {-g.sin_theta[i] * g.sin_phi[j], g.sin_theta[i] * g.cos_phi[j], 0.0};
}

}  // namespace

SpaceKind dual_space_of(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Sphere:
      return SpaceKind::Sphere;
    case SpaceKind::Hyperbolic:
      return SpaceKind::DeSitterUpper;
    case SpaceKind::DeSitterUpper:
      return SpaceKind::Hyperbolic;
  }
  return kind;
}

AmbientEmbedding embed(const RadialGraphBody& body,
                       const CurvatureField& field) {
  const SphericalGrid& grid = *body.grid;
  const SpaceForm& space = body.space;
  const std::size_t N = grid.num_nodes();

  AmbientEmbedding e;
  e.source = space.kind;
  e.dual = dual_space_of(space.kind);
  e.X.resize(N);
  e.Xstar.resize(N);

  const double grad_sign = -space.sigma();
  parallel_for(N, [&](std::size_t k) {
    const double rho = body.rho[k];
    const double c = space.embed0(rho), s = space.embed1(rho);
    const double dc = space.dembed0(rho), ds = space.dembed1(rho);
    const V3& u = grid.dir[k];
    e.X[k] = {c, s * u[0], s * u[1], s * u[2]};

    // Gradient vector rho^a Theta_a on the unit sphere.
    V3 gradv = {0, 0, 0};
    if (grid.n == 1) {
      const V3 tp = theta_tangent(grid, k, 1);
      for (int q = 0; q < 3; ++q) gradv[q] = field.grad[k] * tp[q];
    } else {
      const int i = static_cast<int>(k) / grid.n_phi;
      const double s22 = grid.sin_theta[i] * grid.sin_theta[i];
      const V3 tt = theta_tangent(grid, k, 0);
      const V3 tp = theta_tangent(grid, k, 1);
      for (int q = 0; q < 3; ++q)
        gradv[q] =
            field.grad[2 * k] * tt[q] + field.grad[2 * k + 1] / s22 * tp[q];
    }
    const double iv = 1.0 / field.v[k];
    const double gl = grad_sign / space.warp(rho);
    e.Xstar[k] = {iv * dc, iv * (ds * u[0] + gl * gradv[0]),
                  iv * (ds * u[1] + gl * gradv[1]),
                  iv * (ds * u[2] + gl * gradv[2])};
  });
  return e;
}

DualCurvature gauss_map_dual_curvature(const RadialGraphBody& body,
                                       const CurvatureField& field) {
  const SphericalGrid& grid = *body.grid;
  const int n = grid.n;
  const std::size_t N = grid.num_nodes();
  const AmbientEmbedding e = embed(body, field);

  // First derivatives of every embedding component on the source grid.
  std::vector<double> comp(N);
  GridDerivs dX[4], dXs[4];
  for (int q = 0; q < 4; ++q) {
    for (std::size_t k = 0; k < N; ++k) comp[k] = e.X[k][q];
    grid_derivatives(grid, comp, dX[q], false);
    for (std::size_t k = 0; k < N; ++k) comp[k] = e.Xstar[k][q];
    grid_derivatives(grid, comp, dXs[q], false);
  }

  DualCurvature out;
  out.kappa.resize(N * n);
  out.area_w.resize(N);
  std::vector<char> bad(N, 0);

  parallel_for(N, [&](std::size_t k) {
    V4 Xa[2], Sa[2];
    for (int q = 0; q < 4; ++q) {
      if (n == 2) {
        Xa[0][q] = dX[q].dt[k];
        Sa[0][q] = dXs[q].dt[k];
      }
      Xa[n - 1][q] = dX[q].dp[k];
      Sa[n - 1][q] = dXs[q].dp[k];
    }
    double g[3], h[3];
    if (n == 1) {
      g[0] = form(body.space, Sa[0], Sa[0]);
      h[0] = form(body.space, Sa[0], Xa[0]);
      if (!(g[0] > 0.0)) {
        bad[k] = 1;
        return;
      }
      out.kappa[k] = h[0] / g[0];
      out.area_w[k] = grid.weight[k] * std::sqrt(g[0]);
      return;
    }
    g[0] = form(body.space, Sa[0], Sa[0]);
    g[1] = form(body.space, Sa[0], Sa[1]);
    g[2] = form(body.space, Sa[1], Sa[1]);
    h[0] = form(body.space, Sa[0], Xa[0]);
    h[1] = 0.5 * (form(body.space, Sa[0], Xa[1]) + form(body.space, Sa[1], Xa[0]));
    h[2] = form(body.space, Sa[1], Xa[1]);
    const double det = g[0] * g[2] - g[1] * g[1];
    if (!(g[0] > 0.0) || !(det > 0.0)) {
      bad[k] = 1;
      return;
    }
    weingarten_eigen(2, g, h, &out.kappa[2 * k]);
    const int i = static_cast<int>(k) / grid.n_phi;
    out.area_w[k] = grid.weight[k] * std::sqrt(det) / grid.sin_theta[i];
  });

  for (std::size_t k = 0; k < N; ++k)
    if (bad[k])
      fail(ErrorCode::Immersion,
           "polar hypersurface degenerate at node " + std::to_string(k));
  return out;
}

double dual_curvature_check(const RadialGraphBody& body) {
  const CurvatureField field = compute_curvature(body);
  const DualCurvature dual = gauss_map_dual_curvature(body, field);
  const int n = body.grid->n;
  double worst = 0.0;
  for (std::size_t k = 0; k < field.N; ++k) {
    for (int i = 0; i < n; ++i) {
      const double prod =
          field.kappa[k * n + i] * dual.kappa[k * n + (n - 1 - i)];
      worst = std::max(worst, std::abs(prod - 1.0));
    }
  }
  return worst;
}

RadialGraphBody polar(const RadialGraphBody& input, const PolarOptions& opts) {
  RadialGraphBody body = input;
  CurvatureField field = compute_curvature(body);
  ConvexityClass cls = classify(field, body.space);
  if (!(cls.kappa_min >= opts.min_kappa))
    fail(ErrorCode::Geometry,
         "body is not strictly convex enough to dualize (min kappa " +
             std::to_string(cls.kappa_min) + ")");

  if (body.space.riemannian() && opts.recenter_source) {
    RadialGraphBody centered = recenter(body);
    if (centered.rho != body.rho) {
      body = std::move(centered);
      field = compute_curvature(body);
      cls = classify(field, body.space);
      if (!(cls.kappa_min >= opts.min_kappa))
        fail(ErrorCode::Geometry, "recentered body lost strict convexity");
    }
  }
  if (body.space.kind == SpaceKind::Sphere) {
    for (double r : body.rho)
      if (r >= 0.5 * kPi)
        fail(ErrorCode::Geometry,
             "sphere body must lie in an open hemisphere");
  }

  const AmbientEmbedding e = embed(body, field);
  const std::size_t N = body.grid->num_nodes();
  std::vector<V3> dirs(N);
  std::vector<double> radii(N);
  for (std::size_t k = 0; k < N; ++k) {
    const V4& y = e.Xstar[k];
    double rho = 0.0;
    switch (body.space.kind) {
      case SpaceKind::Sphere:
        // Stored around e0 through the reflection of the 0-axis, so the
        // polar pipeline is an exact involution.
        rho = std::acos(clamp(-y[0], -1.0, 1.0));
        break;
      case SpaceKind::Hyperbolic:
        if (!(y[0] > 0.0))
          fail(ErrorCode::Geometry,
               "polar hypersurface leaves the upper de Sitter branch "
               "(body does not enclose the Beltrami point)");
        rho = std::asinh(y[0]);
        break;
      case SpaceKind::DeSitterUpper:
        rho = std::acosh(std::max(y[0], 1.0));
        break;
    }
    const double s = std::sqrt(y[1] * y[1] + y[2] * y[2] + y[3] * y[3]);
    if (!(rho > 0.0) || !(s > 0.0))
      fail(ErrorCode::Geometry, "degenerate polar radius at node " +
                                    std::to_string(k));
    dirs[k] = {y[1] / s, y[2] / s, y[3] / s};
    radii[k] = rho;
  }

  ImageMesh mesh(*body.grid, std::move(dirs), std::move(radii));
  RadialGraphBody dual{make_space(dual_space_of(body.space.kind)), body.grid,
                       mesh.resample(*body.grid, opts.order)};
  validate_body(dual);
  return dual;
}

double brute_force_polar_radius(const RadialGraphBody& body,
                                const std::array<double, 3>& direction) {
  const SpaceForm& space = body.space;
  const std::size_t N = body.grid->num_nodes();
  std::vector<V4> X(N);
  for (std::size_t k = 0; k < N; ++k) {
    const double c = space.embed0(body.rho[k]);
    const double s = space.embed1(body.rho[k]);
    const V3& u = body.grid->dir[k];
    X[k] = {c, s * u[0], s * u[1], s * u[2]};
  }

  auto dual_point = [&](double t) -> V4 {
    switch (space.kind) {
      case SpaceKind::Sphere:
        return {-std::cos(t), std::sin(t) * direction[0],
                std::sin(t) * direction[1], std::sin(t) * direction[2]};
      case SpaceKind::Hyperbolic:
        return {std::sinh(t), std::cosh(t) * direction[0],
                std::cosh(t) * direction[1], std::cosh(t) * direction[2]};
      case SpaceKind::DeSitterUpper:
        return {std::cosh(t), std::sinh(t) * direction[0],
                std::sinh(t) * direction[1], std::sinh(t) * direction[2]};
    }
    return {};
  };
  auto support = [&](double t) {
    const V4 y = dual_point(t);
    double mx = -1e300;
    for (const auto& x : X) mx = std::max(mx, form(space, x, y));
    return mx;
  };

  // Sign of the support function at the inner end of the bracket.
  double lo = 0.0, hi;
  if (space.kind == SpaceKind::Sphere) {
    hi = 0.5 * kPi;
  } else {
    hi = 1.0;
    const double s0 = support(lo);
    for (int it = 0; it < 64; ++it) {
      if (support(hi) * s0 < 0.0) break;
      hi *= 1.5;
      if (hi > 64.0)
        fail(ErrorCode::Geometry,
             "direction not in the dual graph domain (no sign change)");
    }
  }
  double flo = support(lo);
  if (flo * support(hi) > 0.0)
    fail(ErrorCode::Geometry,
         "direction not in the dual graph domain (no sign change)");
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = support(mid);
    if (fm * flo <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qmass
