#include "qmass/body.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "qmass/parallel.hpp"
#include "qmass/resample.hpp"

namespace qmass {

namespace {

using json = nlohmann::json;
using V3 = std::array<double, 3>;

inline double dot3(const V3& a, const V3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double ball_radial(const SpaceForm& space, double r, double d,
                   double cos_gamma) {
  switch (space.kind) {
    case SpaceKind::Sphere: {
      const double A = std::cos(d), B = std::sin(d) * cos_gamma;
      const double R = std::hypot(A, B);
      const double psi = std::atan2(B, A);
      const double c = std::cos(r) / R;
      if (c > 1.0 + 1e-12)
        fail(ErrorCode::Geometry, "offset ball has no radial-graph solution");
      return psi + std::acos(clamp(c, -1.0, 1.0));
    }
    case SpaceKind::Hyperbolic: {
      const double A = std::cosh(d), B = std::sinh(d) * cos_gamma;
      const double R = std::sqrt(A * A - B * B);
      const double psi = std::atanh(B / A);
      const double c = std::cosh(r) / R;
      if (c < 1.0 - 1e-12)
        fail(ErrorCode::Geometry, "offset ball has no radial-graph solution");
      return psi + std::acosh(std::max(c, 1.0));
    }
    case SpaceKind::DeSitterUpper:
      return r;
  }
  return 0.0;
}

}  // namespace

RadialGraphBody make_ball(const SpaceForm& space, double r, double d,
                          const std::array<double, 3>& u, GridPtr grid) {
  if (r <= 0.0) fail(ErrorCode::Domain, "ball radius must be positive");
  if (d < 0.0) fail(ErrorCode::Domain, "center offset must be nonnegative");
  if (space.kind == SpaceKind::DeSitterUpper && d != 0.0)
    fail(ErrorCode::Domain,
         "de Sitter bodies are coordinate slices; center offset must be 0");
  if (space.kind == SpaceKind::Sphere && r + d >= 0.5 * kPi)
    fail(ErrorCode::Geometry, "sphere ball must satisfy r + d < pi/2");
  if (d >= r && d > 0.0)
    fail(ErrorCode::Geometry, "graph origin must lie inside the ball (d < r)");

  const double un = std::sqrt(dot3(u, u));
  if (!(un > 0.0)) fail(ErrorCode::Domain, "offset direction must be nonzero");
  V3 uu = {u[0] / un, u[1] / un, u[2] / un};
  if (grid->n == 1 && std::abs(uu[2]) > 1e-14)
    fail(ErrorCode::Domain, "n=1 offset direction must lie in the plane");

  RadialGraphBody body{space, grid, std::vector<double>(grid->num_nodes())};
  for (std::size_t k = 0; k < body.rho.size(); ++k) {
    const double cg = d == 0.0 ? 1.0 : dot3(grid->dir[k], uu);
    body.rho[k] = d == 0.0 ? r : ball_radial(space, r, d, cg);
  }
  validate_body(body);
  return body;
}

double perturbation_mode(int n, int mode, double theta, double phi) {
  const bool sine = mode < 0;
  const int m = std::abs(mode);
  if (m < 1) fail(ErrorCode::Domain, "perturbation mode must be nonzero");
  if (n == 1) return sine ? std::sin(m * phi) : std::cos(m * phi);

  // Triangular enumeration of (l, q): (1,0),(1,1),(2,0),(2,1),(2,2),...
  int rest = m - 1, l = 1;
  while (rest > l) {
    rest -= l + 1;
    ++l;
  }
  const int q = rest;
  double norm = 1.0;
  if (q > 0) {
    double fr = 1.0;
    for (int i = l - q + 1; i <= l + q; ++i) fr *= i;
    norm = std::sqrt(2.0 / fr);
  }
  const double plq = std::assoc_legendre(l, q, std::cos(theta));
  const double az = q == 0 ? 1.0 : (sine ? std::sin(q * phi) : std::cos(q * phi));
  return norm * plq * az;
}

RadialGraphBody make_perturbed_ball(const SpaceForm& space, double r,
                                    const std::vector<Perturbation>& modes,
                                    GridPtr grid) {
  for (const auto& p : modes)
    if (std::abs(p.amplitude) > 0.1 * r)
      fail(ErrorCode::Domain, "perturbation amplitude exceeds 0.1*r");

  RadialGraphBody body = make_ball(space, r, 0.0, {0, 0, 1}, grid);
  if (grid->n == 1) {
    for (std::size_t k = 0; k < body.rho.size(); ++k)
      for (const auto& p : modes)
        body.rho[k] += p.amplitude * perturbation_mode(1, p.mode, 0.0, grid->phi[k]);
  } else {
    for (int i = 0; i < grid->n_theta; ++i)
      for (int j = 0; j < grid->n_phi; ++j)
        for (const auto& p : modes)
          body.rho[grid->idx(i, j)] +=
              p.amplitude *
              perturbation_mode(2, p.mode, grid->theta[i], grid->phi[j]);
  }
  validate_body(body);
  return body;
}

RadialGraphBody make_body(const BodySpec& spec) {
  const SpaceForm space = space_from_name(spec.space);
  GridPtr grid = make_grid(spec.n, spec.res0, spec.n == 2 ? spec.res1 : 0);
  switch (spec.kind) {
    case BodySpec::Kind::Ball:
      return make_ball(space, spec.r, spec.offset, spec.offset_dir, grid);
    case BodySpec::Kind::PerturbedBall:
      return make_perturbed_ball(space, spec.r, spec.perturbations, grid);
    case BodySpec::Kind::Grid: {
      if (spec.rho.size() != grid->num_nodes())
        fail(ErrorCode::Parse, "rho length does not match the resolution");
      RadialGraphBody body{space, grid, spec.rho};
      validate_body(body);
      return body;
    }
  }
  fail(ErrorCode::Internal, "unreachable");
}

void validate_body(const RadialGraphBody& body) {
  const Interval iv = body.space.radial_interval();
  for (std::size_t k = 0; k < body.rho.size(); ++k) {
    const double r = body.rho[k];
    if (!(r > 0.0) || !(r < iv.hi))
      fail(ErrorCode::Validation,
           "rho out of the radial interval at node " + std::to_string(k));
  }
  if (body.space.kind == SpaceKind::DeSitterUpper) {
    GridDerivs d;
    grid_derivatives(*body.grid, body.rho, d, false);
    const auto& g = *body.grid;
    for (std::size_t k = 0; k < body.rho.size(); ++k) {
      double grad2 = d.dp[k] * d.dp[k];
      if (g.n == 2) {
        const int i = static_cast<int>(k) / g.n_phi;
        grad2 = d.dt[k] * d.dt[k] +
                d.dp[k] * d.dp[k] / (g.sin_theta[i] * g.sin_theta[i]);
      }
      const double ch = std::cosh(body.rho[k]);
      const double v2 = 1.0 - grad2 / (ch * ch);
      if (v2 < kSpacelikeMargin)
        fail(ErrorCode::SpacelikeViolation,
             "spacelike condition v^2 > 0 fails at node " + std::to_string(k));
    }
  }
}

std::string body_to_json(const RadialGraphBody& body,
                         const std::string& meta_json) {
  json j;
  j["space"] = body.space.name();
  j["n"] = body.grid->n;
  if (body.grid->n == 1)
    j["resolution"] = {body.grid->n_phi};
  else
    j["resolution"] = {body.grid->n_theta, body.grid->n_phi};
  j["rho"] = body.rho;
  j["meta"] = meta_json.empty() ? json::object() : json::parse(meta_json);
  return j.dump(2);
}

RadialGraphBody body_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
  }
  for (const char* field : {"space", "n", "resolution", "rho"})
    if (!j.contains(field))
      fail(ErrorCode::Parse, std::string("missing field \"") + field + "\"");

  const SpaceForm space = space_from_name(j["space"].get<std::string>());
  const int n = j["n"].get<int>();
  const auto res = j["resolution"].get<std::vector<int>>();
  if (n == 1 && res.size() != 1)
    fail(ErrorCode::Parse, "field \"resolution\" must have 1 entry for n=1");
  if (n == 2 && res.size() != 2)
    fail(ErrorCode::Parse, "field \"resolution\" must have 2 entries for n=2");
  GridPtr grid = make_grid(n, res[0], n == 2 ? res[1] : 0);

  RadialGraphBody body{space, grid, j["rho"].get<std::vector<double>>()};
  if (body.rho.size() != grid->num_nodes())
    fail(ErrorCode::Parse, "field \"rho\" has the wrong length");
  validate_body(body);
  return body;
}

void save_body(const RadialGraphBody& body, const std::string& path,
               const std::string& meta_json) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Parse, "cannot open " + path + " for writing");
  out << body_to_json(body, meta_json) << "\n";
}

RadialGraphBody load_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Parse, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return body_from_json(text);
}

namespace {

// Flat embedding of all boundary nodes.
std::vector<std::array<double, 4>> node_points(const RadialGraphBody& body) {
  std::vector<std::array<double, 4>> X(body.rho.size());
  for (std::size_t k = 0; k < X.size(); ++k) {
    const double c = body.space.embed0(body.rho[k]);
    const double s = body.space.embed1(body.rho[k]);
    const auto& u = body.grid->dir[k];
    X[k] = {c, s * u[0], s * u[1], s * u[2]};
  }
  return X;
}

double max_geodesic_dist(const SpaceForm& space,
                         const std::vector<std::array<double, 4>>& X,
                         const std::array<double, 4>& z) {
  double worst = 0.0;
  if (space.kind == SpaceKind::Sphere) {
    double mn = 1.0;
    for (const auto& x : X) {
      const double c = z[0] * x[0] + z[1] * x[1] + z[2] * x[2] + z[3] * x[3];
      mn = std::min(mn, c);
    }
    worst = std::acos(clamp(mn, -1.0, 1.0));
  } else {
    double mx = 1.0;
    for (const auto& x : X) {
      const double c = z[0] * x[0] - z[1] * x[1] - z[2] * x[2] - z[3] * x[3];
      mx = std::max(mx, c);  // c = -<z,x> = cosh(dist)
    }
    worst = std::acosh(std::max(mx, 1.0));
  }
  return worst;
}

std::array<double, 4> lift_center(const SpaceForm& space, const V3& t) {
  const double t2 = dot3(t, t);
  if (space.kind == SpaceKind::Sphere) {
    const double s = 1.0 / std::sqrt(1.0 + t2);
    return {s, s * t[0], s * t[1], s * t[2]};
  }
  return {std::sqrt(1.0 + t2), t[0], t[1], t[2]};
}

}  // namespace

RadialGraphBody recenter(const RadialGraphBody& body) {
  if (!body.space.riemannian())
    fail(ErrorCode::Unsupported,
         "recenter applies to sphere/hyperbolic bodies only");

  const auto X = node_points(body);
  const int dims = body.grid->n + 1;

  // Chebyshev center by coordinate descent over the lifted spatial offset.
  V3 t = {0, 0, 0};
  double best = max_geodesic_dist(body.space, X, lift_center(body.space, t));
  for (double step = 0.25 * best + 1e-3; step > 1e-9; step *= 0.5) {
    bool improved = true;
    int guard = 0;
    while (improved && guard++ < 16) {
      improved = false;
      for (int a = 0; a < dims; ++a) {
        for (double s : {step, -step}) {
          V3 cand = t;
          cand[a] += s;
          const double val =
              max_geodesic_dist(body.space, X, lift_center(body.space, cand));
          if (val < best - 1e-15) {
            best = val;
            t = cand;
            improved = true;
          }
        }
      }
    }
  }

  const double off2 = dot3(t, t);
  if (off2 < 1e-18) {
    if (body.space.kind == SpaceKind::Sphere)
      for (double r : body.rho)
        if (r >= 0.5 * kPi)
          fail(ErrorCode::Geometry,
               "recentered sphere body is not inside an open hemisphere");
    return body;
  }

  // Isometry taking the chosen center z to the origin axis point e0: a
  // rotation (sphere) or Lorentz boost (hyperbolic) in the plane (e0, uhat).
  const std::array<double, 4> z = lift_center(body.space, t);
  const bool sph = body.space.kind == SpaceKind::Sphere;
  // uhat: unit spacelike vector along the spatial part of z.
  const double zs = std::sqrt(z[1] * z[1] + z[2] * z[2] + z[3] * z[3]);
  const std::array<double, 4> uhat = {0, z[1] / zs, z[2] / zs, z[3] / zs};
  const double alpha = sph ? std::atan2(zs, z[0]) : std::asinh(zs);

  std::vector<std::array<double, 3>> dirs(X.size());
  std::vector<double> radii(X.size());
  for (std::size_t k = 0; k < X.size(); ++k) {
    const auto& y = X[k];
    // Coefficient along e0; equals y[0] under both bilinear forms.
    const double a0 = y[0];
    const double a1 = y[1] * uhat[1] + y[2] * uhat[2] + y[3] * uhat[3];
    double b0, b1;
    if (sph) {
      b0 = std::cos(alpha) * a0 + std::sin(alpha) * a1;
      b1 = -std::sin(alpha) * a0 + std::cos(alpha) * a1;
    } else {
      b0 = std::cosh(alpha) * a0 - std::sinh(alpha) * a1;
      b1 = -std::sinh(alpha) * a0 + std::cosh(alpha) * a1;
    }
    std::array<double, 4> w = {b0, y[1] + (b1 - a1) * uhat[1],
                               y[2] + (b1 - a1) * uhat[2],
                               y[3] + (b1 - a1) * uhat[3]};
    const double rho =
        sph ? std::acos(clamp(w[0], -1.0, 1.0)) : std::acosh(std::max(w[0], 1.0));
    const double sr = body.space.embed1(rho);
    if (!(rho > 0.0) || !(sr > 0.0))
      fail(ErrorCode::Geometry, "recenter produced a degenerate radial value");
    dirs[k] = {w[1] / sr, w[2] / sr, w[3] / sr};
    const double nn = std::sqrt(dot3(dirs[k], dirs[k]));
    dirs[k] = {dirs[k][0] / nn, dirs[k][1] / nn, dirs[k][2] / nn};
    radii[k] = rho;
  }

  ImageMesh mesh(*body.grid, std::move(dirs), std::move(radii));
  RadialGraphBody out{body.space, body.grid,
                      mesh.resample(*body.grid, ResampleOrder::Quadratic)};
  validate_body(out);
  if (out.space.kind == SpaceKind::Sphere)
    for (double r : out.rho)
      if (r >= 0.5 * kPi)
        fail(ErrorCode::Geometry,
             "recentered sphere body is not inside an open hemisphere");
  return out;
}

}  // namespace qmass
