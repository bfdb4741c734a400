#include "qmass/quermass.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "qmass/parallel.hpp"

namespace qmass {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double radial_volume(const SpaceForm& space, int n, double rho) {
  return adaptive_simpson(
      [&](double r) { return std::pow(space.warp(r), n); }, 0.0, rho, 1e-12);
}

// Boundary curvature integral of a geodesic sphere / coordinate slice.
double ball_boundary_integral(const SpaceForm& space, int n, int m, double r) {
  return omega_n(n) * std::pow(space.warp(r), n - m) *
         std::pow(space.dwarp(r), m);
}

// W_0..W_{n+1} from volume and boundary integrals via the recursion.
std::vector<double> assemble_recursion(const SpaceForm& space, int n,
                                       double vol,
                                       const std::vector<double>& I) {
  const double er = space.epsilon_recursion();
  std::vector<double> W(n + 2);
  W[0] = vol;
  W[1] = I[0] / (n + 1);
  for (int k = 1; k <= n; ++k)
    W[k + 1] = I[k] / (n + 1) + er * (double(k) / (n + 2 - k)) * W[k - 1];
  return W;
}

// Closed forms: double-factorial combinations of the curvature integrals
// (and the volume for even m); W_{n+1} reuses the recursion's top step.
std::vector<double> assemble_closed_form(const SpaceForm& space, int n,
                                         double vol,
                                         const std::vector<double>& I) {
  const double er = space.epsilon_recursion();
  std::vector<double> W(n + 2);
  W[0] = vol;
  for (int m = 1; m <= n; ++m) {
    const double lead = double_factorial(m - 1) * double_factorial(n + 1 - m);
    double sum = 0.0;
    const int top = (m % 2 == 0) ? m / 2 - 1 : (m - 1) / 2;
    for (int i = 0; i <= top; ++i) {
      const double coef =
          lead / (double_factorial(m - 1 - 2 * i) *
                  double_factorial(n + 1 - m + 2 * i));
      sum += std::pow(er, i) * coef * I[m - 1 - 2 * i];
    }
    W[m] = sum / (n + 1);
    if (m % 2 == 0)
      W[m] += std::pow(er, m / 2) * lead / double_factorial(n + 1) * vol;
  }
  W[n + 1] = I[n] / (n + 1) + er * (double(n) / 2.0) * W[n - 1];
  return W;
}

}  // namespace

double body_volume(const RadialGraphBody& body) {
  const std::size_t N = body.rho.size();
  std::vector<double> S(N);
  parallel_for(N, [&](std::size_t k) {
    S[k] = radial_volume(body.space, body.grid->n, body.rho[k]);
  });
  return integrate(*body.grid, S);
}

std::vector<double> curvature_integrals(const CurvatureField& field) {
  const int n = field.n;
  std::vector<double> I(n + 1, 0.0);
  for (std::size_t k = 0; k < field.N; ++k) {
    const double* E = field.E_at(k);
    for (int m = 0; m <= n; ++m) I[m] += E[m] * field.area_w[k];
  }
  return I;
}

QuermassVector quermassintegrals(const RadialGraphBody& body,
                                 const CurvatureField& field,
                                 QuermassMethod method) {
  const int n = body.grid->n;
  const double vol = body_volume(body);
  const std::vector<double> I = curvature_integrals(field);

  QuermassVector q;
  q.space = body.space;
  q.n = n;
  q.method = method;
  q.W = method == QuermassMethod::Recursion
            ? assemble_recursion(body.space, n, vol, I)
            : assemble_closed_form(body.space, n, vol, I);

  q.zeta.assign(n + 1, kNaN);
  q.zeta_ok.assign(n + 1, false);
  for (int k = 0; k <= n; ++k) {
    try {
      q.zeta[k] = invert_f(body.space, n, k, q.W[k]);
      q.zeta_ok[k] = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Range) throw;
    }
  }
  return q;
}

std::vector<double> ball_quermass(const SpaceForm& space, int n, double r) {
  std::vector<double> I(n + 1);
  for (int m = 0; m <= n; ++m) I[m] = ball_boundary_integral(space, n, m, r);
  return assemble_recursion(space, n, omega_n(n) * radial_volume(space, n, r),
                            I);
}

double ball_f(const SpaceForm& space, int n, int k, double r) {
  if (k < 0 || k > n + 1) fail(ErrorCode::Domain, "f_k order out of range");
  if (r == 0.0 && space.riemannian()) return 0.0;
  return ball_quermass(space, n, r)[k];
}

double ball_f_derivative(const SpaceForm& space, int n, int k, double r) {
  return (double(n + 1 - k) / (n + 1)) * ball_boundary_integral(space, n, k, r);
}

namespace {

// Cached sample table of f_k with monotone-cubic (Fritsch-Carlson) slopes;
// gives the bracket and initial guess for the Newton polish in invert_f.
struct FkTable {
  double r_max;
  std::vector<double> r, f, slope;

  void build(const SpaceForm& space, int n, int k, double rmax) {
    r_max = rmax;
    const int M = 4096;
    r.resize(M + 1);
    f.resize(M + 1);
    for (int i = 0; i <= M; ++i) {
      r[i] = rmax * i / M;
      f[i] = ball_f(space, n, k, r[i]);
    }
    // Fritsch-Carlson limited slopes on the (monotone) samples.
    slope.assign(M + 1, 0.0);
    std::vector<double> d(M);
    for (int i = 0; i < M; ++i) d[i] = (f[i + 1] - f[i]) / (r[i + 1] - r[i]);
    slope[0] = d[0];
    slope[M] = d[M - 1];
    for (int i = 1; i < M; ++i) {
      if (d[i - 1] * d[i] <= 0.0)
        slope[i] = 0.0;
      else
        slope[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]);
    }
  }

  double eval(double x) const {
    const int M = static_cast<int>(r.size()) - 1;
    const double t = clamp(x / r_max, 0.0, 1.0) * M;
    int i = std::min(static_cast<int>(t), M - 1);
    const double h = r[i + 1] - r[i];
    const double u = (x - r[i]) / h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * f[i] + (u3 - 2 * u2 + u) * h * slope[i] +
           (-2 * u3 + 3 * u2) * f[i + 1] + (u3 - u2) * h * slope[i + 1];
  }

  // Initial guess for f(x) = w by bisection on the interpolant.
  double invert_guess(double w) const {
    int lo = 0, hi = static_cast<int>(r.size()) - 1;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (f[mid] <= w ? lo : hi) = mid;
    }
    double a = r[lo], b = r[hi];
    for (int it = 0; it < 40; ++it) {
      const double m = 0.5 * (a + b);
      (eval(m) <= w ? a : b) = m;
    }
    return 0.5 * (a + b);
  }
};

struct FkKey {
  int kind, n, k;
  bool operator<(const FkKey& o) const {
    return std::tie(kind, n, k) < std::tie(o.kind, o.n, o.k);
  }
};

std::map<FkKey, FkTable> g_tables;
std::mutex g_tables_mutex;

// Bracket and initial guess from the cached table, grown on demand for the
// unbounded spaces. Runs under the cache mutex; the Newton polish afterwards
// only touches the exact f_k.
void fk_guess(const SpaceForm& space, int n, int k, double w, double* x0,
              double* r_hi) {
  std::lock_guard<std::mutex> lock(g_tables_mutex);
  const FkKey key{static_cast<int>(space.kind), n, k};
  auto it = g_tables.find(key);
  if (it == g_tables.end()) {
    FkTable t;
    t.build(space, n, k, space.kind == SpaceKind::Sphere ? 0.5 * kPi : 8.0);
    it = g_tables.emplace(key, std::move(t)).first;
  }
  if (space.kind != SpaceKind::Sphere && w > it->second.f.back()) {
    double rmax = it->second.r_max;
    while (rmax < 64.0 && ball_f(space, n, k, rmax) < w) rmax *= 2.0;
    if (ball_f(space, n, k, rmax) < w)
      fail(ErrorCode::Range, "w beyond the supported f_k table range");
    it->second.build(space, n, k, rmax);
  }
  *x0 = it->second.invert_guess(w);
  *r_hi = it->second.r_max;
}

}  // namespace

void ball_f_range(const SpaceForm& space, int n, int k, double* lo,
                  double* hi) {
  *lo = space.riemannian() ? 0.0 : ball_f(space, n, k, 0.0);
  if (space.kind == SpaceKind::Sphere)
    *hi = ball_f(space, n, k, 0.5 * kPi);
  else
    *hi = std::numeric_limits<double>::infinity();
}

double invert_f(const SpaceForm& space, int n, int k, double w) {
  if (k < 0 || k > n) fail(ErrorCode::Domain, "f_k order out of range");
  double lo, hi;
  ball_f_range(space, n, k, &lo, &hi);
  const double tol = 1e-10 * std::max(1.0, std::abs(w));
  if (w < lo - tol || w > hi + tol)
    fail(ErrorCode::Range,
         "w=" + std::to_string(w) + " outside the attainable range [" +
             std::to_string(lo) + ", " + std::to_string(hi) + "] of f_" +
             std::to_string(k) + " in " + space.name());
  if (w <= lo) return 0.0;

  double x, r_hi;
  fk_guess(space, n, k, w, &x, &r_hi);
  double a = 0.0, b = r_hi;
  for (int it = 0; it < 100; ++it) {
    const double fx = ball_f(space, n, k, x) - w;
    if (std::abs(fx) <= tol) return x;
    (fx < 0.0 ? a : b) = x;
    const double df = ball_f_derivative(space, n, k, x);
    double xn = df > 0.0 ? x - fx / df : 0.5 * (a + b);
    if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
    x = xn;
  }
  return x;
}

double constant_Cnk(PairKind pair, int n, int k) {
  if (k < 0 || k > n) fail(ErrorCode::Domain, "k out of range");
  const double base = omega_n(n) / (n + 1) * double_factorial(n - k + 1) *
                      double_factorial(k + 1) / double_factorial(n);
  if (pair == PairKind::SphereSphere) {
    if (n % 2 == 0 && k % 2 == 0) return 0.5 * kPi * base;
    return base;
  }
  if ((n - k) % 2 == 1)
    return ((((n - k - 1) / 2) % 2 == 0) ? 1.0 : -1.0) * base;
  return 0.0;
}

double pair_functional(const SpaceForm& source, int n, int k,
                       const std::vector<double>& W_K,
                       const std::vector<double>& W_dual) {
  const double a = (k + 1) * W_K[k];
  const double b = (n + 1 - k) * W_dual[n - k];
  switch (source.kind) {
    case SpaceKind::Sphere:
      return a + b;
    case SpaceKind::Hyperbolic:
      return b - a;
    case SpaceKind::DeSitterUpper:
      return a - b;
  }
  return 0.0;
}

double pair_constant(const SpaceForm& source, int n, int k) {
  switch (source.kind) {
    case SpaceKind::Sphere:
      return constant_Cnk(PairKind::SphereSphere, n, k);
    case SpaceKind::Hyperbolic:
      return constant_Cnk(PairKind::HyperbolicDeSitter, n, k);
    case SpaceKind::DeSitterUpper:
      return constant_Cnk(PairKind::HyperbolicDeSitter, n, n - k);
  }
  return 0.0;
}

}  // namespace qmass
