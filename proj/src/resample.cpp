#include "qmass/resample.hpp"

#include <algorithm>
#include <cmath>

#include "qmass/parallel.hpp"

namespace qmass {

namespace {

using V3 = std::array<double, 3>;

inline double dot(const V3& a, const V3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline V3 cross(const V3& a, const V3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline double det3(const V3& a, const V3& b, const V3& c) {
  return dot(a, cross(b, c));
}
inline V3 normalized(const V3& a) {
  const double n = std::sqrt(dot(a, a));
  return {a[0] / n, a[1] / n, a[2] / n};
}

inline double azimuth(const V3& u) {
  double a = std::atan2(u[1], u[0]);
  if (a < 0) a += 2.0 * kPi;
  return a;
}

// Dense symmetric solve by Gaussian elimination with partial pivoting.
template <int N>
bool solve_small(double A[N][N], double b[N]) {
  for (int c = 0; c < N; ++c) {
    int piv = c;
    for (int r = c + 1; r < N; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    if (std::abs(A[piv][c]) < 1e-14) return false;
    if (piv != c) {
      for (int k = 0; k < N; ++k) std::swap(A[piv][k], A[c][k]);
      std::swap(b[piv], b[c]);
    }
    for (int r = c + 1; r < N; ++r) {
      const double m = A[r][c] / A[c][c];
      for (int k = c; k < N; ++k) A[r][k] -= m * A[c][k];
      b[r] -= m * b[c];
    }
  }
  for (int c = N - 1; c >= 0; --c) {
    double s = b[c];
    for (int k = c + 1; k < N; ++k) s -= A[c][k] * b[k];
    b[c] = s / A[c][c];
  }
  return true;
}

}  // namespace

ImageMesh::ImageMesh(const SphericalGrid& source,
                     std::vector<std::array<double, 3>> directions,
                     std::vector<double> values)
    : n_(source.n) {
  if (directions.size() != source.num_nodes() ||
      values.size() != source.num_nodes())
    fail(ErrorCode::Internal, "image mesh size mismatch");

  if (n_ == 1) {
    const std::size_t N = directions.size();
    std::vector<std::pair<double, double>> av(N);
    for (std::size_t k = 0; k < N; ++k)
      av[k] = {azimuth(directions[k]), values[k]};
    std::sort(av.begin(), av.end());
    ang_.resize(N);
    ang_val_.resize(N);
    for (std::size_t k = 0; k < N; ++k) {
      ang_[k] = av[k].first;
      ang_val_[k] = av[k].second;
    }
    return;
  }

  pts_ = std::move(directions);
  val_ = std::move(values);
  const int nt = source.n_theta, np = source.n_phi;
  const int N = nt * np;

  // Synthetic cap vertices: mean of the first/last image row. The cap has
  // radius O(dtheta), so the constant fit there is second order.
  V3 north{0, 0, 0}, south{0, 0, 0};
  double vn = 0, vs = 0;
  for (int j = 0; j < np; ++j) {
    for (int c = 0; c < 3; ++c) {
      north[c] += pts_[source.idx(0, j)][c];
      south[c] += pts_[source.idx(nt - 1, j)][c];
    }
    vn += val_[source.idx(0, j)];
    vs += val_[source.idx(nt - 1, j)];
  }
  const int i_north = N, i_south = N + 1;
  pts_.push_back(normalized(north));
  pts_.push_back(normalized(south));
  val_.push_back(vn / np);
  val_.push_back(vs / np);

  tris_.reserve(2 * static_cast<std::size_t>(nt - 1) * np + 2 * np);
  for (int i = 0; i + 1 < nt; ++i) {
    for (int j = 0; j < np; ++j) {
      const int j1 = (j + 1) % np;
      const int a = static_cast<int>(source.idx(i, j));
      const int b = static_cast<int>(source.idx(i + 1, j));
      const int c = static_cast<int>(source.idx(i + 1, j1));
      const int d = static_cast<int>(source.idx(i, j1));
      tris_.push_back({a, b, c});
      tris_.push_back({a, c, d});
    }
  }
  for (int j = 0; j < np; ++j) {
    const int j1 = (j + 1) % np;
    tris_.push_back({i_north, static_cast<int>(source.idx(0, j)),
                     static_cast<int>(source.idx(0, j1))});
    tris_.push_back({i_south, static_cast<int>(source.idx(nt - 1, j1)),
                     static_cast<int>(source.idx(nt - 1, j))});
  }

  // Vertex neighborhoods for the local quadratic fits: the 5x5 grid patch
  // around each source node (pole-reflected), full first row for the caps.
  neighborhood_.resize(pts_.size());
  auto pole_node = [&](int i, int j) {
    int jj = j;
    if (i < 0) {
      i = -1 - i;
      jj += np / 2;
    } else if (i >= nt) {
      i = 2 * nt - 1 - i;
      jj += np / 2;
    }
    jj %= np;
    if (jj < 0) jj += np;
    return static_cast<int>(source.idx(i, jj));
  };
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < np; ++j) {
      auto& nb = neighborhood_[source.idx(i, j)];
      for (int di = -2; di <= 2; ++di)
        for (int dj = -2; dj <= 2; ++dj) nb.push_back(pole_node(i + di, j + dj));
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
  }
  for (int j = 0; j < np; ++j) {
    neighborhood_[i_north].push_back(static_cast<int>(source.idx(0, j)));
    neighborhood_[i_south].push_back(static_cast<int>(source.idx(nt - 1, j)));
    if (nt > 1) {
      neighborhood_[i_north].push_back(static_cast<int>(source.idx(1, j)));
      neighborhood_[i_south].push_back(static_cast<int>(source.idx(nt - 2, j)));
    }
  }
  neighborhood_[i_north].push_back(i_north);
  neighborhood_[i_south].push_back(i_south);

  // Lat-long bins over (z, phi) with one bin of inflation for arc bulge.
  bins_z_ = std::max(8, nt);
  bins_p_ = std::max(8, np);
  bins_.assign(static_cast<std::size_t>(bins_z_) * bins_p_, {});
  auto zbin = [&](double z) {
    int b = static_cast<int>((z + 1.0) * 0.5 * bins_z_);
    return std::min(std::max(b, 0), bins_z_ - 1);
  };
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
    const auto& tr = tris_[t];
    double zmin = 1.0, zmax = -1.0;
    double pmin = 2.0 * kPi, pmax = 0.0;
    bool wide = false;
    const double p0 = azimuth(pts_[tr[0]]);
    for (int v = 0; v < 3; ++v) {
      const V3& p = pts_[tr[v]];
      zmin = std::min(zmin, p[2]);
      zmax = std::max(zmax, p[2]);
      double a = azimuth(p) - p0;
      if (a > kPi) a -= 2.0 * kPi;
      if (a < -kPi) a += 2.0 * kPi;
      if (std::abs(a) > 0.5 * kPi) wide = true;
      pmin = std::min(pmin, p0 + a);
      pmax = std::max(pmax, p0 + a);
    }
    // Caps and near-pole triangles get every azimuth bin.
    if (zmax > 1.0 - 4.0 / bins_z_ || zmin < -1.0 + 4.0 / bins_z_) wide = true;
    const int z0 = std::max(0, zbin(zmin) - 1);
    const int z1 = std::min(bins_z_ - 1, zbin(zmax) + 1);
    for (int bz = z0; bz <= z1; ++bz) {
      if (wide) {
        for (int bp = 0; bp < bins_p_; ++bp)
          bins_[static_cast<std::size_t>(bz) * bins_p_ + bp].push_back(t);
      } else {
        const int b0 = static_cast<int>(std::floor(pmin / (2.0 * kPi) * bins_p_)) - 1;
        const int b1 = static_cast<int>(std::floor(pmax / (2.0 * kPi) * bins_p_)) + 1;
        for (int bp = b0; bp <= b1; ++bp) {
          int w = bp % bins_p_;
          if (w < 0) w += bins_p_;
          bins_[static_cast<std::size_t>(bz) * bins_p_ + w].push_back(t);
        }
      }
    }
  }
}

int ImageMesh::locate(const std::array<double, 3>& u, double* bary) const {
  int zb = static_cast<int>((u[2] + 1.0) * 0.5 * bins_z_);
  zb = std::min(std::max(zb, 0), bins_z_ - 1);
  int pb = static_cast<int>(azimuth(u) / (2.0 * kPi) * bins_p_);
  pb = std::min(std::max(pb, 0), bins_p_ - 1);

  auto try_list = [&](const std::vector<int>& cand, int* best,
                      double* best_min) {
    for (int t : cand) {
      const auto& tr = tris_[t];
      const V3 &a = pts_[tr[0]], &b = pts_[tr[1]], &c = pts_[tr[2]];
      const double d = det3(a, b, c);
      if (std::abs(d) < 1e-300) continue;
      const double wa = det3(u, b, c) / d;
      const double wb = det3(a, u, c) / d;
      const double wc = det3(a, b, u) / d;
      const double s = wa + wb + wc;
      if (s <= 0) continue;
      const double mn = std::min(wa, std::min(wb, wc)) / s;
      if (mn > *best_min) {
        *best_min = mn;
        *best = t;
        bary[0] = wa / s;
        bary[1] = wb / s;
        bary[2] = wc / s;
      }
    }
  };

  int best = -1;
  double best_min = -1e300;
  try_list(bins_[static_cast<std::size_t>(zb) * bins_p_ + pb], &best,
           &best_min);
  if (best_min < -1e-9) {
    // Rare: fall back to a full scan before declaring a coverage gap.
    std::vector<int> all(tris_.size());
    for (std::size_t t = 0; t < tris_.size(); ++t) all[t] = static_cast<int>(t);
    best = -1;
    best_min = -1e300;
    try_list(all, &best, &best_min);
  }
  if (best < 0 || best_min < -1e-9)
    fail(ErrorCode::Resample,
         "direction not covered by the image mesh (fold-over or non-convex "
         "image)");
  return best;
}

double ImageMesh::query2(const std::array<double, 3>& u,
                         ResampleOrder order) const {
  double bary[3];
  const int t = locate(u, bary);
  const auto& tr = tris_[t];
  const double linear =
      bary[0] * val_[tr[0]] + bary[1] * val_[tr[1]] + bary[2] * val_[tr[2]];
  if (order == ResampleOrder::Linear) return linear;

  // Kernel-weighted quadratic fit in gnomonic coordinates about u.
  thread_local std::vector<int> gather;
  gather.clear();
  for (int v = 0; v < 3; ++v)
    for (int p : neighborhood_[tr[v]]) gather.push_back(p);
  std::sort(gather.begin(), gather.end());
  gather.erase(std::unique(gather.begin(), gather.end()), gather.end());
  if (gather.size() < 8) return linear;

  V3 aux = std::abs(u[2]) < 0.9 ? V3{0, 0, 1} : V3{1, 0, 0};
  const V3 e1 = normalized(cross(u, aux));
  const V3 e2 = cross(u, e1);

  thread_local std::vector<std::array<double, 3>> pq;  // (x, y, value)
  pq.clear();
  double rmax = 0.0;
  for (int p : gather) {
    const double w = dot(pts_[p], u);
    if (w < 0.5) continue;
    const double x = dot(pts_[p], e1) / w;
    const double y = dot(pts_[p], e2) / w;
    rmax = std::max(rmax, x * x + y * y);
    pq.push_back({x, y, val_[p]});
  }
  if (pq.size() < 8) return linear;
  const double R = std::sqrt(rmax) * 1.0001;

  double A[6][6] = {};
  double rhs[6] = {};
  for (const auto& p : pq) {
    const double x = p[0] / R, y = p[1] / R;
    const double d = std::sqrt(x * x + y * y);
    if (d >= 1.0) continue;
    const double wk = std::pow(1.0 - d, 4) * (4.0 * d + 1.0);
    const double basis[6] = {1.0, x, y, x * x, x * y, y * y};
    for (int r = 0; r < 6; ++r) {
      rhs[r] += wk * basis[r] * p[2];
      for (int c = 0; c < 6; ++c) A[r][c] += wk * basis[r] * basis[c];
    }
  }
  for (int r = 0; r < 6; ++r) A[r][r] += 1e-12;
  if (!solve_small<6>(A, rhs)) return linear;
  return rhs[0];
}

double ImageMesh::query1(const std::array<double, 3>& u,
                         ResampleOrder order) const {
  const double a = azimuth(u);
  const int N = static_cast<int>(ang_.size());
  // First node with angle > a (cyclically); the bracket is [j0-1, j0].
  int j0 = static_cast<int>(
      std::upper_bound(ang_.begin(), ang_.end(), a) - ang_.begin());
  auto node = [&](int j) {
    int jj = ((j % N) + N) % N;
    double ang = ang_[jj];
    // Unwrap relative to the query.
    while (ang - a > kPi) ang -= 2.0 * kPi;
    while (ang - a < -kPi) ang += 2.0 * kPi;
    return std::pair<double, double>(ang, ang_val_[jj]);
  };
  if (order == ResampleOrder::Linear) {
    auto [x0, v0] = node(j0 - 1);
    auto [x1, v1] = node(j0);
    if (x1 == x0) return v0;
    const double t = (a - x0) / (x1 - x0);
    return (1.0 - t) * v0 + t * v1;
  }
  // 4-point Lagrange through the two brackets on each side.
  std::pair<double, double> p[4] = {node(j0 - 2), node(j0 - 1), node(j0),
                                    node(j0 + 1)};
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    double li = 1.0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      const double den = p[i].first - p[j].first;
      if (den == 0.0) return p[i].second;
      li *= (a - p[j].first) / den;
    }
    s += li * p[i].second;
  }
  return s;
}

double ImageMesh::query(const std::array<double, 3>& u,
                        ResampleOrder order) const {
  return n_ == 1 ? query1(u, order) : query2(u, order);
}

std::vector<double> ImageMesh::resample(const SphericalGrid& target,
                                        ResampleOrder order) const {
  std::vector<double> out(target.num_nodes());
  std::vector<char> failed(target.num_nodes(), 0);
  parallel_for(target.num_nodes(), [&](std::size_t k) {
    try {
      out[k] = query(target.dir[k], order);
    } catch (const Error&) {
      failed[k] = 1;
    }
  });
  for (std::size_t k = 0; k < failed.size(); ++k)
    if (failed[k])
      fail(ErrorCode::Resample,
           "resampling failed at target node " + std::to_string(k) +
               " (image coverage gap indicates non-convexity)");
  return out;
}

}  // namespace qmass
