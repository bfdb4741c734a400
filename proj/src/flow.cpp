#include "qmass/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>

#include "qmass/duality.hpp"
#include "qmass/parallel.hpp"

namespace qmass {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Zonal Fourier tables for the near-pole filter, cached per azimuth count.
struct FilterTables {
  int n_phi = 0;
  int m_max = 0;
  std::vector<double> cosv, sinv;  // (m_max+1) x n_phi
};

std::map<int, FilterTables> g_filter_cache;
std::mutex g_filter_mutex;

const FilterTables& filter_tables(int n_phi) {
  std::lock_guard<std::mutex> lock(g_filter_mutex);
  auto it = g_filter_cache.find(n_phi);
  if (it == g_filter_cache.end()) {
    FilterTables t;
    t.n_phi = n_phi;
    t.m_max = n_phi / 4 + 1;
    t.cosv.resize(static_cast<std::size_t>(t.m_max + 1) * n_phi);
    t.sinv.resize(static_cast<std::size_t>(t.m_max + 1) * n_phi);
    for (int m = 0; m <= t.m_max; ++m)
      for (int j = 0; j < n_phi; ++j) {
        const double a = 2.0 * kPi * m * j / n_phi;
        t.cosv[static_cast<std::size_t>(m) * n_phi + j] = std::cos(a);
        t.sinv[static_cast<std::size_t>(m) * n_phi + j] = std::sin(a);
      }
    it = g_filter_cache.emplace(n_phi, std::move(t)).first;
  }
  return it->second;
}

// Cap the azimuthal wavenumber at ceil(sin(theta) n_phi / 2) on rows with
// sin(theta) < 1/2; rows at larger sin(theta) are stable under the
// equatorial CFL step.
void pole_filter(const SphericalGrid& grid, std::vector<double>& rho) {
  if (grid.n != 2) return;
  const int np = grid.n_phi;
  const FilterTables& tab = filter_tables(np);
  std::vector<int> rows;
  for (int i = 0; i < grid.n_theta; ++i)
    if (grid.sin_theta[i] < 0.5) rows.push_back(i);
  parallel_for(rows.size(), [&](std::size_t ri) {
    const int i = rows[ri];
    const int mc = std::max(
        2, static_cast<int>(std::ceil(0.5 * grid.sin_theta[i] * np)));
    double* row = &rho[grid.idx(i, 0)];
    std::vector<double> out(np, 0.0);
    for (int m = 0; m <= mc; ++m) {
      const double* cv = &tab.cosv[static_cast<std::size_t>(m) * np];
      const double* sv = &tab.sinv[static_cast<std::size_t>(m) * np];
      double a = 0.0, b = 0.0;
      for (int j = 0; j < np; ++j) {
        a += row[j] * cv[j];
        b += row[j] * sv[j];
      }
      const double scale = (m == 0 ? 1.0 : 2.0) / np;
      a *= scale;
      b *= scale;
      for (int j = 0; j < np; ++j) out[j] += a * cv[j] + b * sv[j];
    }
    std::copy(out.begin(), out.end(), row);
  });
}

double max_abs_speed(const FlowState& state, const SpeedFunction& speed) {
  double mx = 0.0;
  const int n = state.field.n;
  for (std::size_t k = 0; k < state.field.N; ++k)
    mx = std::max(mx, std::abs(speed.eval(state.field.kappa_at(k),
                                          state.field.E_at(k), n)));
  return mx;
}

double cfl_step(const FlowState& state, const SpeedFunction& speed,
                double cfl) {
  const SphericalGrid& g = *state.body.grid;
  double lam_min = 1e300;
  for (double r : state.body.rho)
    lam_min = std::min(lam_min, state.body.space.warp(r));
  const double h = g.n == 1 ? lam_min * g.dphi
                            : 0.5 * lam_min * std::min(g.dtheta, g.dphi);
  const double fmax = std::max(max_abs_speed(state, speed), 1e-12);
  return cfl * h * h / fmax;
}

void refresh_diagnostics(FlowState& s) {
  s.min_kappa = s.field.kappa[0];
  s.max_kappa = s.field.kappa[0];
  for (double k : s.field.kappa) {
    s.min_kappa = std::min(s.min_kappa, k);
    s.max_kappa = std::max(s.max_kappa, k);
  }
  s.min_rho = *std::min_element(s.body.rho.begin(), s.body.rho.end());
  s.min_v2 = 1.0;
  for (double v : s.field.v) s.min_v2 = std::min(s.min_v2, v * v);
}

std::vector<double> flux_integrals(const FlowState& state,
                                   const SpeedFunction& speed) {
  const int n = state.field.n;
  const double sg = state.body.space.sigma();
  std::vector<double> flux(n + 1, 0.0);
  std::vector<double> A(state.field.N);
  parallel_for(state.field.N, [&](std::size_t k) {
    A[k] = -sg * speed.eval(state.field.kappa_at(k), state.field.E_at(k), n);
  });
  for (std::size_t k = 0; k < state.field.N; ++k)
    for (int m = 0; m <= n; ++m)
      flux[m] += A[k] * state.field.E_at(k)[m] * state.field.area_w[k];
  return flux;
}

}  // namespace

double SpeedFunction::eval(const double* kappa, const double* E, int n) const {
  switch (kind) {
    case Kind::HarmonicMean:
      return E[n] / E[n - 1];
    case Kind::PowerGauss:
      return std::pow(E[n], alpha);
    case Kind::Custom:
      return custom(kappa, E, n);
  }
  return 0.0;
}

std::string SpeedFunction::name() const {
  switch (kind) {
    case Kind::HarmonicMean:
      return "harmonic";
    case Kind::PowerGauss:
      return "gauss^" + std::to_string(alpha);
    case Kind::Custom:
      return "custom";
  }
  return "?";
}

FlowState make_flow_state(const RadialGraphBody& body) {
  FlowState s{0.0, 0.0, body, compute_curvature(body)};
  refresh_diagnostics(s);
  return s;
}

FlowState flow_step(const FlowState& state, const SpeedFunction& speed,
                    double dt) {
  const int n = state.field.n;
  const double sg = state.body.space.sigma();
  RadialGraphBody next = state.body;
  parallel_for(state.field.N, [&](std::size_t k) {
    const double F =
        speed.eval(state.field.kappa_at(k), state.field.E_at(k), n);
    next.rho[k] += dt * (-sg) * F * state.field.v[k];
  });
  pole_filter(*next.grid, next.rho);

  FlowState out;
  out.t = state.t + dt;
  out.dt_last = dt;
  out.body = std::move(next);
  try {
    validate_body(out.body);
    out.field = compute_curvature(out.body);
  } catch (const Error& e) {
    fail(ErrorCode::StepRejected,
         std::string("step rejected: ") + e.what());
  }
  refresh_diagnostics(out);
  if (!(out.min_kappa > 0.0))
    fail(ErrorCode::StepRejected, "step rejected: convexity lost");
  return out;
}

FlowSeries run_flow(const RadialGraphBody& body, const SpeedFunction& speed,
                    const FlowConfig& config) {
  FlowSeries series;
  series.n = body.grid->n;
  series.space = body.space;
  series.speed = speed.name();

  const int n = body.grid->n;
  std::vector<int> tracked = config.tracked_k;
  if (tracked.empty())
    for (int k = 0; k <= n; ++k) tracked.push_back(k);

  FlowState state = make_flow_state(body);

  auto take_sample = [&](const FlowState& s) {
    FlowSample sample;
    sample.t = s.t;
    sample.dt = s.dt_last;
    const QuermassVector q = quermassintegrals(s.body, s.field);
    sample.W = q.W;
    sample.zeta = q.zeta;
    sample.flux = flux_integrals(s, speed);
    sample.min_kappa = s.min_kappa;
    sample.min_rho = s.min_rho;
    sample.J.assign(n + 1, kNaN);
    if (config.track_polar) {
      const RadialGraphBody dual = polar(s.body);
      const QuermassVector dq =
          quermassintegrals(dual, compute_curvature(dual));
      sample.dual_W = dq.W;
      for (int k : tracked)
        sample.J[k] = pair_functional(s.body.space, n, k, q.W, dq.W);
    }
    series.samples.push_back(std::move(sample));
  };

  take_sample(state);
  const double vol0 = series.samples[0].W[0];

  int sample_stride = 8;
  int steps = 0;
  std::string stop;
  while (true) {
    if (state.t >= config.t_max) {
      stop = "t_max";
      break;
    }
    if (state.min_rho < config.delta_stop) {
      stop = "min_rho";
      break;
    }
    if (state.max_kappa > config.kappa_cap) {
      stop = "kappa_cap";
      break;
    }
    if (steps >= config.max_steps) {
      stop = "max_steps";
      break;
    }

    double dt = std::min(cfl_step(state, speed, config.cfl),
                         config.t_max - state.t);
    bool stepped = false;
    for (int attempt = 0; attempt <= 8; ++attempt) {
      try {
        state = flow_step(state, speed, dt);
        stepped = true;
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::StepRejected) throw;
        dt *= 0.5;
      }
    }
    if (!stepped)
      fail(ErrorCode::FlowStalled,
           "flow stalled at t=" + std::to_string(state.t) +
               " after 8 step rejections");
    ++steps;

    if (steps % sample_stride == 0) {
      take_sample(state);
      if (config.volume_stop_fraction > 0.0 &&
          series.samples.back().W[0] <= config.volume_stop_fraction * vol0) {
        stop = "volume_fraction";
        break;
      }
      // Decimate to keep the sample count bounded while staying evenly
      // spaced when the total flow time is not known in advance.
      if (static_cast<int>(series.samples.size()) > 2 * config.samples) {
        std::vector<FlowSample> kept;
        for (std::size_t i = 0; i < series.samples.size(); i += 2)
          kept.push_back(std::move(series.samples[i]));
        series.samples = std::move(kept);
        sample_stride *= 2;
      }
    }
  }

  if (series.samples.back().t < state.t) take_sample(state);
  series.stop_reason = stop;
  series.t_end = state.t;
  series.steps = steps;

  if (speed.kind == SpeedFunction::Kind::HarmonicMean &&
      body.space.riemannian()) {
    const double r_stop = series.samples.back().zeta[0];
    if (std::isfinite(r_stop)) {
      const double rest = body.space.kind == SpaceKind::Sphere
                              ? -std::log(std::cos(r_stop))
                              : std::log(std::cosh(r_stop));
      series.extinction_estimate = state.t + rest;
    }
  }
  return series;
}

double dual_flow_consistency(const FlowSeries& series) {
  const int n = series.n;
  const double s_pair =
      series.space.kind == SpaceKind::Sphere ? -1.0 : 1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < series.samples.size(); ++i) {
    const FlowSample& a = series.samples[i];
    const FlowSample& b = series.samples[i + 1];
    if (a.dual_W.empty() || b.dual_W.empty()) continue;
    const double dt = b.t - a.t;
    if (!(dt > 0.0)) continue;
    for (int k = 0; k <= n; ++k) {
      const double fd = (b.dual_W[n - k] - a.dual_W[n - k]) / dt;
      const double pred =
          s_pair * (double(k + 1) / (n + 1)) * 0.5 * (a.flux[k] + b.flux[k]);
      const double scale = std::max({std::abs(fd), std::abs(pred), 1e-300});
      if (fd == 0.0 && pred == 0.0) continue;
      worst = std::max(worst, std::abs(fd - pred) / scale);
    }
  }
  return worst;
}

void write_flow_csv(const FlowSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Parse, "cannot open " + path + " for writing");
  const int n = series.n;
  out << "t,dt";
  for (int k = 0; k <= n + 1; ++k) out << ",W_" << k;
  for (int k = 0; k <= n; ++k) out << ",zeta_" << k;
  for (int k = 0; k <= n; ++k) out << ",J_" << k;
  out << ",min_kappa,min_rho";
  const bool dual = !series.samples.empty() && !series.samples[0].dual_W.empty();
  if (dual)
    for (int k = 0; k <= n + 1; ++k) out << ",dual_W_" << k;
  out << "\n";
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, ",%.17g", x);
    out << buf;
  };
  for (const FlowSample& s : series.samples) {
    std::snprintf(buf, sizeof buf, "%.17g", s.t);
    out << buf;
    put(s.dt);
    for (double w : s.W) put(w);
    for (double z : s.zeta) put(z);
    for (double j : s.J) put(j);
    put(s.min_kappa);
    put(s.min_rho);
    if (dual)
      for (double w : s.dual_W) put(w);
    out << "\n";
  }
}

}  // namespace qmass
