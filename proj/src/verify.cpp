#include "qmass/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <set>

#include <json.hpp>

namespace qmass {

namespace {

using json = nlohmann::json;

double tanz(double z) { return std::tan(z); }

struct PairData {
  const QuermassVector* K;
  const QuermassVector* D;  // dual; may be null
};

// Identity product for the source space, hitting 1 on exact duals.
double identity_product(const SpaceForm& space, int n, int k,
                        const QuermassVector& K, const QuermassVector& D,
                        bool* ok) {
  *ok = false;
  switch (space.kind) {
    case SpaceKind::Sphere: {
      if (!K.zeta_ok[n - k] || !D.zeta_ok[k]) return 0.0;
      *ok = true;
      return tanz(K.zeta[n - k]) * tanz(D.zeta[k]);
    }
    case SpaceKind::Hyperbolic: {
      if (!K.zeta_ok[k] || !D.zeta_ok[n - k]) return 0.0;
      if (!(K.zeta[k] > 0.0)) return 0.0;
      *ok = true;
      return std::tanh(D.zeta[n - k]) / std::tanh(K.zeta[k]);
    }
    case SpaceKind::DeSitterUpper: {
      if (!K.zeta_ok[n - k] || !D.zeta_ok[k]) return 0.0;
      if (!(D.zeta[k] > 0.0)) return 0.0;
      *ok = true;
      return std::tanh(K.zeta[n - k]) / std::tanh(D.zeta[k]);
    }
  }
  return 0.0;
}

std::vector<IdentityEntry> build_identities(const SpaceForm& space, int n,
                                            const QuermassVector& K,
                                            const QuermassVector& D) {
  std::vector<IdentityEntry> out;
  for (int k = 0; k <= n; ++k) {
    IdentityEntry e;
    e.k = k;
    e.product = identity_product(space, n, k, K, D, &e.ok);
    e.product_residual = e.ok ? std::abs(e.product - 1.0) : 0.0;
    e.pairing = pair_functional(space, n, k, K.W, D.W);
    e.pairing_constant = pair_constant(space, n, k);
    e.pairing_residual = std::abs(e.pairing - e.pairing_constant);
    out.push_back(e);
  }
  return out;
}

struct IneqBuilder {
  int n;
  const SpaceForm& space;
  const ConvexityClass& cls;
  const QuermassVector& K;
  const QuermassVector* D;
  double band;
  std::vector<InequalityEntry> out;
  std::set<std::string> seen;

  bool zk(const QuermassVector& q, int k) const { return q.zeta_ok[k]; }

  void finish(InequalityEntry& e, bool met) {
    e.hypothesis_met = met;
    if (!met) {
      e.status = "not_applicable";
      e.margin = 0.0;
    } else if (e.margin >= band) {
      e.status = "holds";
    } else if (e.margin > -band) {
      e.status = "borderline";
    } else {
      e.status = "violated";
    }
    if (seen.insert(e.name).second) out.push_back(e);
  }

  // product-form: tan(zeta_a(K)) * tan(zeta_b(K*)) >=/<= 1 (sphere)
  void sphere_tan(const std::string& name, int a, int b, bool geq, bool met) {
    InequalityEntry e;
    e.name = name;
    e.hypothesis = "strictly_convex";
    if (!D || !zk(K, a) || !zk(*D, b)) {
      finish(e, false);
      return;
    }
    e.lhs = tanz(K.zeta[a]) * tanz(D->zeta[b]);
    e.rhs = 1.0;
    e.margin = geq ? e.lhs - 1.0 : 1.0 - e.lhs;
    finish(e, met);
  }

  // coth(zeta_a(K)) * tanh(zeta_b(K*)) >=/<= 1 (hyperbolic source)
  void hyp_coth(const std::string& name, const std::string& hyp, int a, int b,
                bool geq, bool met) {
    InequalityEntry e;
    e.name = name;
    e.hypothesis = hyp;
    if (!D || !zk(K, a) || !zk(*D, b) || !(K.zeta[a] > 0.0)) {
      finish(e, false);
      return;
    }
    e.lhs = std::tanh(D->zeta[b]) / std::tanh(K.zeta[a]);
    e.rhs = 1.0;
    e.margin = geq ? e.lhs - 1.0 : 1.0 - e.lhs;
    finish(e, met);
  }

  // W_a(K) >=/<= f_a(f_b^{-1}(W_b(K)))
  void w_vs_f(const std::string& name, const std::string& hyp, int a, int b,
              bool geq, bool met) {
    InequalityEntry e;
    e.name = name;
    e.hypothesis = hyp;
    if (!zk(K, b)) {
      finish(e, false);
      return;
    }
    e.lhs = K.W[a];
    e.rhs = ball_f(space, n, a, K.zeta[b]);
    const double scale = std::max({std::abs(e.lhs), std::abs(e.rhs), 1e-12});
    e.margin = (geq ? e.lhs - e.rhs : e.rhs - e.lhs) / scale;
    finish(e, met);
  }

  // zeta_a(K) <= zeta_b(K) restatements
  void zeta_mono(const std::string& name, const std::string& hyp, int a, int b,
                 bool met) {
    InequalityEntry e;
    e.name = name;
    e.hypothesis = hyp;
    if (!zk(K, a) || !zk(K, b)) {
      finish(e, false);
      return;
    }
    e.lhs = K.zeta[a];
    e.rhs = K.zeta[b];
    e.margin = (e.rhs - e.lhs) / std::max(std::abs(e.rhs), 1e-12);
    finish(e, met);
  }
};

void build_inequalities(IneqBuilder& b) {
  const int n = b.n;
  const bool strict = b.cls.strictly_convex;
  switch (b.space.kind) {
    case SpaceKind::Sphere: {
      for (int k = 1; k <= n; ++k) {
        b.sphere_tan("thm1.3i.upper[k=" + std::to_string(k) + "]", n, k, true,
                     strict);
        b.sphere_tan("thm1.3i.lower[k=" + std::to_string(k) + "]", n - k, 0,
                     false, strict);
      }
      for (int l = 0; l <= n; ++l) {
        for (int i = 1; 2 * i <= l; ++i)
          b.sphere_tan("thm1.3ii.upper[l=" + std::to_string(l) +
                           ",i=" + std::to_string(i) + "]",
                       n - l + 2 * i, l, true, strict);
        for (int j = 1; 2 * j <= n - l; ++j)
          b.sphere_tan("thm1.3ii.lower[l=" + std::to_string(l) +
                           ",j=" + std::to_string(j) + "]",
                       n - l - 2 * j, l, false, strict);
      }
      for (int l = 0; l < n; ++l)
        b.w_vs_f("lem5.1.Wn[l=" + std::to_string(l) + "]", "strictly_convex",
                 n, l, true, strict);
      for (int k = 1; k < n; ++k)
        b.w_vs_f("lem5.1.iso[k=" + std::to_string(k) + "]", "strictly_convex",
                 k, 0, true, strict);
      for (int m = 1; m <= n - 1; ++m)
        b.w_vs_f("lem5.1.step[m=" + std::to_string(m) + "]",
                 "strictly_convex", m + 1, m - 1, true, strict);
      break;
    }
    case SpaceKind::Hyperbolic: {
      const bool hconv = b.cls.h_convex;
      for (int k = 0; k <= n; ++k)
        for (int l = 0; l <= n; ++l) {
          if (k + l == n) continue;
          const bool geq = k + l < n;
          b.hyp_coth("thm1.4[k=" + std::to_string(k) + ",l=" +
                         std::to_string(l) + "]",
                     "h_convex", k, l, geq, hconv);
        }
      for (int l = 0; l < n - 1; ++l)
        b.w_vs_f("thm1.5[l=" + std::to_string(l) + "]", "strictly_convex",
                 n - 1, l, true, strict);
      for (int l = 0; l < n - 1; ++l)
        b.hyp_coth("thm1.6a[l=" + std::to_string(l) + "]", "strictly_convex",
                   l, 1, true, strict);
      for (int k = 0; k < n; ++k)
        b.hyp_coth("thm1.6b[k=" + std::to_string(k) + "]", "strictly_convex",
                   k, 0, true, strict);
      for (int k = 1; k <= n; ++k)
        for (int l = 0; l < k; ++l)
          b.w_vs_f("lem5.2a.hconv[k=" + std::to_string(k) + ",l=" +
                       std::to_string(l) + "]",
                   "h_convex", k, l, true, hconv);
      for (int l = 0; l < n; ++l)
        b.w_vs_f("lem5.2a.Wn[l=" + std::to_string(l) + "]", "strictly_convex",
                 n, l, true, strict);
      for (int i = 1; 2 * i < n; ++i)
        b.w_vs_f("lem5.2a.Wn1[i=" + std::to_string(i) + "]",
                 "strictly_convex", n - 1, n - 1 - 2 * i, true, strict);
      if (n >= 2)
        b.w_vs_f("lem5.2a.meanconvex", "mean_convex", 2, 1, true,
                 b.cls.m_convex[0]);
      if (n >= 3)
        b.w_vs_f("lem5.2a.2convex", "2_convex", 3, 1, true,
                 b.cls.m_convex.size() > 1 && b.cls.m_convex[1]);
      for (int l = 0; l < n - 1; ++l)
        b.zeta_mono("zeta_mono.n1[l=" + std::to_string(l) + "]",
                    "strictly_convex", l, n - 1, strict);
      for (int k = 0; k < n; ++k)
        b.zeta_mono("zeta_mono.n[k=" + std::to_string(k) + "]",
                    "strictly_convex", k, n, strict);
      break;
    }
    case SpaceKind::DeSitterUpper: {
      const bool unit = b.cls.unit_bounded;
      for (int k = 1; k <= n; ++k)
        for (int l = 0; l < k; ++l)
          b.w_vs_f("thm1.7[k=" + std::to_string(k) + ",l=" +
                       std::to_string(l) + "]",
                   "unit_bounded", k, l, false, unit);
      for (int k = 2; k <= n; ++k)
        b.w_vs_f("thm1.8a[k=" + std::to_string(k) + "]", "strictly_convex", k,
                 1, false, strict);
      if (n >= 2)
        b.w_vs_f("thm1.8b", "strictly_convex", n - 1, n - 2, false, strict);
      if (n >= 3)
        b.w_vs_f("thm1.8c", "strictly_convex", n - 1, n - 3, false, strict);
      b.w_vs_f("lem5.2b.iso", "spacelike", 0, 1, true, true);
      if (n >= 2)
        b.w_vs_f("lem5.2b.meanconvex", "mean_convex", 1, 2, true,
                 b.cls.m_convex[0]);
      break;
    }
  }
}

json quermass_json(const QuermassVector& q) {
  json j;
  j["method"] =
      q.method == QuermassMethod::Recursion ? "recursion" : "closed_form";
  j["W"] = q.W;
  json z = json::array(), ok = json::array();
  for (std::size_t i = 0; i < q.zeta.size(); ++i) {
    z.push_back(q.zeta_ok[i] ? json(q.zeta[i]) : json());
    ok.push_back(static_cast<bool>(q.zeta_ok[i]));
  }
  j["zeta"] = z;
  j["zeta_in_range"] = ok;
  return j;
}

json class_json(const ConvexityClass& c, const SpaceForm& space) {
  json j;
  j["strictly_convex"] = c.strictly_convex;
  j["kappa_min"] = c.kappa_min;
  j["kappa_max"] = c.kappa_max;
  if (space.kind == SpaceKind::Hyperbolic) j["h_convex"] = c.h_convex;
  if (space.kind == SpaceKind::DeSitterUpper) {
    j["unit_bounded"] = c.unit_bounded;
    j["spacelike_margin"] = c.spacelike_margin;
  }
  json m = json::array();
  for (bool v : c.m_convex) m.push_back(v);
  j["m_convex"] = m;
  return j;
}

Report assemble_report(const SpaceForm& space, int n,
                       const std::vector<int>& resolution,
                       const ConvexityClass& cls, const QuermassVector& K,
                       std::optional<QuermassVector> D, double band,
                       const std::string& meta) {
  Report rep;
  rep.space = space.name();
  rep.n = n;
  rep.resolution = resolution;
  rep.classification = cls;
  rep.quermass = K;
  rep.dual_quermass = D;
  rep.borderline_band = band;
  rep.body_meta = meta;

  if (D) rep.identities = build_identities(space, n, K, *D);

  IneqBuilder b{n, space, cls, K, D ? &*D : nullptr, band, {}, {}};
  build_inequalities(b);
  rep.inequalities = std::move(b.out);

  if (D) {
    for (const IdentityEntry& e : rep.identities) {
      ConstantEntry c;
      c.name = "pairing[k=" + std::to_string(e.k) + "]";
      c.value = e.pairing;
      c.expected = e.pairing_constant;
      c.residual = e.pairing_residual;
      rep.constants.push_back(c);
    }
  }
  if (space.kind == SpaceKind::Hyperbolic && cls.strictly_convex) {
    ConstantEntry c;
    c.name = "gauss_bonnet";
    c.value = K.W[n + 1];
    c.expected = omega_n(n) / (n + 1);
    c.residual = std::abs(c.value - c.expected);
    rep.constants.push_back(c);
  }
  return rep;
}

}  // namespace

Report verify_body(const RadialGraphBody& body, const VerifyOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = body.grid->n;
  const CurvatureField field = compute_curvature(body);
  const ConvexityClass cls = classify(field, body.space);
  const QuermassVector K = quermassintegrals(body, field);

  std::optional<QuermassVector> D;
  if (opts.with_dual && cls.strictly_convex) {
    const RadialGraphBody dual = polar(body);
    D = quermassintegrals(dual, compute_curvature(dual));
  }

  // Discrete-path borderline band: the identity residual is a direct
  // observation of this body's discretization error.
  double band = 1e-6;
  if (D) {
    std::vector<IdentityEntry> ids =
        build_identities(body.space, n, K, *D);
    double obs = 0.0;
    for (const auto& e : ids)
      if (e.ok) obs = std::max(obs, e.product_residual);
    band = std::max(band, 5.0 * obs);
  } else {
    const double h = body.grid->n == 1 ? 2.0 * kPi / body.grid->n_phi
                                       : kPi / body.grid->n_theta;
    band = 1e-6 + 5.0 * h * h;
  }

  std::vector<int> res = body.grid->n == 1
                             ? std::vector<int>{body.grid->n_phi}
                             : std::vector<int>{body.grid->n_theta,
                                                body.grid->n_phi};
  Report rep = assemble_report(body.space, n, res, cls, K, std::move(D), band,
                               opts.body_meta);
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

Report verify_ball(const SpaceForm& space, int n, double r) {
  const auto t0 = std::chrono::steady_clock::now();
  QuermassVector K;
  K.space = space;
  K.n = n;
  K.method = QuermassMethod::ClosedForm;
  K.W = ball_quermass(space, n, r);
  K.zeta.assign(n + 1, r);
  K.zeta_ok.assign(n + 1, true);

  const double r_dual = space.kind == SpaceKind::Sphere ? 0.5 * kPi - r : r;
  QuermassVector D = K;
  D.space = make_space(dual_space_of(space.kind));
  D.W = ball_quermass(D.space, n, r_dual);
  D.zeta.assign(n + 1, r_dual);
  D.zeta_ok.assign(n + 1, true);

  ConvexityClass cls;
  cls.strictly_convex = true;
  const double kb = ball_principal_curvature(space, r);
  cls.kappa_min = cls.kappa_max = kb;
  cls.h_convex = space.kind == SpaceKind::Hyperbolic && kb >= 1.0;
  cls.unit_bounded = space.kind == SpaceKind::DeSitterUpper && kb <= 1.0;
  cls.spacelike_margin = 1.0;
  cls.m_convex.assign(n, true);

  Report rep = assemble_report(space, n, {}, cls, K, std::move(D), 1e-6,
                               "{\"kind\":\"ball\",\"r\":" + std::to_string(r) +
                                   "}");
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

std::vector<IdentityEntry> identity_report(const RadialGraphBody& body) {
  return verify_body(body).identities;
}

std::vector<InequalityEntry> inequality_report(const RadialGraphBody& body) {
  return verify_body(body).inequalities;
}

std::string report_to_json(const Report& rep) {
  json j;
  j["schema"] = rep.schema;
  json body;
  body["space"] = rep.space;
  body["n"] = rep.n;
  body["resolution"] = rep.resolution;
  if (!rep.body_meta.empty()) {
    try {
      body["spec"] = json::parse(rep.body_meta);
    } catch (const json::exception&) {
      body["spec"] = rep.body_meta;
    }
  }
  j["body"] = body;
  j["class"] = class_json(rep.classification, space_from_name(rep.space));
  j["quermass"] = quermass_json(rep.quermass);
  if (rep.dual_quermass)
    j["dual_quermass"] = quermass_json(*rep.dual_quermass);
  else
    j["dual_quermass"] = json();
  json ids = json::array();
  for (const auto& e : rep.identities) {
    json je;
    je["k"] = e.k;
    je["in_range"] = e.ok;
    je["product"] = e.product;
    je["product_residual"] = e.product_residual;
    je["pairing"] = e.pairing;
    je["pairing_constant"] = e.pairing_constant;
    je["pairing_residual"] = e.pairing_residual;
    ids.push_back(je);
  }
  j["identities"] = ids;
  json ineqs = json::array();
  for (const auto& e : rep.inequalities) {
    json je;
    je["name"] = e.name;
    je["hypothesis"] = e.hypothesis;
    je["hypothesis_met"] = e.hypothesis_met;
    je["lhs"] = e.lhs;
    je["rhs"] = e.rhs;
    je["margin"] = e.margin;
    je["status"] = e.status;
    ineqs.push_back(je);
  }
  j["inequalities"] = ineqs;
  json cons = json::array();
  for (const auto& c : rep.constants) {
    json jc;
    jc["name"] = c.name;
    jc["value"] = c.value;
    jc["expected"] = c.expected;
    jc["residual"] = c.residual;
    cons.push_back(jc);
  }
  j["constants"] = cons;
  json meta;
  meta["borderline_band"] = rep.borderline_band;
  meta["runtime_seconds"] = rep.runtime_seconds;
  j["meta"] = meta;
  return j.dump(2);
}

ProbeSummary conjecture_probe(const ProbeConfig& config) {
  ProbeSummary sum;
  sum.config = config;
  if (config.k <= config.l || config.k > config.n || config.l < 0)
    fail(ErrorCode::Domain, "probe needs 0 <= l < k <= n");

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> ur(config.r_min, config.r_max);
  std::uniform_real_distribution<double> ua(-1.0, 1.0);
  std::uniform_int_distribution<int> um(1, config.max_mode);
  const SpaceForm space = make_space(SpaceKind::DeSitterUpper);
  GridPtr grid = make_grid(config.n, config.res0,
                           config.n == 2 ? config.res1 : 0);

  sum.min_margin = 1e300;
  sum.max_margin = -1e300;
  for (int trial = 0; trial < config.trials; ++trial) {
    const double r = ur(rng);
    std::vector<Perturbation> modes;
    for (int i = 0; i < config.num_modes; ++i)
      modes.push_back({um(rng), config.amplitude * r * ua(rng)});
    RadialGraphBody body;
    try {
      body = make_perturbed_ball(space, r, modes, grid);
    } catch (const Error&) {
      ++sum.hypothesis_failures;
      continue;
    }
    ++sum.generated;
    CurvatureField field;
    try {
      field = compute_curvature(body);
    } catch (const Error&) {
      ++sum.hypothesis_failures;
      continue;
    }
    const ConvexityClass cls = classify(field, space);
    // (k-1)-convexity gate; k=1 needs spacelike only.
    if (config.k >= 2 && !cls.m_convex[config.k - 2]) {
      ++sum.hypothesis_failures;
      continue;
    }
    const QuermassVector q = quermassintegrals(body, field);
    if (!q.zeta_ok[config.l]) {
      ++sum.hypothesis_failures;
      continue;
    }
    const double rhs = ball_f(space, config.n, config.k, q.zeta[config.l]);
    const double margin =
        (rhs - q.W[config.k]) / std::max(std::abs(rhs), 1e-12);
    sum.min_margin = std::min(sum.min_margin, margin);
    sum.max_margin = std::max(sum.max_margin, margin);
    const double band = 1e-6 + 5.0 * std::pow(kPi / config.res0, 2);
    if (margin >= band) {
      ++sum.holds;
    } else if (margin > -band) {
      ++sum.borderline;
    } else {
      ++sum.violations;
      json spec;
      spec["r"] = r;
      json ms = json::array();
      for (const auto& p : modes)
        ms.push_back({{"mode", p.mode}, {"amplitude", p.amplitude}});
      spec["perturbations"] = ms;
      spec["margin"] = margin;
      sum.violating_specs.push_back(spec.dump());
    }
  }
  if (sum.min_margin > sum.max_margin) sum.min_margin = sum.max_margin = 0.0;
  return sum;
}

std::string probe_to_json(const ProbeSummary& s) {
  json j;
  j["schema"] = "v1";
  j["experimental"] = true;
  j["note"] =
      "numeric probe: a violation at desk scale may be discretization error "
      "or a counterexample candidate; this report does not claim which";
  json cfg;
  cfg["n"] = s.config.n;
  cfg["resolution"] = s.config.n == 1
                          ? json::array({s.config.res0})
                          : json::array({s.config.res0, s.config.res1});
  cfg["k"] = s.config.k;
  cfg["l"] = s.config.l;
  cfg["trials"] = s.config.trials;
  cfg["seed"] = s.config.seed;
  cfg["r_range"] = {s.config.r_min, s.config.r_max};
  cfg["amplitude"] = s.config.amplitude;
  j["config"] = cfg;
  j["generated"] = s.generated;
  j["hypothesis_failures"] = s.hypothesis_failures;
  j["holds"] = s.holds;
  j["borderline"] = s.borderline;
  j["violations"] = s.violations;
  j["min_margin"] = s.min_margin;
  j["max_margin"] = s.max_margin;
  json v = json::array();
  for (const auto& t : s.violating_specs) v.push_back(json::parse(t));
  j["violating_bodies"] = v;
  return j.dump(2);
}

}  // namespace qmass
