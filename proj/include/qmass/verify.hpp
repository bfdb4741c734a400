// Machine-readable reports: duality identities, the inequality catalog with
// hypothesis gating, pairing constants, and the de Sitter conjecture probe.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmass/duality.hpp"
#include "qmass/quermass.hpp"

namespace qmass {

struct IdentityEntry {
  int k = 0;
  double product = 0.0;          // tan/tan or coth/tanh pairing
  double product_residual = 0.0; // |product - 1|
  double pairing = 0.0;          // (k+1)W_k and (n+1-k)W_{n-k}* combination
  double pairing_constant = 0.0; // C_{n,k} target
  double pairing_residual = 0.0;
  bool ok = false;               // both mean radii were in range
};

struct InequalityEntry {
  std::string name;
  std::string hypothesis;
  bool hypothesis_met = false;
  double lhs = 0.0, rhs = 0.0;
  double margin = 0.0;  // normalized, >= 0 means the inequality holds
  std::string status;   // holds | borderline | violated | not_applicable
};

struct ConstantEntry {
  std::string name;
  double value = 0.0, expected = 0.0, residual = 0.0;
};

struct Report {
  std::string schema = "v1";
  std::string space;
  int n = 2;
  std::vector<int> resolution;
  ConvexityClass classification;
  QuermassVector quermass;
  std::optional<QuermassVector> dual_quermass;
  std::vector<IdentityEntry> identities;
  std::vector<InequalityEntry> inequalities;
  std::vector<ConstantEntry> constants;
  double borderline_band = 1e-6;
  double runtime_seconds = 0.0;
  std::string body_meta;  // caller-provided descriptor (JSON text)
};

struct VerifyOptions {
  bool with_dual = true;        // compute the polar and dual quantities
  std::string body_meta;        // JSON text echoed into the report
};

Report verify_body(const RadialGraphBody& body, const VerifyOptions& opts = {});

// Closed-form report for a geodesic ball / coordinate slice: exact f_k path,
// no grid. Equality cases should show |margin| <= 1e-6.
Report verify_ball(const SpaceForm& space, int n, double r);

std::string report_to_json(const Report& report);

// Identity entries only (computes the polar internally).
std::vector<IdentityEntry> identity_report(const RadialGraphBody& body);

// Inequality entries only.
std::vector<InequalityEntry> inequality_report(const RadialGraphBody& body);

struct ProbeConfig {
  int n = 2;
  int res0 = 32, res1 = 64;
  int k = 2, l = 0;
  int trials = 50;
  unsigned long long seed = 1;
  double r_min = 0.6, r_max = 1.6;
  double amplitude = 0.08;  // relative to r
  int num_modes = 3, max_mode = 8;
};

struct ProbeSummary {
  ProbeConfig config;
  int generated = 0, hypothesis_failures = 0;
  int holds = 0, borderline = 0, violations = 0;
  double min_margin = 0.0, max_margin = 0.0;
  std::vector<std::string> violating_specs;  // JSON body specs
  bool experimental = true;
};

ProbeSummary conjecture_probe(const ProbeConfig& config);
std::string probe_to_json(const ProbeSummary& summary);

}  // namespace qmass
