#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "metriclab/geometry.hpp"

namespace metriclab {

// A suite was asked to run against a domain it cannot soundly test
// (for example a Kobayashi-side suite on a polygon).
struct UnsoundSuiteError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Arguments of the rational function g used by the sharp-constant analysis.
struct GArgs {
  double gamma = 0.0;
  double delta = 0.0;
  double c2 = 1.0;
};

// (c2 + gamma)(c2 + delta)(2 c2 + 1 + gamma + delta) / (2 c2 - 1 + gamma + delta).
double g_value(const GArgs& a);

// g(gamma, gamma + 1, c2) - (gamma + c2 + 1)^2; identically zero.
double g_identity_residual(double gamma, double c2);

// Residual of the closed-form difference
// g(gamma, gamma+1, c2) - g(gamma, delta, c2)
//   = (gamma + 1 - delta) / (2 c2 - 1 + gamma + delta)
//     * (2 c2^2 - 1 + 3 c2 gamma + c2 delta + gamma^2 + gamma delta);
// identically zero.
double g_difference_residual(double gamma, double delta, double c2);

struct C0Solution {
  double c0 = 0.0;
  double argmin_c2 = 0.0;
};

// Minimizes max{c2 sqrt((2c2+1)/(2c2-1)), c2 + 1} over c2 > 1/2 by
// golden-section search; the minimax value is 1 + sqrt(2)/2 at c2 = sqrt(2)/2.
C0Solution c0_solve();

struct SuiteConfig {
  std::string suite_id;
  std::optional<Domain> domain;
  int pairs = 100;
  std::uint64_t seed = 1;
  double resolution = 0.02;
  std::optional<Point> anchor;
  double radius = 0.2;         // anchor-ball radius for near-boundary suites
  std::vector<double> radii;   // schedule for limit suites (t values for npt_div)
  double c = 2.0;              // coefficient for the v^c suites
};

struct SuiteRecord {
  Point z, w;
  double lhs = 0.0, rhs = 0.0;
  double margin = 0.0;  // rhs - lhs; negative beyond the slack means violation
};

struct SuiteReport {
  std::string suite_id;
  std::vector<SuiteRecord> records;
  long violations = 0;
  double max_margin = 0.0;
  double min_margin = 0.0;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  double resolution = 0.0;
  double radius_used = 0.0;            // neighborhood-search suites only
  double estimated_constant = 0.0;     // empirical-constant suites only
  bool has_estimated_constant = false;
  std::string note;

  bool pass() const { return violations == 0; }
  nlohmann::ordered_json to_json() const;
};

struct TrendRow {
  double parameter = 0.0;
  double statistic = 0.0;
  double slack = 0.0;
  bool pass = true;
};

struct TrendReport {
  std::string suite_id;
  std::vector<TrendRow> rows;
  bool monotone_ok = true;
  bool pass = true;
  std::uint64_t seed = 0;
  double resolution = 0.0;
  std::string note;

  nlohmann::ordered_json to_json() const;
};

// Pointwise inequality suites. Ids: ghm, chain, main_k, main_h, fr, npt, gap,
// v_axioms, rho_triangle, k_le_h. Where a numerically bracketed h enters, the
// dispatcher documents in the report note whether the bound strengthens the
// test or merely falsifies honestly; it never silently substitutes an upper
// bound where a lower bound is required.
SuiteReport check_inequality(const SuiteConfig& cfg);

// Trend suites over a radius (or boundary-approach) schedule. Ids:
// sup_ratio, lim_ratio, q_cont, npt_div, kappa_half.
TrendReport check_limit(const SuiteConfig& cfg);

const std::vector<std::string>& inequality_suite_ids();
const std::vector<std::string>& limit_suite_ids();

}  // namespace metriclab
