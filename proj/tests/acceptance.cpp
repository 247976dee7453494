// Acceptance gate: thirteen numbered checks, one per invocation, each
// printing a single pass/FAIL line. Every tolerance and runtime budget is
// pinned here; a check that cannot meet its stated clause fails visibly
// rather than being weakened.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "metriclab/closed_forms.hpp"
#include "metriclab/kobayashi.hpp"
#include "metriclab/qh_engine.hpp"
#include "metriclab/rng.hpp"
#include "metriclab/suites.hpp"

using namespace metriclab;

namespace {

struct Outcome {
  bool pass = false;
  std::string details;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

Domain unit_disc() { return Domain::disc(0.0, 0.0, 1.0); }

Domain unit_square() {
  return Domain::polygon({Point::planar(0, 0), Point::planar(1, 0), Point::planar(1, 1),
                          Point::planar(0, 1)});
}

// 1. Minimax solve for the sharp coefficient.
Outcome criterion_1() {
  const C0Solution sol = c0_solve();
  const double c0_err = std::abs(sol.c0 - (1.0 + std::sqrt(2.0) / 2.0));
  const double arg_err = std::abs(sol.argmin_c2 - std::sqrt(2.0) / 2.0);
  return {c0_err < 1e-10 && arg_err < 1e-8,
          "c0 err " + fmt(c0_err) + ", argmin err " + fmt(arg_err)};
}

// 2. Rational-expression identities on a 100 x 100 parameter grid.
Outcome criterion_2() {
  const double lo = std::sqrt(2.0) / 2.0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double gamma = 10.0 * (i + 0.5) / 100.0;
    const double delta = 10.0 * ((i * 37 % 100) + 0.5) / 100.0;
    for (int j = 0; j < 100; ++j) {
      const double c2 = lo + (5.0 - lo) * j / 99.0;
      worst = std::max(worst, std::abs(g_identity_residual(gamma, c2)));
      worst = std::max(worst, std::abs(g_difference_residual(gamma, delta, c2)));
    }
  }
  return {worst < 1e-10, "worst residual " + fmt(worst) + " on 10^4 grid points"};
}

// 3. Triangle inequality of the Lipschitz-field metric, randomized.
Outcome criterion_3() {
  SuiteConfig cfg;
  cfg.suite_id = "rho_triangle";
  cfg.pairs = 10000;
  cfg.seed = 1;
  const SuiteReport rep = check_inequality(cfg);
  return {rep.violations == 0 && rep.min_margin >= -1e-12,
          std::to_string(rep.records.size()) + " checks over 10 fields, min margin " +
              fmt(rep.min_margin)};
}

// 4. Scalar comparison chain plus the multiplicative triangle inequality.
Outcome criterion_4() {
  SuiteConfig chain;
  chain.suite_id = "chain";
  chain.pairs = 100000;
  chain.seed = 1;
  const SuiteReport chain_rep = check_inequality(chain);

  SuiteConfig vx;
  vx.suite_id = "v_axioms";
  vx.pairs = 100000;
  vx.seed = 1;
  vx.c = 2.0;
  const SuiteReport vx_rep = check_inequality(vx);

  return {chain_rep.violations == 0 && vx_rep.violations == 0,
          "chain min margin " + fmt(chain_rep.min_margin) + ", triangle min margin " +
              fmt(vx_rep.min_margin)};
}

// 5. Universal lower bound under the certified upper bound, disc and square.
Outcome criterion_5() {
  SuiteConfig cfg;
  cfg.suite_id = "ghm";
  cfg.pairs = 500;
  cfg.seed = 1;
  cfg.resolution = 0.02;

  cfg.domain = unit_disc();
  const SuiteReport disc_rep = check_inequality(cfg);
  cfg.domain = unit_square();
  const SuiteReport square_rep = check_inequality(cfg);

  return {disc_rep.violations == 0 && square_rep.violations == 0,
          "disc min margin " + fmt(disc_rep.min_margin) + ", square min margin " +
              fmt(square_rep.min_margin)};
}

// 6. Half-space closed form recovered by the solver, plus a convergence sweep.
Outcome criterion_6() {
  const Domain hp = Domain::half_plane(1, 0, 0);
  CounterRng rng(61, 0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double dz = rng.uniform(0.5, 2.0);
    const double dw = rng.uniform(0.5, 2.0);
    const double lateral = rng.uniform(0.2, 1.0);
    const Point z = Point::planar(dz, 0.0);
    const Point w = Point::planar(dw, lateral);
    const QHResult q = h_num(hp, z, w, 0.01);
    worst = std::max(worst, std::abs(q.upper - s_dist(dz, dw, dist(z, w))));
  }

  const std::vector<ConvergenceRow> rows =
      convergence_study(hp, Point::planar(1, 0), Point::planar(1, 1), {0.1, 0.05, 0.025});
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    monotone = monotone && rows[i].upper <= rows[i - 1].upper + 1e-12;

  return {worst <= 5e-3 && monotone,
          "worst |upper - closed form| " + fmt(worst) + " over 100 pairs, sweep " +
              (monotone ? "monotone" : "NOT monotone")};
}

// 7. One-dimensional engine against an independent adaptive quadrature.
Outcome criterion_7() {
  const Domain iv = Domain::interval(0, 1);
  const auto clearance = [](double x) { return std::min(x, 1.0 - x); };
  const std::function<double(double, double, double, double, double, int)> simpson =
      [&](double a, double b, double fa, double fb, double fm, int depth) -> double {
    const double m = 0.5 * (a + b);
    const double lm = clearance(0.5 * (a + m)) > 0 ? 1.0 / clearance(0.5 * (a + m)) : 0.0;
    const double rm = clearance(0.5 * (m + b)) > 0 ? 1.0 / clearance(0.5 * (m + b)) : 0.0;
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * lm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * rm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 1e-13)
      return left + right + (left + right - whole) / 15.0;
    return simpson(a, m, fa, fm, lm, depth - 1) + simpson(m, b, fm, fb, rm, depth - 1);
  };
  const auto oracle = [&](double z, double w) {
    if (z > w) std::swap(z, w);
    double acc = 0.0;
    const double kink = 0.5;
    std::vector<std::pair<double, double>> spans;
    if (w <= kink || z >= kink)
      spans.emplace_back(z, w);
    else {
      spans.emplace_back(z, kink);
      spans.emplace_back(kink, w);
    }
    for (const auto& [a, b] : spans) {
      const double fa = 1.0 / clearance(a);
      const double fb = 1.0 / clearance(b);
      const double fm = 1.0 / clearance(0.5 * (a + b));
      acc += simpson(a, b, fa, fb, fm, 40);
    }
    return acc;
  };

  CounterRng rng(71, 0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double z = rng.uniform(0.02, 0.98);
    const double w = rng.uniform(0.02, 0.98);
    if (std::abs(z - w) < 1e-3) continue;
    const QHResult q = h_num(iv, Point::line(z), Point::line(w), 0.02);
    worst = std::max(worst, std::abs(q.upper - oracle(z, w)));
  }
  return {worst <= 1e-9, "worst |engine - quadrature| " + fmt(worst) + " over 100 pairs"};
}

// 8. Both near-boundary comparison suites settle at a usable radius.
Outcome criterion_8() {
  SuiteConfig cfg;
  cfg.suite_id = "main_k";
  cfg.domain = unit_disc();
  cfg.anchor = Point::planar(1.0, 0.0);
  cfg.pairs = 100;
  cfg.seed = 1;
  cfg.resolution = 0.02;
  cfg.radius = 0.2;
  cfg.c = 1.8;
  const SuiteReport k_rep = check_inequality(cfg);

  cfg.suite_id = "main_h";
  const SuiteReport h_rep = check_inequality(cfg);

  const bool k_ok = k_rep.violations == 0 && k_rep.radius_used >= 0.0125 - 1e-12;
  const bool h_ok = h_rep.violations == 0 && h_rep.radius_used >= 0.0125 - 1e-12;
  return {k_ok && h_ok, "kobayashi side radius " + fmt(k_rep.radius_used) + " (" +
                            std::to_string(k_rep.violations) + " violations), " +
                            "quasihyperbolic side radius " + fmt(h_rep.radius_used) + " (" +
                            std::to_string(h_rep.violations) + " violations)"};
}

// 9. Additive gap between twice the Kobayashi distance and the lower bound.
Outcome criterion_9() {
  SuiteConfig cfg;
  cfg.suite_id = "gap";
  cfg.domain = unit_disc();
  cfg.anchor = Point::planar(1.0, 0.0);
  cfg.radius = 0.1;
  cfg.pairs = 500;
  cfg.seed = 1;
  const SuiteReport rep = check_inequality(cfg);
  return {rep.violations == 0,
          std::to_string(rep.violations) + " violations, min margin " + fmt(rep.min_margin)};
}

// 10. Near-boundary ratio of the two metrics stays under one half.
Outcome criterion_10() {
  SuiteConfig cfg;
  cfg.suite_id = "sup_ratio";
  cfg.domain = unit_disc();
  cfg.pairs = 100;
  cfg.seed = 1;
  cfg.radii = {0.2, 0.1, 0.05};
  const TrendReport rep = check_limit(cfg);
  const double last = rep.rows.back().statistic;
  return {rep.monotone_ok && last <= 0.55,
          std::string(rep.monotone_ok ? "decreasing" : "NOT decreasing") +
              " rows, final ratio " + fmt(last)};
}

// 11. The solver/closed-form ratio tends to one at the boundary.
Outcome criterion_11() {
  SuiteConfig cfg;
  cfg.suite_id = "lim_ratio";
  cfg.pairs = 60;
  cfg.seed = 1;
  cfg.radii = {0.2, 0.1, 0.05};

  cfg.domain = Domain::half_plane(1, 0, 0);
  const TrendReport hp_rep = check_limit(cfg);
  double hp_worst = 0.0;
  for (const TrendRow& row : hp_rep.rows) hp_worst = std::max(hp_worst, row.statistic);

  cfg.domain = unit_disc();
  const TrendReport disc_rep = check_limit(cfg);

  return {hp_worst <= 1e-3 && disc_rep.monotone_ok,
          "half-plane worst deviation " + fmt(hp_worst) + ", disc rows " +
              (disc_rep.monotone_ok ? "decreasing" : "NOT decreasing")};
}

// 12. Divergence statistic along the bad-boundary approach: strictly
// increasing, and gaining more than 1 between t = 0.9 and t = 0.999.
Outcome criterion_12() {
  SuiteConfig cfg;
  cfg.suite_id = "npt_div";
  cfg.domain = Domain::mapped_disc("npt_example");
  const TrendReport rep = check_limit(cfg);
  const double growth = rep.rows.back().statistic - rep.rows.front().statistic;
  return {rep.monotone_ok && growth > 1.0,
          std::string(rep.monotone_ok ? "strictly increasing" : "NOT increasing") +
              ", growth " + fmt(growth) + " (needs > 1)"};
}

// 13. Disc cross-checks: real-axis identity, inversion, and ordering of the
// two distances.
Outcome criterion_13() {
  CounterRng rng(131, 0);
  double worst_id = 0.0;
  for (int i = 0; i < 2000; ++i) {
    double a = rng.uniform(-0.99, 0.99);
    double b = rng.uniform(-0.99, 0.99);
    if (b > a) std::swap(a, b);
    worst_id = std::max(worst_id, std::abs(k_disc_real(a, b) - poincare_disc({a, 0}, {b, 0})));
  }

  const UniformizedDomain npt = UniformizedDomain::from_map("npt_example");
  double worst_rt = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = rng.uniform(0, 2 * std::acos(-1.0));
    const double r = 0.95 * std::sqrt(rng.uniform(0, 1));
    const std::complex<double> zeta = std::polar(r, t);
    worst_rt = std::max(worst_rt, std::abs(npt.invert_map(npt.eval_map(zeta)) - zeta));
  }

  const UniformizedDomain disc = UniformizedDomain::from_map("identity");
  const Domain dd = disc.domain();
  double worst_order = -1e300;
  for (int i = 0; i < 100; ++i) {
    const double t1 = rng.uniform(0, 2 * std::acos(-1.0));
    const double t2 = rng.uniform(0, 2 * std::acos(-1.0));
    const Point z = rng.uniform(0.05, 0.9) * Point::planar(std::cos(t1), std::sin(t1));
    const Point w = rng.uniform(0.05, 0.9) * Point::planar(std::cos(t2), std::sin(t2));
    if (dist(z, w) < 1e-3) continue;
    const double k = disc.k_dist(to_complex(z), to_complex(w));
    const QHResult q = h_num(dd, z, w, 0.02);
    worst_order = std::max(worst_order, k - q.upper);
  }

  return {worst_id <= 1e-12 && worst_rt <= 1e-10 && worst_order <= 1e-6,
          "identity gap " + fmt(worst_id) + ", inversion gap " + fmt(worst_rt) +
              ", worst k - upper " + fmt(worst_order)};
}

double budget_seconds(int n) {
  switch (n) {
    case 1: case 2: case 7: return 1.0;
    case 3: case 4: return 5.0;
    case 5: case 9: return 120.0;
    case 6: case 8: case 10: case 11: return 300.0;
    default: return 60.0;
  }
}

Outcome run_criterion(int n) {
  switch (n) {
    case 1: return criterion_1();
    case 2: return criterion_2();
    case 3: return criterion_3();
    case 4: return criterion_4();
    case 5: return criterion_5();
    case 6: return criterion_6();
    case 7: return criterion_7();
    case 8: return criterion_8();
    case 9: return criterion_9();
    case 10: return criterion_10();
    case 11: return criterion_11();
    case 12: return criterion_12();
    default: return criterion_13();
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..13>\n");
    return 2;
  }
  const int n = std::atoi(argv[1]);
  if (n < 1 || n > 13) {
    std::fprintf(stderr, "criterion number must be in 1..13\n");
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = run_criterion(n);
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double budget = budget_seconds(n);
  const bool pass = out.pass && elapsed <= budget;
  std::printf("criterion %d: %s (%s; %.1fs of %.0fs budget)\n", n, pass ? "pass" : "FAIL",
              out.details.c_str(), elapsed, budget);
  return pass ? 0 : 1;
}
