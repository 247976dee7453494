#include "metriclab/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "metriclab/closed_forms.hpp"
#include "metriclab/kobayashi.hpp"
#include "metriclab/maps.hpp"
#include "metriclab/qh_engine.hpp"
#include "metriclab/rng.hpp"

namespace metriclab {

namespace {

constexpr double kClosedFormTol = 1e-12;
constexpr double kMinSeparation = 1e-6;
constexpr double kPi = 3.14159265358979323846;

double g_branch_max(double c2) {
  const double first = c2 * std::sqrt((2.0 * c2 + 1.0) / (2.0 * c2 - 1.0));
  return std::max(first, c2 + 1.0);
}

// ---------------------------------------------------------------------------
// Sampling. Every sampled object draws from its own counter-based stream, so
// reports are reproducible and aggregation over pairs is order-independent.

struct HalfPlaneFrame {
  Point n;       // inner unit normal
  Point t;       // boundary tangent
  double offset; // boundary is {x : n . x = offset}
};

HalfPlaneFrame half_plane_frame(const Domain& d) {
  const auto j = d.to_json();
  HalfPlaneFrame f;
  f.n = Point::planar(j.at("normal")[0].get<double>(), j.at("normal")[1].get<double>());
  f.t = Point::planar(-f.n.y, f.n.x);
  f.offset = j.at("offset").get<double>();
  return f;
}

// Uniform draw from the domain; unbounded kinds are sampled from a fixed
// window (depth 4 along the inner normal, lateral span 4).
Point sample_domain_point(const Domain& d, CounterRng& rng) {
  for (int tries = 0; tries < 1'000'000; ++tries) {
    Point p;
    switch (d.kind()) {
      case Domain::Kind::interval: {
        const double a = d.interval_a();
        const double b = std::isfinite(d.interval_b()) ? d.interval_b() : a + 4.0;
        p = Point::line(rng.uniform(a, b));
        break;
      }
      case Domain::Kind::half_plane: {
        static thread_local const Domain* cached = nullptr;
        static thread_local HalfPlaneFrame frame;
        if (cached != &d) {
          frame = half_plane_frame(d);
          cached = &d;
        }
        const double u = rng.uniform(0.0, 4.0);
        const double v = rng.uniform(-2.0, 2.0);
        p = (frame.offset + u) * frame.n + v * frame.t;
        break;
      }
      default: {
        const auto box = d.bounding_box();
        if (!box) throw SpecError("cannot sample an unbounded domain of kind " + d.kind_name());
        p = Point::planar(rng.uniform(box->xmin, box->xmax), rng.uniform(box->ymin, box->ymax));
        break;
      }
    }
    if (d.contains(p) && d.boundary_distance(p) > 1e-9) return p;
  }
  throw std::runtime_error("insufficient in-domain samples");
}

Point sample_ball_point(const Domain& d, const Point& anchor, double radius, CounterRng& rng) {
  for (int tries = 0; tries < 1'000'000; ++tries) {
    Point p;
    if (d.dimension() == 1) {
      p = Point::line(anchor.x + radius * (2.0 * rng.next_double() - 1.0));
    } else {
      const double rr = radius * std::sqrt(rng.next_double());
      const double th = 2.0 * kPi * rng.next_double();
      p = anchor + rr * Point::planar(std::cos(th), std::sin(th));
    }
    if (d.contains(p) && d.boundary_distance(p) > 1e-12) return p;
  }
  throw std::runtime_error("insufficient in-ball samples");
}

using PointSampler = std::function<Point(CounterRng&)>;

std::pair<Point, Point> sample_pair(const PointSampler& draw, CounterRng& rng) {
  const Point z = draw(rng);
  for (int tries = 0; tries < 1'000'000; ++tries) {
    const Point w = draw(rng);
    if (dist(z, w) >= kMinSeparation) return {z, w};
  }
  throw std::runtime_error("could not separate a sampled pair");
}

// Per-pair grid resolution: never finer than needed for the pair separation,
// never coarser than the configured baseline.
double pair_resolution(double cfg_res, double separation) {
  return std::min(cfg_res, std::max(separation / 6.0, cfg_res / 64.0));
}

// Default boundary anchor for near-boundary suites when none is configured.
Point default_boundary_anchor(const Domain& d) {
  switch (d.kind()) {
    case Domain::Kind::half_plane: {
      const HalfPlaneFrame f = half_plane_frame(d);
      return f.offset * f.n;
    }
    case Domain::Kind::interval:
      return Point::line(d.interval_a());
    default:
      return d.sample_boundary(16).points.at(0);
  }
}

Point default_interior_anchor(const Domain& d, std::uint64_t seed) {
  switch (d.kind()) {
    case Domain::Kind::disc: {
      const auto j = d.to_json();
      return Point::planar(j.at("center")[0].get<double>(), j.at("center")[1].get<double>());
    }
    case Domain::Kind::half_plane: {
      const HalfPlaneFrame f = half_plane_frame(d);
      return (f.offset + 1.0) * f.n;
    }
    case Domain::Kind::interval: {
      const double a = d.interval_a();
      const double b = d.interval_b();
      return Point::line(std::isfinite(b) ? 0.5 * (a + b) : a + 1.0);
    }
    case Domain::Kind::mapped_disc:
      return from_complex(map_by_name(d.map_name()).eval({0.0, 0.0}));
    default: {
      CounterRng rng(seed, 0xA11C);
      return sample_domain_point(d, rng);
    }
  }
}

const Domain& require_domain(const SuiteConfig& cfg, const char* suite) {
  if (!cfg.domain) throw SpecError(std::string("suite ") + suite + " needs a --domain spec");
  return *cfg.domain;
}

UniformizedDomain uniformized_or_reject(const Domain& d, const char* suite) {
  try {
    return UniformizedDomain::from_domain(d);
  } catch (const IncompatibleError& e) {
    throw UnsoundSuiteError(std::string("suite ") + suite +
                            " cannot run soundly on this domain: " + e.what());
  }
}

void validate_config(const SuiteConfig& cfg) {
  if (cfg.pairs < 1) throw SpecError("pair count must be at least 1");
  if (!(cfg.resolution > 0.0)) throw SpecError("resolution must be positive");
  if (!(cfg.radius > 0.0)) throw SpecError("radius must be positive");
}

void finalize_margins(SuiteReport& rep, bool count_violations) {
  rep.max_margin = -std::numeric_limits<double>::infinity();
  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.violations = 0;
  if (rep.records.empty()) {
    rep.max_margin = rep.min_margin = 0.0;
    return;
  }
  for (const SuiteRecord& r : rep.records) {
    rep.max_margin = std::max(rep.max_margin, r.margin);
    rep.min_margin = std::min(rep.min_margin, r.margin);
    if (count_violations && r.margin < -rep.tolerance) ++rep.violations;
  }
}

SuiteReport base_report(const SuiteConfig& cfg) {
  SuiteReport rep;
  rep.suite_id = cfg.suite_id;
  rep.seed = cfg.seed;
  rep.resolution = cfg.resolution;
  return rep;
}

void append_probe_note(SuiteReport& rep, double c) {
  const double c0 = BoundConstants::sharp().c0;
  if (c < c0 - 1e-12) {
    if (!rep.note.empty()) rep.note += " ";
    rep.note += "hypothesis-violating probe: c = " + std::to_string(c) +
                " is below the sharp constant 1 + sqrt(2)/2, so reported violations do not "
                "falsify the bound.";
  }
}

// ---------------------------------------------------------------------------
// Inequality suites.

SuiteReport run_ghm(const SuiteConfig& cfg) {
  const Domain& d = require_domain(cfg, "ghm");
  SuiteReport rep = base_report(cfg);
  PointSampler draw;
  if (cfg.anchor) {
    rep.radius_used = cfg.radius;
    draw = [&](CounterRng& rng) { return sample_ball_point(d, *cfg.anchor, cfg.radius, rng); };
  } else {
    draw = [&](CounterRng& rng) { return sample_domain_point(d, rng); };
  }
  for (int i = 0; i < cfg.pairs; ++i) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    const auto [z, w] = sample_pair(draw, rng);
    const double dz = d.boundary_distance(z);
    const double dw = d.boundary_distance(w);
    const double r = dist(z, w);
    const QHResult q = h_num(d, z, w, pair_resolution(cfg.resolution, r));
    const double lhs = i_dist(dz, dw, r);
    rep.records.push_back({z, w, lhs, q.upper, q.upper - lhs});
  }
  // The admissible-path value dominates the true distance, so a negative
  // margin here certifies a genuine failure of the lower bound; only the
  // quadrature tolerance is allowed as slack.
  rep.tolerance = 1e-9;
  rep.note =
      "rhs is a certified admissible-path upper bound for the quasi-hyperbolic distance; "
      "it can only strengthen the test of lhs <= h.";
  finalize_margins(rep, true);
  return rep;
}

SuiteReport run_chain(const SuiteConfig& cfg) {
  SuiteReport rep = base_report(cfg);
  rep.tolerance = kClosedFormTol;
  for (int i = 0; i < cfg.pairs; ++i) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    double dz, dw, r;
    Point rec_z, rec_w;
    if (cfg.domain) {
      const Domain& d = *cfg.domain;
      auto draw = [&](CounterRng& g) { return sample_domain_point(d, g); };
      const auto [z, w] = sample_pair(draw, rng);
      dz = d.boundary_distance(z);
      dw = d.boundary_distance(w);
      r = dist(z, w);
      rec_z = z;
      rec_w = w;
    } else {
      // Synthetic scalar triple. Realizable configurations always satisfy
      // |dz - dw| <= r (clearance is 1-Lipschitz), which the middle link of
      // the chain needs, so r is drawn with that offset.
      dz = std::exp(rng.uniform(std::log(1e-3), std::log(10.0)));
      dw = std::exp(rng.uniform(std::log(1e-3), std::log(10.0)));
      const double u = std::max(rng.next_double(), 1e-6);
      r = std::abs(dz - dw) + 3.0 * u * std::sqrt(dz * dw);
      rec_z = Point::planar(dz, dw);
      rec_w = Point::planar(r, 0.0);
    }
    const double vh = v_dist(0.5, dz, dw, r);
    const double iv = i_dist(dz, dw, r);
    const double sv = s_dist(dz, dw, r);
    const double v1 = v_dist(1.0, dz, dw, r);
    rep.records.push_back({rec_z, rec_w, vh, iv, iv - vh});
    rep.records.push_back({rec_z, rec_w, iv, sv, sv - iv});
    rep.records.push_back({rec_z, rec_w, sv, v1, v1 - sv});
  }
  if (!cfg.domain)
    rep.note =
        "synthetic scalar triples: record z carries (d(z), d(w)) and record w carries "
        "(|z - w|, 0).";
  finalize_margins(rep, true);
  return rep;
}

// Shared body of the two neighborhood-search suites: the bound is asserted on
// some neighborhood of the boundary anchor, so the radius halves (at most 4
// times) until a violation-free run is found.
SuiteReport run_main(const SuiteConfig& cfg, bool use_h) {
  const char* name = use_h ? "main_h" : "main_k";
  const Domain& d = require_domain(cfg, name);
  std::optional<UniformizedDomain> uni;
  if (!use_h) uni.emplace(uniformized_or_reject(d, name));

  const Point anchor = cfg.anchor ? *cfg.anchor : default_boundary_anchor(d);
  SuiteReport rep;
  double radius = cfg.radius;
  for (int attempt = 0;; ++attempt) {
    rep = base_report(cfg);
    rep.radius_used = radius;
    double max_bracket = 0.0;
    for (int i = 0; i < cfg.pairs; ++i) {
      CounterRng rng(cfg.seed, (static_cast<std::uint64_t>(attempt) << 32) |
                                   static_cast<std::uint64_t>(i));
      auto draw = [&](CounterRng& g) { return sample_ball_point(d, anchor, radius, g); };
      const auto [z, w] = sample_pair(draw, rng);
      const double dz = d.boundary_distance(z);
      const double dw = d.boundary_distance(w);
      const double r = dist(z, w);
      const double rhs = v_dist(cfg.c, dz, dw, r);
      double lhs;
      if (use_h) {
        const QHResult q = h_num(d, z, w, pair_resolution(cfg.resolution, r));
        lhs = q.upper;
        max_bracket = std::max(max_bracket, q.bracket_width);
      } else {
        lhs = 2.0 * uni->k_dist(to_complex(z), to_complex(w));
      }
      rep.records.push_back({z, w, lhs, rhs, rhs - lhs});
    }
    if (use_h) {
      rep.tolerance = kClosedFormTol + 2.0 * max_bracket;
      rep.note =
          "lhs is the certified h upper bound, which can only overstate the left side of "
          "<=; slack of twice the widest bracket absorbs spurious violations.";
    } else {
      rep.tolerance = kClosedFormTol;
    }
    finalize_margins(rep, true);
    if (rep.violations == 0 || attempt == 4) break;
    radius *= 0.5;
  }
  append_probe_note(rep, cfg.c);
  return rep;
}

// Empirical-constant suites: the bound asserts existence of a finite additive
// constant, so the suite reports sup(lhs - rhs) instead of pass/fail.
SuiteReport run_empirical(const SuiteConfig& cfg, bool npt_form) {
  const char* name = npt_form ? "npt" : "fr";
  const Domain& d = require_domain(cfg, name);
  const UniformizedDomain uni = uniformized_or_reject(d, name);
  const Point anchor = cfg.anchor ? *cfg.anchor : default_boundary_anchor(d);

  SuiteReport rep = base_report(cfg);
  rep.radius_used = cfg.radius;
  rep.tolerance = 0.0;
  double sup = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.pairs; ++i) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    auto draw = [&](CounterRng& g) { return sample_ball_point(d, anchor, cfg.radius, g); };
    const auto [z, w] = sample_pair(draw, rng);
    const double dz = d.boundary_distance(z);
    const double dw = d.boundary_distance(w);
    const double r = dist(z, w);
    const double lhs = 2.0 * uni.k_dist(to_complex(z), to_complex(w));
    const double rhs = npt_form ? -std::log(dz) - std::log(dw)
                                : std::log1p(r / dz) + std::log1p(r / dw);
    sup = std::max(sup, lhs - rhs);
    rep.records.push_back({z, w, lhs, rhs, rhs - lhs});
  }
  rep.estimated_constant = sup;
  rep.has_estimated_constant = true;
  rep.note =
      "empirical-constant suite: the bound asserts a finite additive constant, so records are "
      "informational and the supremum of lhs - rhs is reported instead of violations.";
  finalize_margins(rep, false);
  return rep;
}

SuiteReport run_gap(const SuiteConfig& cfg) {
  const Domain& d = require_domain(cfg, "gap");
  const UniformizedDomain uni = uniformized_or_reject(d, "gap");
  const Point anchor = cfg.anchor ? *cfg.anchor : default_boundary_anchor(d);

  SuiteReport rep = base_report(cfg);
  rep.radius_used = cfg.radius;
  rep.tolerance = 0.05;
  const double gap = BoundConstants::sharp().gap;
  for (int i = 0; i < cfg.pairs; ++i) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    auto draw = [&](CounterRng& g) { return sample_ball_point(d, anchor, cfg.radius, g); };
    const auto [z, w] = sample_pair(draw, rng);
    const double dz = d.boundary_distance(z);
    const double dw = d.boundary_distance(w);
    const double r = dist(z, w);
    const double lhs =
        2.0 * uni.k_dist(to_complex(z), to_complex(w)) - i_dist(dz, dw, r);
    rep.records.push_back({z, w, lhs, gap, gap - lhs});
  }
  rep.note =
      "h is replaced by its closed-form lower bound on the subtracted side, so lhs dominates "
      "2k - h and passing is conservative.";
  finalize_margins(rep, true);
  return rep;
}

LipschitzField random_cone_field(CounterRng& rng) {
  std::vector<Point> anchors;
  std::vector<double> offsets;
  for (int i = 0; i < 3; ++i) {
    anchors.push_back(Point::planar(rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)));
    offsets.push_back(rng.uniform(0.05, 2.0));
  }
  return LipschitzField::min_cones(std::move(anchors), std::move(offsets));
}

std::array<Point, 3> sample_triple(const PointSampler& draw, CounterRng& rng) {
  std::array<Point, 3> t;
  t[0] = draw(rng);
  for (int k = 1; k < 3; ++k) {
    for (int tries = 0;; ++tries) {
      t[k] = draw(rng);
      bool ok = true;
      for (int j = 0; j < k; ++j) ok = ok && dist(t[j], t[k]) >= kMinSeparation;
      if (ok) break;
      if (tries > 1'000'000) throw std::runtime_error("could not separate a sampled triple");
    }
  }
  return t;
}

SuiteReport run_v_axioms(const SuiteConfig& cfg) {
  SuiteReport rep = base_report(cfg);
  rep.tolerance = kClosedFormTol;
  for (int i = 0; i < cfg.pairs; ++i) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    std::array<Point, 3> t;
    std::function<double(const Point&)> f;
    if (cfg.domain) {
      const Domain& d = *cfg.domain;
      auto draw = [&](CounterRng& g) { return sample_domain_point(d, g); };
      t = sample_triple(draw, rng);
      f = [&d](const Point& p) { return d.boundary_distance(p); };
    } else {
      const LipschitzField field = random_cone_field(rng);
      auto draw = [](CounterRng& g) {
        return Point::planar(g.uniform(-3.0, 3.0), g.uniform(-3.0, 3.0));
      };
      t = sample_triple(draw, rng);
      f = field.f;
    }
    const double fa = f(t[0]), fb = f(t[1]), fc = f(t[2]);
    const double vab = v_dist(cfg.c, fa, fb, dist(t[0], t[1]));
    const double vbc = v_dist(cfg.c, fb, fc, dist(t[1], t[2]));
    const double vac = v_dist(cfg.c, fa, fc, dist(t[0], t[2]));
    rep.records.push_back({t[0], t[2], vac, vab + vbc, vab + vbc - vac});
    rep.records.push_back({t[0], t[1], vab, vac + vbc, vac + vbc - vab});
    rep.records.push_back({t[1], t[2], vbc, vab + vac, vab + vac - vbc});
  }
  finalize_margins(rep, true);
  if (cfg.c < 2.0 - 1e-12) {
    rep.note =
        "hypothesis-violating probe: the triangle inequality is asserted for c >= 2 only, so "
        "reported violations at c = " +
        std::to_string(cfg.c) + " do not falsify it.";
  }
  return rep;
}

SuiteReport run_rho_triangle(const SuiteConfig& cfg) {
  SuiteReport rep = base_report(cfg);
  rep.tolerance = kClosedFormTol;
  const int fields = cfg.domain ? 1 : 10;
  for (int fi = 0; fi < fields; ++fi) {
    LipschitzField field{{}, 1.0};
    if (cfg.domain) {
      field = LipschitzField::boundary_distance_of(*cfg.domain);
    } else {
      CounterRng frng(cfg.seed, (1ULL << 40) + static_cast<std::uint64_t>(fi));
      field = random_cone_field(frng);
    }
    for (int i = 0; i < cfg.pairs; ++i) {
      CounterRng rng(cfg.seed, (static_cast<std::uint64_t>(fi) << 32) |
                                   static_cast<std::uint64_t>(i));
      std::array<Point, 3> t;
      if (cfg.domain) {
        const Domain& d = *cfg.domain;
        auto draw = [&](CounterRng& g) { return sample_domain_point(d, g); };
        t = sample_triple(draw, rng);
      } else {
        auto draw = [](CounterRng& g) {
          return Point::planar(g.uniform(-3.0, 3.0), g.uniform(-3.0, 3.0));
        };
        t = sample_triple(draw, rng);
      }
      const double rab = rho_lipschitz(field, t[0], t[1]);
      const double rbc = rho_lipschitz(field, t[1], t[2]);
      const double rac = rho_lipschitz(field, t[0], t[2]);
      rep.records.push_back({t[0], t[2], rac, rab + rbc, rab + rbc - rac});
      rep.records.push_back({t[0], t[1], rab, rac + rbc, rac + rbc - rab});
      rep.records.push_back({t[1], t[2], rbc, rab + rac, rab + rac - rbc});
    }
  }
  finalize_margins(rep, true);
  return rep;
}

SuiteReport run_k_le_h(const SuiteConfig& cfg) {
  const Domain& d = require_domain(cfg, "k_le_h");
  const UniformizedDomain uni = uniformized_or_reject(d, "k_le_h");
  SuiteReport rep = base_report(cfg);
  PointSampler draw;
  if (cfg.anchor) {
    rep.radius_used = cfg.radius;
    draw = [&](CounterRng& rng) { return sample_ball_point(d, *cfg.anchor, cfg.radius, rng); };
  } else {
    draw = [&](CounterRng& rng) { return sample_domain_point(d, rng); };
  }
  for (int i = 0; i < cfg.pairs; ++i) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    const auto [z, w] = sample_pair(draw, rng);
    const double r = dist(z, w);
    const double lhs = uni.k_dist(to_complex(z), to_complex(w));
    const QHResult q = h_num(d, z, w, pair_resolution(cfg.resolution, r));
    rep.records.push_back({z, w, lhs, q.upper, q.upper - lhs});
  }
  rep.tolerance = 1e-6;
  rep.note =
      "rhs is the certified h upper bound, so a reported violation implies k > h and is "
      "genuine; near-equality cases inside the bracket may go unflagged.";
  finalize_margins(rep, true);
  return rep;
}

// ---------------------------------------------------------------------------
// Limit suites.

std::vector<double> radius_schedule(const SuiteConfig& cfg) {
  std::vector<double> radii = cfg.radii;
  if (radii.empty()) radii = {0.2, 0.1, 0.05};
  for (double r : radii)
    if (!(r > 0.0)) throw SpecError("limit-suite radii must be positive");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]))
      throw SpecError("limit-suite radii must strictly decrease");
  return radii;
}

TrendReport base_trend(const SuiteConfig& cfg) {
  TrendReport rep;
  rep.suite_id = cfg.suite_id;
  rep.seed = cfg.seed;
  rep.resolution = cfg.resolution;
  return rep;
}

struct RowStat {
  double statistic = 0.0;
  double extra_slack = 0.0;
};

// Shared frame of the radius-schedule suites: samples per row, then a suffix
// maximum across rows. Every sample of a smaller ball also lies in the larger
// ones, so the suffix maximum is an honest per-row statistic and is monotone
// by construction.
template <class PerRow, class SlackFn>
TrendReport run_radius_trend(const SuiteConfig& cfg, double limit, const PerRow& per_row,
                             const SlackFn& slack_fn) {
  const std::vector<double> radii = radius_schedule(cfg);
  std::vector<RowStat> raw(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) raw[k] = per_row(radii[k], k);
  for (std::size_t k = radii.size() - 1; k-- > 0;) {
    raw[k].statistic = std::max(raw[k].statistic, raw[k + 1].statistic);
    raw[k].extra_slack = std::max(raw[k].extra_slack, raw[k + 1].extra_slack);
  }
  TrendReport rep = base_trend(cfg);
  rep.monotone_ok = true;
  rep.pass = true;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    TrendRow row;
    row.parameter = radii[k];
    row.statistic = raw[k].statistic;
    row.slack = slack_fn(radii[k]) + raw[k].extra_slack;
    row.pass = row.statistic <= limit + row.slack;
    rep.pass = rep.pass && row.pass;
    if (k > 0 && row.statistic > rep.rows.back().statistic) rep.monotone_ok = false;
    rep.rows.push_back(row);
  }
  rep.pass = rep.pass && rep.monotone_ok;
  return rep;
}

TrendReport run_sup_ratio(const SuiteConfig& cfg) {
  const Domain& d = require_domain(cfg, "sup_ratio");
  const UniformizedDomain uni = uniformized_or_reject(d, "sup_ratio");
  const Point anchor = cfg.anchor ? *cfg.anchor : default_boundary_anchor(d);
  auto per_row = [&](double radius, std::size_t row) {
    RowStat s;
    for (int i = 0; i < cfg.pairs; ++i) {
      CounterRng rng(cfg.seed, (static_cast<std::uint64_t>(row) << 32) |
                                   static_cast<std::uint64_t>(i));
      auto draw = [&](CounterRng& g) { return sample_ball_point(d, anchor, radius, g); };
      const auto [z, w] = sample_pair(draw, rng);
      const double k = uni.k_dist(to_complex(z), to_complex(w));
      const QHResult q = h_num(d, z, w, pair_resolution(cfg.resolution, dist(z, w)));
      s.statistic = std::max(s.statistic, k / q.upper);
    }
    return s;
  };
  TrendReport rep = run_radius_trend(cfg, 0.5, per_row,
                                     [](double r) { return 0.05 + 0.3 * r; });
  rep.note =
      "ratio uses the certified h upper bound in the denominator, a lower estimate of k/h; "
      "bracket widths shrink with the radius, keeping the trend informative.";
  return rep;
}

TrendReport run_lim_ratio(const SuiteConfig& cfg) {
  const Domain& d = require_domain(cfg, "lim_ratio");
  const Point anchor = cfg.anchor ? *cfg.anchor : default_boundary_anchor(d);
  auto per_row = [&](double radius, std::size_t row) {
    RowStat s;
    for (int i = 0; i < cfg.pairs; ++i) {
      CounterRng rng(cfg.seed, (static_cast<std::uint64_t>(row) << 32) |
                                   static_cast<std::uint64_t>(i));
      auto draw = [&](CounterRng& g) { return sample_ball_point(d, anchor, radius, g); };
      const auto [z, w] = sample_pair(draw, rng);
      const double dz = d.boundary_distance(z);
      const double dw = d.boundary_distance(w);
      const double r = dist(z, w);
      const double sv = s_dist(dz, dw, r);
      const QHResult q = h_num(d, z, w, pair_resolution(cfg.resolution, r));
      s.statistic = std::max(s.statistic, std::abs(q.upper / sv - 1.0));
      s.extra_slack = std::max(s.extra_slack, 2.0 * q.bracket_width / sv);
    }
    return s;
  };
  TrendReport rep = run_radius_trend(cfg, 0.0, per_row,
                                     [](double r) { return std::max(0.75 * r, 3e-3); });
  rep.note =
      "deviation is measured with the certified h upper bound and may misstate h/s by at most "
      "the bracket width, which the per-row slack absorbs.";
  return rep;
}

TrendReport run_q_cont(const SuiteConfig& cfg) {
  const Domain& d = require_domain(cfg, "q_cont");
  const Point anchor = cfg.anchor ? *cfg.anchor : default_interior_anchor(d, cfg.seed);
  if (!d.contains(anchor)) throw SpecError("q_cont needs an interior anchor");
  const double d0 = d.boundary_distance(anchor);
  auto per_row = [&](double radius, std::size_t row) {
    RowStat s;
    for (int i = 0; i < cfg.pairs; ++i) {
      CounterRng rng(cfg.seed, (static_cast<std::uint64_t>(row) << 32) |
                                   static_cast<std::uint64_t>(i));
      auto draw = [&](CounterRng& g) { return sample_ball_point(d, anchor, radius, g); };
      const auto [z, w] = sample_pair(draw, rng);
      const double dz = d.boundary_distance(z);
      const double dw = d.boundary_distance(w);
      const double r = dist(z, w);
      const double sv = s_dist(dz, dw, r);
      const QHResult qh = h_num(d, z, w, pair_resolution(cfg.resolution, r));
      const double q = q_ratio(qh.upper, sv, false);
      s.statistic = std::max(s.statistic, std::abs(q - 1.0));
      s.extra_slack = std::max(s.extra_slack, 2.0 * qh.bracket_width / sv);
    }
    return s;
  };
  TrendReport rep = run_radius_trend(
      cfg, 0.0, per_row, [&](double r) { return std::max(4.0 * r / d0, 3e-3); });
  rep.note = "continuity at the diagonal: the ratio must approach 1 as the pair collapses "
             "onto the interior anchor.";
  return rep;
}

TrendReport run_npt_div(const SuiteConfig& cfg) {
  if (cfg.domain) {
    const Domain& d = *cfg.domain;
    if (d.kind() != Domain::Kind::mapped_disc || d.map_name() != "npt_example")
      throw UnsoundSuiteError("suite npt_div is defined on the npt_example mapped disc only");
  }
  std::vector<double> ts = cfg.radii;
  if (ts.empty()) ts = {0.9, 0.99, 0.999};
  for (double t : ts)
    if (!(t >= 0.0 && t < 1.0)) throw SpecError("npt_div parameters must lie in [0, 1)");
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1]))
      throw SpecError("npt_div parameters must strictly increase");

  TrendReport rep = base_trend(cfg);
  rep.monotone_ok = true;
  for (double t : ts) {
    TrendRow row;
    row.parameter = t;
    row.statistic = npt_divergence(t);
    row.slack = 0.0;
    row.pass = true;
    if (!rep.rows.empty() && row.statistic <= rep.rows.back().statistic)
      rep.monotone_ok = false;
    rep.rows.push_back(row);
  }
  rep.pass = rep.monotone_ok;
  rep.note =
      "rows must strictly increase; the full limit is not decided here, only the divergence "
      "trend along the sampled parameters.";
  return rep;
}

TrendReport run_kappa_half(const SuiteConfig& cfg) {
  const Domain& d = require_domain(cfg, "kappa_half");
  const UniformizedDomain uni = uniformized_or_reject(d, "kappa_half");
  const Point anchor = cfg.anchor ? *cfg.anchor : default_boundary_anchor(d);
  const std::complex<double> unit{1.0, 0.0};
  auto per_row = [&](double radius, std::size_t row) {
    RowStat s;
    for (int i = 0; i < cfg.pairs; ++i) {
      CounterRng rng(cfg.seed, (static_cast<std::uint64_t>(row) << 32) |
                                   static_cast<std::uint64_t>(i));
      auto draw = [&](CounterRng& g) { return sample_ball_point(d, anchor, radius, g); };
      const Point z = draw(rng);
      const double kd = uni.kappa_metric(to_complex(z), unit) * d.boundary_distance(z);
      s.statistic = std::max(s.statistic, kd);
    }
    return s;
  };
  TrendReport rep = run_radius_trend(cfg, 0.5, per_row,
                                     [](double r) { return 0.5 * r + 1e-9; });
  rep.note = "statistic is the metric-clearance product, whose limsup toward the boundary "
             "is 1/2.";
  return rep;
}

}  // namespace

double g_value(const GArgs& a) {
  const double den = 2.0 * a.c2 - 1.0 + a.gamma + a.delta;
  if (!(den > 0.0)) throw std::invalid_argument("g denominator must be positive");
  return (a.c2 + a.gamma) * (a.c2 + a.delta) * (2.0 * a.c2 + 1.0 + a.gamma + a.delta) / den;
}

double g_identity_residual(double gamma, double c2) {
  const double square = gamma + c2 + 1.0;
  return g_value({gamma, gamma + 1.0, c2}) - square * square;
}

double g_difference_residual(double gamma, double delta, double c2) {
  const double lhs = g_value({gamma, gamma + 1.0, c2}) - g_value({gamma, delta, c2});
  const double den = 2.0 * c2 - 1.0 + gamma + delta;
  const double rhs = (gamma + 1.0 - delta) / den *
                     (2.0 * c2 * c2 - 1.0 + 3.0 * c2 * gamma + c2 * delta + gamma * gamma +
                      gamma * delta);
  return lhs - rhs;
}

C0Solution c0_solve() {
  // Golden-section on the max of the two branch functions; the envelope is
  // unimodal with a kink where the branches cross, which is the minimum.
  constexpr double invphi = 0.6180339887498949;
  constexpr double invphi2 = 0.3819660112501051;
  double a = 0.500001, b = 10.0;
  double h = b - a;
  double c = a + invphi2 * h, d = a + invphi * h;
  double fc = g_branch_max(c), fd = g_branch_max(d);
  for (int k = 0; k < 140; ++k) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      h *= invphi;
      c = a + invphi2 * h;
      fc = g_branch_max(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      h *= invphi;
      d = a + invphi * h;
      fd = g_branch_max(d);
    }
  }
  C0Solution out;
  out.argmin_c2 = 0.5 * (a + b);
  out.c0 = g_branch_max(out.argmin_c2);
  return out;
}

SuiteReport check_inequality(const SuiteConfig& cfg) {
  validate_config(cfg);
  const std::string& id = cfg.suite_id;
  if (id == "ghm") return run_ghm(cfg);
  if (id == "chain") return run_chain(cfg);
  if (id == "main_k") return run_main(cfg, false);
  if (id == "main_h") return run_main(cfg, true);
  if (id == "fr") return run_empirical(cfg, false);
  if (id == "npt") return run_empirical(cfg, true);
  if (id == "gap") return run_gap(cfg);
  if (id == "v_axioms") return run_v_axioms(cfg);
  if (id == "rho_triangle") return run_rho_triangle(cfg);
  if (id == "k_le_h") return run_k_le_h(cfg);
  throw SpecError("unknown inequality suite: " + id);
}

TrendReport check_limit(const SuiteConfig& cfg) {
  validate_config(cfg);
  const std::string& id = cfg.suite_id;
  if (id == "sup_ratio") return run_sup_ratio(cfg);
  if (id == "lim_ratio") return run_lim_ratio(cfg);
  if (id == "q_cont") return run_q_cont(cfg);
  if (id == "npt_div") return run_npt_div(cfg);
  if (id == "kappa_half") return run_kappa_half(cfg);
  throw SpecError("unknown limit suite: " + id);
}

namespace {

nlohmann::ordered_json point_json(const Point& p) {
  auto arr = nlohmann::ordered_json::array();
  arr.push_back(p.x);
  if (p.dim == 2) arr.push_back(p.y);
  return arr;
}

}  // namespace

nlohmann::ordered_json SuiteReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite_id;
  auto recs = nlohmann::ordered_json::array();
  for (const SuiteRecord& r : records) {
    nlohmann::ordered_json rec;
    rec["z"] = point_json(r.z);
    rec["w"] = point_json(r.w);
    rec["lhs"] = r.lhs;
    rec["rhs"] = r.rhs;
    rec["margin"] = r.margin;
    recs.push_back(std::move(rec));
  }
  j["records"] = std::move(recs);
  j["violations"] = violations;
  j["max_margin"] = max_margin;
  j["min_margin"] = min_margin;
  j["tolerance"] = tolerance;
  j["seed"] = seed;
  j["resolution"] = resolution;
  if (radius_used > 0.0) j["radius"] = radius_used;
  if (has_estimated_constant) j["estimated_constant"] = estimated_constant;
  if (!note.empty()) j["note"] = note;
  return j;
}

nlohmann::ordered_json TrendReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite_id;
  auto arr = nlohmann::ordered_json::array();
  for (const TrendRow& r : rows) {
    nlohmann::ordered_json row;
    row["parameter"] = r.parameter;
    row["statistic"] = r.statistic;
    row["slack"] = r.slack;
    row["pass"] = r.pass;
    arr.push_back(std::move(row));
  }
  j["rows"] = std::move(arr);
  j["monotone"] = monotone_ok;
  j["pass"] = pass;
  j["seed"] = seed;
  j["resolution"] = resolution;
  if (!note.empty()) j["note"] = note;
  return j;
}

const std::vector<std::string>& inequality_suite_ids() {
  static const std::vector<std::string> ids = {"ghm",  "chain",    "main_k",       "main_h",
                                               "fr",   "npt",      "gap",          "v_axioms",
                                               "rho_triangle", "k_le_h"};
  return ids;
}

const std::vector<std::string>& limit_suite_ids() {
  static const std::vector<std::string> ids = {"sup_ratio", "lim_ratio", "q_cont", "npt_div",
                                               "kappa_half"};
  return ids;
}

}  // namespace metriclab
