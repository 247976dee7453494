#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "metriclab/geometry.hpp"

namespace metriclab {

// Constants behind the comparison bounds: the sharp coefficient
// c0 = 1 + sqrt(2)/2 and the additive gap 2 log(2 + sqrt(2)).
struct BoundConstants {
  double c0;
  double gap;
  static BoundConstants sharp();
};

// A positive scalar field with a declared Lipschitz constant (at most 1 for
// the comparison results). Carries the function itself so callers can both
// evaluate it and spot-check the declared constant on sampled pairs.
struct LipschitzField {
  std::function<double(const Point&)> f;
  double declared_lipschitz = 1.0;

  double operator()(const Point& p) const { return f(p); }

  // f(x) = min_i (b_i + |x - a_i|): exactly 1-Lipschitz and positive when
  // every b_i > 0. The workhorse for randomized triangle-inequality tests.
  static LipschitzField min_cones(std::vector<Point> anchors, std::vector<double> offsets);

  // f = distance to the boundary of d (1-Lipschitz by definition).
  static LipschitzField boundary_distance_of(Domain d);

  // Largest value of |f(x) - f(y)| - L |x - y| over the given pairs;
  // anything above ~1e-12 means the declared constant is wrong.
  double max_violation(const std::vector<std::pair<Point, Point>>& pairs) const;
};

// All evaluators below take the precomputed scalars dz = d_D(z), dw = d_D(w),
// r = |z - w|, which decouples them from any particular domain.

// 2 asinh(r / (2 sqrt(dz dw))). Equals the quasi-hyperbolic distance on a
// half-space. std::asinh is used; it is the numerically stable log1p form.
double s_dist(double dz, double dw, double r);

// 2 log((dz + dw + r) / (2 sqrt(dz dw))): the universal lower bound for the
// quasi-hyperbolic distance, and the exact value on 1-D domains.
double i_dist(double dz, double dw, double r);

// 2 log(1 + c r / sqrt(dz dw)).
double v_dist(double c, double dz, double dw, double r);

// h/s extended by 1 for coincident points.
double q_ratio(double h, double s, bool coincident);

// log((f(z) + f(w) + |z - w|) / (2 sqrt(f(z) f(w)))): a metric whenever f is
// positive and 1-Lipschitz. Equals i_dist / 2 when f is a boundary distance.
double rho_lipschitz(const LipschitzField& f, const Point& z, const Point& w);

// Poincare distance of the unit disc, atanh |(a - b) / (1 - conj(b) a)|.
double poincare_disc(std::complex<double> a, std::complex<double> b);

// Real-axis form (1/2) log(1 + 2 (a - b) / ((1 - a)(1 + b))) for
// -1 < b <= a < 1; agrees with poincare_disc to 1e-12.
double k_disc_real(double a, double b);

// Alias of s_dist: the half-space quasi-hyperbolic distance in closed form.
double h_exact_halfspace(double dz, double dw, double r);

// Exact quasi-hyperbolic distance on an interval domain: i_dist of the
// endpoint clearances, reflecting the 1-D identity h = i.
double h_exact_interval(const Domain& interval_domain, double z, double w);

}  // namespace metriclab
