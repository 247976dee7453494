#include "metriclab/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace metriclab {

namespace {

void require_positive_clearances(double dz, double dw) {
  if (!(dz > 0.0) || !(dw > 0.0))
    throw std::invalid_argument("boundary clearances must be positive");
}

void require_separation(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("separation must be nonnegative");
}

}  // namespace

BoundConstants BoundConstants::sharp() {
  const double root2 = std::sqrt(2.0);
  return {1.0 + root2 / 2.0, 2.0 * std::log(2.0 + root2)};
}

LipschitzField LipschitzField::min_cones(std::vector<Point> anchors, std::vector<double> offsets) {
  if (anchors.empty() || anchors.size() != offsets.size())
    throw std::invalid_argument("min_cones needs matching nonempty anchor/offset lists");
  for (double b : offsets)
    if (!(b > 0.0)) throw std::invalid_argument("min_cones offsets must be positive");
  LipschitzField field;
  field.declared_lipschitz = 1.0;
  field.f = [anchors = std::move(anchors), offsets = std::move(offsets)](const Point& p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < anchors.size(); ++i)
      best = std::min(best, offsets[i] + dist(p, anchors[i]));
    return best;
  };
  return field;
}

LipschitzField LipschitzField::boundary_distance_of(Domain d) {
  LipschitzField field;
  field.declared_lipschitz = 1.0;
  field.f = [d = std::move(d)](const Point& p) { return d.boundary_distance(p); };
  return field;
}

double LipschitzField::max_violation(const std::vector<std::pair<Point, Point>>& pairs) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : pairs)
    worst = std::max(worst, std::abs(f(a) - f(b)) - declared_lipschitz * dist(a, b));
  return worst;
}

double s_dist(double dz, double dw, double r) {
  require_positive_clearances(dz, dw);
  require_separation(r);
  return 2.0 * std::asinh(r / (2.0 * std::sqrt(dz * dw)));
}

double i_dist(double dz, double dw, double r) {
  require_positive_clearances(dz, dw);
  require_separation(r);
  // (dz + dw + r) / (2 sqrt(dz dw)) = 1 + ((sqrt(dz) - sqrt(dw))^2 + r) / (2 sqrt(dz dw)),
  // and the log1p form keeps nearly-coincident pairs exact.
  const double g = std::sqrt(dz * dw);
  const double excess = (std::sqrt(dz) - std::sqrt(dw)) * (std::sqrt(dz) - std::sqrt(dw)) + r;
  return 2.0 * std::log1p(excess / (2.0 * g));
}

double v_dist(double c, double dz, double dw, double r) {
  if (!(c > 0.0)) throw std::invalid_argument("v_dist needs c > 0");
  require_positive_clearances(dz, dw);
  require_separation(r);
  return 2.0 * std::log1p(c * r / std::sqrt(dz * dw));
}

double q_ratio(double h, double s, bool coincident) {
  if (coincident) return 1.0;
  if (!(s > 0.0)) throw std::invalid_argument("q_ratio needs s > 0 for distinct points");
  return h / s;
}

double rho_lipschitz(const LipschitzField& f, const Point& z, const Point& w) {
  const double fz = f(z), fw = f(w);
  if (!(fz > 0.0) || !(fw > 0.0))
    throw std::invalid_argument("rho_lipschitz needs positive field values");
  return 0.5 * i_dist(fz, fw, dist(z, w));
}

double poincare_disc(std::complex<double> a, std::complex<double> b) {
  if (!(std::abs(a) < 1.0) || !(std::abs(b) < 1.0))
    throw std::invalid_argument("poincare_disc needs both points inside the unit disc");
  const double m = std::abs((a - b) / (1.0 - std::conj(b) * a));
  return std::atanh(std::min(m, 1.0));
}

double k_disc_real(double a, double b) {
  if (!(-1.0 < b) || !(b <= a) || !(a < 1.0))
    throw std::invalid_argument("k_disc_real needs -1 < b <= a < 1");
  return 0.5 * std::log1p(2.0 * (a - b) / ((1.0 - a) * (1.0 + b)));
}

double h_exact_halfspace(double dz, double dw, double r) { return s_dist(dz, dw, r); }

double h_exact_interval(const Domain& interval_domain, double z, double w) {
  if (interval_domain.kind() != Domain::Kind::interval)
    throw std::invalid_argument("h_exact_interval needs an interval domain");
  if (!interval_domain.contains(Point::line(z)) || !interval_domain.contains(Point::line(w)))
    throw std::domain_error("h_exact_interval: point outside the interval");
  const double dz = interval_domain.boundary_distance(Point::line(z));
  const double dw = interval_domain.boundary_distance(Point::line(w));
  return i_dist(dz, dw, std::abs(z - w));
}

}  // namespace metriclab
