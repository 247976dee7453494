#include "metriclab/kobayashi.hpp"

#include <cmath>
#include <numbers>

#include "metriclab/closed_forms.hpp"

namespace metriclab {

namespace {

using cplx = std::complex<double>;

void check_derivative_nonvanishing(const ConformalMap& map) {
  for (int ring = 1; ring <= 9; ++ring) {
    const double rad = 0.1 * ring;
    for (int k = 0; k < 64; ++k) {
      const cplx zeta = std::polar(rad, 2.0 * std::numbers::pi * k / 64.0);
      if (!(std::abs(map.deriv(zeta)) > 0.0))
        throw SpecError(std::string("map derivative vanishes inside the disc: ") + map.name());
    }
  }
}

}  // namespace

UniformizedDomain UniformizedDomain::from_map(const std::string& map_id) {
  UniformizedDomain u;
  u.base_ = &map_by_name(map_id);
  u.map_id_ = map_id;
  check_derivative_nonvanishing(*u.base_);
  if (map_id == "identity")
    u.domain_ = Domain::disc(0.0, 0.0, 1.0);
  else if (map_id == "cayley")
    u.domain_ = Domain::half_plane(1.0, 0.0, 0.0);
  else
    u.domain_ = Domain::mapped_disc(map_id);
  return u;
}

UniformizedDomain UniformizedDomain::from_domain(const Domain& d) {
  switch (d.kind()) {
    case Domain::Kind::disc: {
      const auto j = d.to_json();
      UniformizedDomain u = from_map("identity");
      u.scale_ = j["radius"].get<double>();
      u.shift_ = cplx(j["center"][0].get<double>(), j["center"][1].get<double>());
      u.domain_ = d;
      return u;
    }
    case Domain::Kind::half_plane: {
      const auto j = d.to_json();
      const cplx n(j["normal"][0].get<double>(), j["normal"][1].get<double>());
      UniformizedDomain u = from_map("cayley");
      u.scale_ = n;
      u.shift_ = j["offset"].get<double>() * n;
      u.domain_ = d;
      return u;
    }
    case Domain::Kind::mapped_disc:
      return from_map(d.map_name());
    default:
      throw IncompatibleError(
          "Kobayashi distance needs a disc, half-plane, or mapped disc; got " + d.kind_name());
  }
}

cplx UniformizedDomain::eval_map(cplx zeta) const { return scale_ * base_->eval(zeta) + shift_; }

cplx UniformizedDomain::eval_derivative(cplx zeta) const { return scale_ * base_->deriv(zeta); }

cplx UniformizedDomain::invert_map(cplx z) const {
  const cplx target = (z - shift_) / scale_;

  if (map_id_ == "identity") {
    if (!(std::abs(target) < 1.0)) throw std::domain_error("point outside the image domain");
    return target;
  }
  if (map_id_ == "cayley") {
    if (!(target.real() > 0.0)) throw std::domain_error("point outside the image domain");
    return (1.0 - target) / (1.0 + target);
  }

  // Newton with continuation: walk intermediate targets along the straight
  // segment from base(0) toward the requested point, halving the step when an
  // iteration escapes the disc or stalls. At most 64 continuation steps.
  const cplx origin = base_->eval(0.0);
  cplx zeta = 0.0;
  double progress = 0.0;
  double step = 1.0;
  auto newton = [&](cplx seed, cplx goal, cplx* out) {
    cplx c = seed;
    for (int it = 0; it < 50; ++it) {
      const cplx f = base_->eval(c) - goal;
      if (std::abs(f) <= 1e-13) {
        *out = c;
        return true;
      }
      const cplx df = base_->deriv(c);
      if (!(std::abs(df) > 0.0)) return false;
      const cplx next = c - f / df;
      if (!(std::abs(next) < 1.0)) return false;
      c = next;
    }
    return false;
  };
  for (int hops = 0; hops < 64 && progress < 1.0; ++hops) {
    const double next_progress = std::min(1.0, progress + step);
    const cplx goal = origin + next_progress * (target - origin);
    cplx out;
    if (newton(zeta, goal, &out)) {
      zeta = out;
      progress = next_progress;
      step = std::min(1.0, step * 2.0);
    } else {
      step *= 0.5;
      if (step < 1e-6)
        throw std::domain_error("inversion failed: point outside the image or too near the boundary");
    }
  }
  if (progress < 1.0)
    throw std::domain_error("inversion failed: point outside the image or too near the boundary");
  return zeta;
}

double UniformizedDomain::k_dist(cplx z, cplx w) const {
  return poincare_disc(invert_map(z), invert_map(w));
}

double UniformizedDomain::kappa_metric(cplx z, cplx X) const {
  const cplx zeta = invert_map(z);
  const double dphi = std::abs(eval_derivative(zeta));
  return std::abs(X) / ((1.0 - std::norm(zeta)) * dphi);
}

double npt_divergence(double t) {
  if (!(t >= 0.0) || !(t < 1.0)) throw std::invalid_argument("npt_divergence needs 0 <= t < 1");
  static const UniformizedDomain u = UniformizedDomain::from_map("npt_example");
  const cplx z = u.eval_map(cplx(t, 0.0));
  const double clearance = u.domain().boundary_distance(from_complex(z));
  if (!(clearance > 0.0))
    throw std::runtime_error("boundary distance degenerate this close to the cusp");
  return 2.0 * std::atanh(t) + std::log(clearance);
}

}  // namespace metriclab
