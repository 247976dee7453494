#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include "metriclab/geometry.hpp"
#include "metriclab/maps.hpp"

namespace metriclab {

// A metric was requested on a domain kind that cannot support it (for the
// Kobayashi side: anything without an explicit uniformization).
struct IncompatibleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Planar simply connected domain presented as scale * base(zeta) + shift for
// a registry map `base` of the unit disc. The Kobayashi distance is then the
// Poincare distance of disc preimages, exactly.
class UniformizedDomain {
 public:
  // Registry ids: "identity" (unit disc), "cayley" (right half-plane),
  // "npt_example".
  static UniformizedDomain from_map(const std::string& map_id);
  // Accepts disc, half_plane, and mapped_disc domains; everything else has no
  // built-in uniformization and is rejected.
  static UniformizedDomain from_domain(const Domain& d);

  const std::string& map_id() const { return map_id_; }
  const Domain& domain() const { return *domain_; }

  std::complex<double> eval_map(std::complex<double> zeta) const;
  std::complex<double> eval_derivative(std::complex<double> zeta) const;

  // Newton with continuation along the segment from the image of 0; exact
  // inverses are used for the Moebius-type maps.
  std::complex<double> invert_map(std::complex<double> z) const;

  double k_dist(std::complex<double> z, std::complex<double> w) const;
  double kappa_metric(std::complex<double> z, std::complex<double> X) const;

 private:
  UniformizedDomain() = default;

  const ConformalMap* base_ = nullptr;
  std::complex<double> scale_{1.0, 0.0};
  std::complex<double> shift_{0.0, 0.0};
  std::string map_id_;
  std::optional<Domain> domain_;
};

// 2 atanh(t) + log d_D(phi(t)) on the npt_example domain: twice the Kobayashi
// distance to 0 of the real boundary approach, plus the log-clearance. Its
// growth as t -> 1 is the divergence phenomenon this module exhibits.
double npt_divergence(double t);

}  // namespace metriclab
