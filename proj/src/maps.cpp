#include "metriclab/maps.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace metriclab {

namespace {

using cplx = std::complex<double>;

class IdentityMap final : public ConformalMap {
 public:
  const char* name() const override { return "identity"; }
  cplx eval(cplx zeta) const override { return zeta; }
  cplx deriv(cplx) const override { return {1.0, 0.0}; }
  bool bounded_image() const override { return true; }
};

// Moebius map of the disc onto the right half-plane {Re w > 0}.
class CayleyMap final : public ConformalMap {
 public:
  const char* name() const override { return "cayley"; }
  cplx eval(cplx zeta) const override { return (1.0 - zeta) / (1.0 + zeta); }
  cplx deriv(cplx zeta) const override {
    const cplx s = 1.0 + zeta;
    return -2.0 / (s * s);
  }
  bool bounded_image() const override { return false; }
};

// phi(zeta) = 2 zeta + (1 - zeta) log(1 - zeta), principal branch.
// Conformal on the disc, C^1 but not Dini-smooth at the image of zeta = 1.
class NptExampleMap final : public ConformalMap {
 public:
  const char* name() const override { return "npt_example"; }
  cplx eval(cplx zeta) const override {
    const cplx u = 1.0 - zeta;
    if (std::abs(u) < 1e-300) return 2.0 * zeta;  // u log u -> 0
    return 2.0 * zeta + u * std::log(u);
  }
  cplx deriv(cplx zeta) const override { return 1.0 - std::log(1.0 - zeta); }
  bool bounded_image() const override { return true; }
};

const IdentityMap identity_map;
const CayleyMap cayley_map;
const NptExampleMap npt_example_map;

}  // namespace

const ConformalMap& map_by_name(std::string_view name) {
  if (name == "identity") return identity_map;
  if (name == "cayley") return cayley_map;
  if (name == "npt_example") return npt_example_map;
  throw std::invalid_argument("unknown conformal map: " + std::string(name));
}

}  // namespace metriclab
