#pragma once

#include <complex>
#include <string_view>

namespace metriclab {

// A conformal map of the open unit disc, used as a uniformization chart.
// Implementations must be injective on the open disc and extend continuously
// to the closed disc wherever the domain machinery samples them.
class ConformalMap {
 public:
  virtual ~ConformalMap() = default;
  virtual const char* name() const = 0;
  virtual std::complex<double> eval(std::complex<double> zeta) const = 0;
  virtual std::complex<double> deriv(std::complex<double> zeta) const = 0;
  // True when the image of the closed disc is bounded, so the boundary can be
  // cached as a closed polyline.
  virtual bool bounded_image() const = 0;
};

// Registry lookup. Known names: "identity", "cayley", "npt_example".
// Throws std::invalid_argument for anything else.
const ConformalMap& map_by_name(std::string_view name);

}  // namespace metriclab
