#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metriclab/closed_forms.hpp"
#include "metriclab/geometry.hpp"
#include "metriclab/kobayashi.hpp"
#include "metriclab/qh_engine.hpp"
#include "metriclab/suites.hpp"

namespace py = pybind11;
using namespace metriclab;

namespace {

Point to_point(const std::vector<double>& v) {
  if (v.size() == 1) return Point::line(v[0]);
  if (v.size() == 2) return Point::planar(v[0], v[1]);
  throw std::invalid_argument("a point needs 1 or 2 coordinates");
}

py::object json_to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::object run_suite(const std::string& suite_id, const std::optional<Domain>& domain,
                     int pairs, std::uint64_t seed, double resolution,
                     const std::optional<std::vector<double>>& anchor, double radius,
                     const std::vector<double>& radii, double c) {
  SuiteConfig cfg;
  cfg.suite_id = suite_id;
  cfg.domain = domain;
  cfg.pairs = pairs;
  cfg.seed = seed;
  cfg.resolution = resolution;
  if (anchor) cfg.anchor = to_point(*anchor);
  cfg.radius = radius;
  cfg.radii = radii;
  cfg.c = c;
  const auto& ineq = inequality_suite_ids();
  if (std::find(ineq.begin(), ineq.end(), suite_id) != ineq.end())
    return json_to_py(check_inequality(cfg).to_json());
  const auto& lim = limit_suite_ids();
  if (std::find(lim.begin(), lim.end(), suite_id) != lim.end())
    return json_to_py(check_limit(cfg).to_json());
  throw SpecError("unknown suite: " + suite_id);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "planar quasi-hyperbolic and Kobayashi distance laboratory";

  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<IncompatibleError>(m, "IncompatibleError", PyExc_ValueError);
  py::register_exception<UnsoundSuiteError>(m, "UnsoundSuiteError", PyExc_ValueError);

  py::class_<Domain>(m, "Domain")
      .def_static(
          "from_json",
          [](const std::string& text) { return Domain::from_json(nlohmann::json::parse(text)); },
          py::arg("text"), "build a domain from its JSON description")
      .def("to_json", [](const Domain& d) { return d.to_json().dump(); })
      .def("kind", &Domain::kind_name)
      .def("dimension", &Domain::dimension)
      .def(
          "contains",
          [](const Domain& d, const std::vector<double>& p) { return d.contains(to_point(p)); },
          py::arg("p"))
      .def(
          "boundary_distance",
          [](const Domain& d, const std::vector<double>& p) {
            return d.boundary_distance(to_point(p));
          },
          py::arg("p"))
      .def("__repr__",
           [](const Domain& d) { return "Domain(" + d.to_json().dump() + ")"; });

  m.def("s_dist", &s_dist, py::arg("dz"), py::arg("dw"), py::arg("r"));
  m.def("i_dist", &i_dist, py::arg("dz"), py::arg("dw"), py::arg("r"));
  m.def("v_dist", &v_dist, py::arg("c"), py::arg("dz"), py::arg("dw"), py::arg("r"));
  m.def("q_ratio", &q_ratio, py::arg("h"), py::arg("s"), py::arg("coincident"));
  m.def("k_disc_real", &k_disc_real, py::arg("a"), py::arg("b"));
  m.def(
      "poincare_disc",
      [](std::complex<double> a, std::complex<double> b) { return poincare_disc(a, b); },
      py::arg("a"), py::arg("b"));
  m.def("bound_constants", [] {
    const BoundConstants bc = BoundConstants::sharp();
    py::dict out;
    out["c0"] = bc.c0;
    out["gap"] = bc.gap;
    return out;
  });
  m.def("c0_solve", [] {
    const C0Solution s = c0_solve();
    return py::make_tuple(s.c0, s.argmin_c2);
  });
  m.def("g_value", [](double gamma, double delta, double c2) {
    return g_value({gamma, delta, c2});
  });

  m.def(
      "h_num",
      [](const Domain& d, const std::vector<double>& z, const std::vector<double>& w,
         double resolution) {
        const QHResult res = h_num(d, to_point(z), to_point(w), resolution);
        py::dict out;
        out["upper"] = res.upper;
        out["lower"] = res.lower;
        out["bracket_width"] = res.bracket_width;
        std::vector<std::pair<double, double>> path;
        for (const Point& p : res.path.vertices) path.emplace_back(p.x, p.y);
        out["path"] = path;
        return out;
      },
      py::arg("domain"), py::arg("z"), py::arg("w"), py::arg("resolution") = 0.02,
      "certified bracket for the quasi-hyperbolic distance");

  m.def(
      "k_dist",
      [](const Domain& d, const std::vector<double>& z, const std::vector<double>& w) {
        const auto uni = UniformizedDomain::from_domain(d);
        return uni.k_dist(to_complex(to_point(z)), to_complex(to_point(w)));
      },
      py::arg("domain"), py::arg("z"), py::arg("w"), "Kobayashi distance via uniformization");

  m.def("npt_divergence", &npt_divergence, py::arg("t"));

  m.def("run_suite", &run_suite, py::arg("suite_id"), py::arg("domain") = std::nullopt,
        py::arg("pairs") = 100, py::arg("seed") = 1, py::arg("resolution") = 0.02,
        py::arg("anchor") = std::nullopt, py::arg("radius") = 0.2,
        py::arg("radii") = std::vector<double>{}, py::arg("c") = 2.0,
        "run a verification suite and return its report as a dict");
}
