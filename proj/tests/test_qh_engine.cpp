#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "metriclab/closed_forms.hpp"
#include "metriclab/qh_engine.hpp"
#include "metriclab/rng.hpp"

using namespace metriclab;

namespace {

const Domain kHalfPlane = Domain::half_plane(1.0, 0.0, 0.0);
const Domain kDisc = Domain::disc(0.0, 0.0, 1.0);

Domain ell_shape() {
  return Domain::polygon({Point::planar(0, 0), Point::planar(2, 0), Point::planar(2, 1),
                          Point::planar(1, 1), Point::planar(1, 2), Point::planar(0, 2)});
}

}  // namespace

TEST_CASE("path length closed cases") {
  const Path radial{{Point::planar(1, 0), Point::planar(2, 0)}};
  CHECK(path_length(kHalfPlane, radial) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const Path chord{{Point::planar(-0.5, 0), Point::planar(0.5, 0)}};
  CHECK(path_length(kDisc, chord) == doctest::Approx(1.3862944).epsilon(1e-7));
}

TEST_CASE("path length rejects bad paths") {
  CHECK_THROWS_AS(path_length(kHalfPlane, Path{}), std::invalid_argument);
  CHECK_THROWS_AS(path_length(kHalfPlane, Path{{Point::planar(-1, 0), Point::planar(1, 0)}}),
                  std::domain_error);
  // Both endpoints interior, but the chord cuts across the notch.
  const Path across{{Point::planar(1.5, 0.5), Point::planar(0.5, 1.5)}};
  CHECK_THROWS_AS(path_length(ell_shape(), across), QuadratureError);
}

TEST_CASE("grid graph keeps only cleared nodes") {
  const Rect window{-1.0, 1.0, -1.0, 1.0};
  const GridGraph g = GridGraph::build(kDisc, window, 0.1, 0.01);
  CHECK(g.nodes.size() > 100);
  CHECK(g.node_id.size() == static_cast<std::size_t>(g.nx) * g.ny);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    CHECK(kDisc.contains(g.nodes[i]));
    CHECK(g.clearance[i] >= 0.01);
  }
}

TEST_CASE("refinement flattens a detour") {
  const Path detour{{Point::planar(1, 0), Point::planar(1.5, 0.5), Point::planar(2, 0)}};
  const Path better = refine_path(kHalfPlane, detour);
  CHECK(path_length(kHalfPlane, better) <= std::log(2.0) + 1e-3);
}

TEST_CASE("refinement leaves an optimal segment alone") {
  const Path radial{{Point::planar(1, 0), Point::planar(2, 0)}};
  const Path refined = refine_path(kHalfPlane, radial);
  CHECK(path_length(kHalfPlane, refined) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("solver brackets on the half plane") {
  const QHResult along = h_num(kHalfPlane, Point::planar(1, 0), Point::planar(2, 0), 0.02);
  CHECK(along.lower == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(along.upper >= along.lower - 1e-12);
  CHECK(along.upper <= std::log(2.0) + 1e-3);

  const QHResult lateral = h_num(kHalfPlane, Point::planar(1, 0), Point::planar(1, 1), 0.02);
  CHECK(lateral.upper >= 0.9624237 - 1e-9);
  CHECK(lateral.upper <= 0.9624237 + 2e-3);
  CHECK(lateral.bracket_width == doctest::Approx(lateral.upper - lateral.lower).epsilon(1e-12));
}

TEST_CASE("solver bracket collapses where the lower bound is tight") {
  const QHResult r = h_num(kDisc, Point::planar(-0.5, 0), Point::planar(0.5, 0), 0.02);
  CHECK(r.lower == doctest::Approx(1.3862944).epsilon(1e-7));
  CHECK(r.upper >= r.lower - 1e-12);
  CHECK(r.upper <= r.lower + 2e-3);
}

TEST_CASE("solver is symmetric in its endpoints") {
  const Point z = Point::planar(0.3, 0.1);
  const Point w = Point::planar(-0.2, -0.4);
  const QHResult zw = h_num(kDisc, z, w, 0.05);
  const QHResult wz = h_num(kDisc, w, z, 0.05);
  CHECK(std::abs(zw.upper - wz.upper) <= 1e-6);
  CHECK(std::abs(zw.lower - wz.lower) <= 1e-12);
}

TEST_CASE("solver upper bounds satisfy the triangle inequality") {
  const Point a = Point::planar(0.3, 0.0);
  const Point b = Point::planar(-0.3, 0.2);
  const Point c = Point::planar(0.0, -0.4);
  const double ab = h_num(kDisc, a, b, 0.02).upper;
  const double ac = h_num(kDisc, a, c, 0.02).upper;
  const double cb = h_num(kDisc, c, b, 0.02).upper;
  CHECK(ab <= ac + cb + 2e-3);
}

TEST_CASE("solver routes around a notch") {
  const QHResult r = h_num(ell_shape(), Point::planar(1.5, 0.5), Point::planar(0.5, 1.5), 0.05);
  CHECK(r.upper >= r.lower - 1e-12);
  // The straight chord is inadmissible, so the admissible route is strictly
  // longer than the unconstrained lower bound.
  CHECK(r.upper > r.lower + 0.1);
  const Domain d = ell_shape();
  for (const Point& v : r.path.vertices) CHECK(d.contains(v));
}

TEST_CASE("one dimensional queries are delegated to the exact form") {
  const Domain iv = Domain::interval(0, 1);
  const QHResult r = h_num(iv, Point::line(0.25), Point::line(0.75), 0.02);
  CHECK(r.upper == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(r.lower == doctest::Approx(r.upper).epsilon(1e-12));
  CHECK(r.bracket_width <= 1e-12);

  const Domain ray = Domain::interval(0, std::numeric_limits<double>::infinity());
  const QHResult rr = h_num(ray, Point::line(1), Point::line(4), 0.02);
  CHECK(rr.upper == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("solver brackets hold on random disc pairs") {
  CounterRng rng(31, 0);
  for (int k = 0; k < 10; ++k) {
    const double t1 = rng.uniform(0, 2 * std::acos(-1.0));
    const double t2 = rng.uniform(0, 2 * std::acos(-1.0));
    const Point z = rng.uniform(0.05, 0.8) * Point::planar(std::cos(t1), std::sin(t1));
    const Point w = rng.uniform(0.05, 0.8) * Point::planar(std::cos(t2), std::sin(t2));
    if (dist(z, w) < 0.05) continue;
    const QHResult r = h_num(kDisc, z, w, 0.05);
    CHECK(r.upper >= r.lower - 1e-12);
    CHECK(r.upper >= poincare_disc(to_complex(z), to_complex(w)) - 1e-6);
  }
}

TEST_CASE("convergence study tightens the upper bound") {
  const std::vector<ConvergenceRow> rows =
      convergence_study(kHalfPlane, Point::planar(1, 0), Point::planar(1, 1), {0.1, 0.05, 0.025});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].resolution == doctest::Approx(0.1));
  CHECK(rows[2].resolution == doctest::Approx(0.025));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].upper <= rows[i - 1].upper + 1e-12);
  CHECK(rows[2].upper >= 0.9624237 - 1e-9);
  CHECK(rows[2].upper <= 0.9624237 + 2e-3);
  CHECK_THROWS_AS(
      convergence_study(kHalfPlane, Point::planar(1, 0), Point::planar(1, 1), {0.1, 0.05}),
      std::invalid_argument);
}
