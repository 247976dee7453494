#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "metriclab/closed_forms.hpp"
#include "metriclab/kobayashi.hpp"
#include "metriclab/qh_engine.hpp"
#include "metriclab/rng.hpp"

using namespace metriclab;
using cplx = std::complex<double>;

namespace {

// Midpoint-rule integral of the infinitesimal metric along the image of a
// straight segment of the parameter disc.
double kappa_integral(const UniformizedDomain& u, cplx a, cplx b, int n) {
  double acc = 0.0;
  cplx prev = u.eval_map(a);
  for (int k = 1; k <= n; ++k) {
    const cplx cur = u.eval_map(a + (b - a) * (static_cast<double>(k) / n));
    const cplx mid = u.eval_map(a + (b - a) * ((k - 0.5) / n));
    acc += u.kappa_metric(mid, cur - prev);
    prev = cur;
  }
  return acc;
}

}  // namespace

TEST_CASE("boundary approach map values") {
  const UniformizedDomain u = UniformizedDomain::from_map("npt_example");
  CHECK(u.eval_map({0.5, 0.0}).real() == doctest::Approx(0.6534264).epsilon(1e-7));
  CHECK(u.eval_map({0.5, 0.0}).imag() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(u.eval_map({-1.0, 0.0}).real() == doctest::Approx(-0.6137056).epsilon(1e-7));
  CHECK(u.eval_derivative({0.0, 0.0}).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(u.eval_derivative({0.0, 0.0}).imag() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("map derivative matches finite differences") {
  const char* ids[] = {"npt_example", "cayley"};
  CounterRng rng(41, 0);
  for (const char* id : ids) {
    const UniformizedDomain u = UniformizedDomain::from_map(id);
    for (int k = 0; k < 50; ++k) {
      const double t = rng.uniform(0, 2 * std::acos(-1.0));
      const double r = rng.uniform(0, 0.9);
      const cplx zeta = std::polar(r, t);
      const double h = 1e-5;
      const cplx fd = (u.eval_map(zeta + cplx{h, 0}) - u.eval_map(zeta - cplx{h, 0})) / (2.0 * h);
      const cplx dv = u.eval_derivative(zeta);
      CHECK(std::abs(fd - dv) <= 1e-6 * std::max(1.0, std::abs(dv)));
    }
  }
}

TEST_CASE("inversion round trip") {
  const UniformizedDomain u = UniformizedDomain::from_map("npt_example");
  CHECK(std::abs(u.invert_map({0.6534264, 0.0}) - cplx{0.5, 0.0}) <= 1e-7);
  CounterRng rng(43, 0);
  for (int k = 0; k < 1000; ++k) {
    const double t = rng.uniform(0, 2 * std::acos(-1.0));
    const double r = 0.95 * std::sqrt(rng.uniform(0, 1));
    const cplx zeta = std::polar(r, t);
    const cplx back = u.invert_map(u.eval_map(zeta));
    CHECK(std::abs(back - zeta) <= 1e-10);
  }
  CHECK_THROWS_AS(u.invert_map({25.0, 0.0}), std::domain_error);
}

TEST_CASE("kobayashi distance examples") {
  const UniformizedDomain npt = UniformizedDomain::from_map("npt_example");
  CHECK(npt.k_dist({0.6534264, 0.0}, {0.0, 0.0}) == doctest::Approx(0.5493061).epsilon(1e-6));

  const UniformizedDomain disc = UniformizedDomain::from_map("identity");
  CHECK(disc.k_dist({0.5, 0.0}, {-0.5, 0.0}) == doctest::Approx(1.0986123).epsilon(1e-7));
  CHECK(disc.k_dist({0.3, 0.3}, {0.3, 0.3}) == 0.0);
}

TEST_CASE("uniformization from domain descriptions") {
  const UniformizedDomain big = UniformizedDomain::from_domain(Domain::disc(0, 0, 2));
  CHECK(big.k_dist({1.0, 0.0}, {0.0, 0.0}) ==
        doctest::Approx(std::atanh(0.5)).epsilon(1e-12));

  const UniformizedDomain hp = UniformizedDomain::from_domain(Domain::half_plane(1, 0, 0));
  CHECK(hp.k_dist({1.0, 0.0}, {2.0, 0.0}) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(UniformizedDomain::from_domain(Domain::polygon(
                      {Point::planar(0, 0), Point::planar(1, 0), Point::planar(0, 1)})),
                  IncompatibleError);
  CHECK_THROWS_AS(UniformizedDomain::from_domain(Domain::interval(0, 1)), IncompatibleError);
}

TEST_CASE("infinitesimal metric examples") {
  const UniformizedDomain disc = UniformizedDomain::from_map("identity");
  CHECK(disc.kappa_metric({0.0, 0.0}, {1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(disc.kappa_metric({0.5, 0.0}, {1.0, 0.0}) == doctest::Approx(1.3333333).epsilon(1e-7));
  CHECK(disc.kappa_metric({0.5, 0.0}, {2.0, 0.0}) == doctest::Approx(2.6666667).epsilon(1e-7));

  const UniformizedDomain npt = UniformizedDomain::from_map("npt_example");
  CHECK(npt.kappa_metric({0.0, 0.0}, {1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("metric density times clearance on the disc") {
  const UniformizedDomain disc = UniformizedDomain::from_map("identity");
  const Domain d = disc.domain();
  for (double depth : {0.01, 0.05, 0.1, 0.19}) {
    const cplx z{1.0 - depth, 0.0};
    const double kd = disc.kappa_metric(z, {1.0, 0.0}) * d.boundary_distance(from_complex(z));
    CHECK(kd == doctest::Approx(1.0 / (2.0 - depth)).epsilon(1e-12));
    CHECK(kd <= 0.5 + 0.5 * depth + 1e-12);
  }
}

TEST_CASE("metric density respects the distortion bounds") {
  const UniformizedDomain npt = UniformizedDomain::from_map("npt_example");
  const Domain d = npt.domain();
  const double err = d.boundary_distance_error_bound();
  CounterRng rng(47, 0);
  int tested = 0;
  for (int k = 0; k < 400 && tested < 60; ++k) {
    const double t = rng.uniform(0, 2 * std::acos(-1.0));
    const cplx zeta = std::polar(0.98 * std::sqrt(rng.uniform(0, 1)), t);
    const cplx z = npt.eval_map(zeta);
    const double bd = d.boundary_distance(from_complex(z));
    if (bd < 0.05) continue;
    ++tested;
    const double kd = npt.kappa_metric(z, {1.0, 0.0}) * bd;
    const double slack = err / 0.05;
    CHECK(kd >= 0.25 - slack - 1e-9);
    CHECK(kd <= 1.0 + slack + 1e-9);
  }
  CHECK(tested >= 30);
}

TEST_CASE("distance never exceeds the density integral") {
  const UniformizedDomain disc = UniformizedDomain::from_map("identity");
  const double k_disc = disc.k_dist({0.5, 0.0}, {-0.5, 0.0});
  const double along_disc = kappa_integral(disc, {0.5, 0.0}, {-0.5, 0.0}, 2000);
  CHECK(k_disc <= along_disc + 2e-3);
  // The segment is a geodesic, so the integral is the distance itself.
  CHECK(along_disc == doctest::Approx(k_disc).epsilon(1e-5));

  const UniformizedDomain npt = UniformizedDomain::from_map("npt_example");
  const double k_npt = npt.k_dist({0.6534264, 0.0}, {0.0, 0.0});
  const double along_npt = kappa_integral(npt, {0.5, 0.0}, {0.0, 0.0}, 2000);
  CHECK(k_npt <= along_npt + 2e-3);
  CHECK(along_npt == doctest::Approx(k_npt).epsilon(1e-4));
}

TEST_CASE("kobayashi below the certified quasihyperbolic upper bound") {
  const UniformizedDomain npt = UniformizedDomain::from_map("npt_example");
  const Domain nd = npt.domain();
  const cplx pairs[][2] = {{{0.6534264, 0.0}, {0.0, 0.0}},
                           {{-0.3, 0.0}, {0.2, 0.3}},
                           {{0.0, -0.5}, {-0.4, 0.2}}};
  for (const auto& pr : pairs) {
    const double k = npt.k_dist(pr[0], pr[1]);
    const QHResult q = h_num(nd, from_complex(pr[0]), from_complex(pr[1]), 0.05);
    CHECK(k <= q.upper + 1e-6);
  }

  const UniformizedDomain disc = UniformizedDomain::from_map("identity");
  const Domain dd = disc.domain();
  CounterRng rng(53, 0);
  for (int i = 0; i < 5; ++i) {
    const cplx z = std::polar(rng.uniform(0.1, 0.8), rng.uniform(0, 6.28));
    const cplx w = std::polar(rng.uniform(0.1, 0.8), rng.uniform(0, 6.28));
    if (std::abs(z - w) < 0.05) continue;
    const double k = disc.k_dist(z, w);
    const QHResult q = h_num(dd, from_complex(z), from_complex(w), 0.05);
    CHECK(k <= q.upper + 1e-6);
  }
}

TEST_CASE("divergence statistic grows toward the bad boundary point") {
  CHECK(std::isfinite(npt_divergence(0.0)));
  const double a = npt_divergence(0.5);
  const double b = npt_divergence(0.9);
  const double c = npt_divergence(0.99);
  CHECK(a < b);
  CHECK(b < c);
  CHECK_THROWS_AS(npt_divergence(1.0), std::invalid_argument);
  CHECK_THROWS_AS(npt_divergence(-0.1), std::invalid_argument);
}
