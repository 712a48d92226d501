#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "gen.hpp"
#include "horolab/measures.hpp"

using namespace horolab;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const SurfaceGroup> shared_group() {
  static const auto g = std::make_shared<const SurfaceGroup>(build_genus2_group());
  return g;
}

BoundaryMeasure pulled_back(const BoundaryMeasure& m, const Isometry& g) {
  BoundaryMeasure out = m;
  const Isometry inv = g.inverse();
  for (auto& a : out.atoms) a.xi = BoundaryPoint::at(std::arg(inv.apply(a.xi.z())));
  std::sort(out.atoms.begin(), out.atoms.end(), [](const Atom& a, const Atom& b) { return a.xi.angle < b.xi.angle; });
  return out;
}

}  // namespace

TEST_CASE("sphere measure at the origin") {
  const SurfaceMetric hyp = SurfaceMetric::hyperbolic();
  const double R = 8.0;
  const BoundaryMeasure nu = sphere_measure(hyp, Point{}, R, 256, 1.0);
  // e^{-R} 2 pi sinh R
  CHECK(nu.mass() == doctest::Approx(kPi * (1.0 - std::exp(-2.0 * R))).epsilon(1e-9));
  for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
    CHECK(nu.atoms[i].xi.angle == doctest::Approx(2.0 * kPi * i / 256.0));
    CHECK(nu.atoms[i].weight == doctest::Approx(nu.mass() / 256.0));
  }
  CHECK_THROWS_AS(sphere_measure(hyp, Point{}, -1.0, 256, 1.0), Error);
}

TEST_CASE("sphere measures are group equivariant") {
  const SurfaceMetric hyp = SurfaceMetric::hyperbolic();
  const auto& g = shared_group()->generators[3];
  const Point x{0.2, -0.1};
  const BoundaryMeasure at_x = sphere_measure(hyp, x, 6.0, 1024, 1.0, 1e-2);
  const BoundaryMeasure at_gx = sphere_measure(hyp, g.apply(x), 6.0, 1024, 1.0, 1e-2);
  CHECK(at_gx.mass() == doctest::Approx(at_x.mass()).epsilon(1e-9));
  CHECK(max_log_density_deviation(at_x, pulled_back(at_gx, g), [](double) { return 0.0; }) < 1e-3);
}

TEST_CASE("Patterson-Sullivan cocycle") {
  const SurfaceMetric hyp = SurfaceMetric::hyperbolic();
  const BoundaryMeasure nu_p = sphere_measure(hyp, Point{}, 6.0, 1024, 1.0, 1e-2);
  const BoundaryMeasure nu_q = sphere_measure(hyp, Point{0.3, 0.0}, 6.0, 1024, 1.0, 1e-2);
  CHECK(ps_cocycle_check(nu_p, nu_q).max_deviation < 1e-3);
  CHECK(ps_cocycle_check(nu_q, nu_p).max_deviation < 1e-3);
  // Wrong exponent is caught.
  BoundaryMeasure wrong = nu_q;
  wrong.entropy = 0.5;
  CHECK_THROWS_AS(ps_cocycle_check(nu_p, wrong), Error);
  const double off = max_log_density_deviation(nu_p, nu_q, [&](double a) {
    return -0.5 * busemann_closed(BoundaryPoint::at(a), Point{0.3, 0.0}, Point{}).value;
  });
  CHECK(off > 0.1);

  // Half of the circle empty: atoms there have nothing to pair with.
  BoundaryMeasure half = nu_p;
  std::erase_if(half.atoms, [](const Atom& a) { return a.xi.angle > kPi; });
  CHECK_THROWS_AS(max_log_density_deviation(half, nu_q, [](double) { return 0.0; }), Error);
}

TEST_CASE("shadows") {
  const SurfaceMetric hyp = SurfaceMetric::hyperbolic();
  const BoundaryMeasure nu = sphere_measure(hyp, Point{}, 8.0, 4096, 1.0, 1e-2);
  for (double d : {1.5, 3.0, 5.0}) {
    const Point x = Point::from(std::polar(std::tanh(0.5 * d), 0.77));
    const ShadowEstimate s = shadow_ratio(nu, x, 1.0);
    // Half-angle phi of the shadow: sin phi = sinh rho / sinh d.
    const double phi = std::asin(std::sinh(1.0) / std::sinh(d));
    const double expect = nu.mass() / (2.0 * kPi) * 2.0 * phi * std::exp(d);
    CHECK(s.ratio == doctest::Approx(expect).epsilon(4.0 * 2.0 * kPi / 4096.0 / (2.0 * phi)));
    CHECK(s.distance == doctest::Approx(d));
  }
  // Inside the ball the shadow is everything.
  CHECK(shadow_ratio(nu, Point{0.1, 0.0}, 1.0).shadow_mass == doctest::Approx(nu.mass()));
  const BoundaryMeasure coarse = sphere_measure(hyp, Point{}, 2.0, 8, 1.0);
  CHECK_THROWS_AS(shadow_ratio(coarse, Point::from(std::polar(std::tanh(2.0), 0.4)), 1e-3), Error);
}

TEST_CASE("Margulis function on the hyperbolic plane") {
  const SurfaceMetric hyp = SurfaceMetric::hyperbolic();
  const double t = 6.0;
  const MargulisEstimate m = margulis_c(hyp, Point{0.3, 0.2}, 1.0, t, 32);
  auto closed = [](double s) { return kPi * (1.0 + std::exp(-2.0 * s) - 2.0 * std::exp(-s)); };
  CHECK(m.c == doctest::Approx(closed(t)).epsilon(1e-6));
  CHECK(m.cauchy_gap == doctest::Approx(std::abs(closed(t) - closed(0.8 * t))).epsilon(1e-6));
  CHECK(m.sphere_mass == doctest::Approx(kPi * (1.0 - std::exp(-2.0 * t))).epsilon(1e-9));
}

TEST_CASE("normalized Busemann integral and c(x, y)") {
  const SurfaceMetric hyp = SurfaceMetric::hyperbolic();
  const BoundaryMeasure nu = sphere_measure(hyp, Point{0.1, 0.1}, 8.0, 512, 1.0, 1e-2);
  // Poisson kernel: the integral is c(y)/c(x) = 1.
  for (Point y : {Point{0.0, 0.0}, Point{0.5, -0.2}, Point{-0.6, 0.3}}) {
    CHECK(normalized_busemann_integral(hyp, nu, y) == doctest::Approx(1.0).epsilon(1e-6));
  }
  const MargulisPair xy = margulis_c_xy(hyp, Point{0.2, 0.0}, Point{-0.1, 0.3}, 1.0, 8.0, 512, 1e-2);
  const MargulisPair yx = margulis_c_xy(hyp, Point{-0.1, 0.3}, Point{0.2, 0.0}, 1.0, 8.0, 512, 1e-2);
  CHECK(xy.value == doctest::Approx(kPi * kPi).epsilon(1e-5));
  CHECK(xy.value == doctest::Approx(yx.value).epsilon(1e-2));
}

TEST_CASE("kappa calibration") {
  const SurfaceMetric hyp = SurfaceMetric::hyperbolic();
  const KappaCalibration k = calibrate_kappa(hyp, *shared_group(), Point{}, Point{}, 1.0, 8.0, 256, {9.0, 10.0});
  CHECK(k.kappa == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(0.1));
  CHECK(k.kappa_sq.size() == 2);
  const SurfaceMetric m = SurfaceMetric::perturbed(shared_group(), {0.01, 0.3, Point{}});
  CHECK_THROWS_AS(calibrate_kappa(m, *shared_group(), Point{}, Point{}, 1.0, 8.0, 256), Error);
}

TEST_CASE("measure JSON round trip") {
  const BoundaryMeasure nu = sphere_measure(SurfaceMetric::hyperbolic(), Point{0.3, -0.2}, 3.0, 64, 1.0);
  const BoundaryMeasure back = measure_from_json(measure_to_json(nu));
  CHECK(back.basepoint.u == nu.basepoint.u);
  CHECK(back.radius == nu.radius);
  REQUIRE(back.atoms.size() == nu.atoms.size());
  for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
    CHECK(back.atoms[i].xi.angle == nu.atoms[i].xi.angle);
    CHECK(back.atoms[i].weight == nu.atoms[i].weight);
    CHECK(back.atoms[i].direction == nu.atoms[i].direction);
  }
  CHECK_THROWS_AS(measure_from_json("{\"radius\": 1}"), Error);
}

TEST_CASE("perturbed sphere measure") {
  const SurfaceMetric m = SurfaceMetric::perturbed(shared_group(), {0.01, 0.3, Point{}});
  const BoundaryMeasure nu = sphere_measure(m, Point{0.05, 0.0}, 3.0, 32, 1.0, 2e-3);
  CHECK(nu.atoms.size() == 32);
  for (std::size_t i = 1; i < nu.atoms.size(); ++i) CHECK(nu.atoms[i - 1].xi.angle <= nu.atoms[i].xi.angle);
  for (const auto& a : nu.atoms) CHECK(a.weight > 0.0);
}
