#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "horolab/asymptotics.hpp"

using namespace horolab;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const SurfaceGroup> shared_group() {
  static const auto g = std::make_shared<const SurfaceGroup>(build_genus2_group());
  return g;
}

const SurfaceMetric& bumpy(double eps) {
  static const SurfaceMetric a = SurfaceMetric::perturbed(shared_group(), {0.01, 0.3, Point{}});
  static const SurfaceMetric b = SurfaceMetric::perturbed(shared_group(), {0.02, 0.3, Point{}});
  return eps == 0.01 ? a : b;
}

}  // namespace

TEST_CASE("entropy fit on synthetic and hyperbolic series") {
  GrowthSeries s;
  for (int i = 0; i <= 20; ++i) s.samples.push_back({0.5 * i, 7.0 * std::exp(2.0 * 0.5 * i)});
  const EntropyEstimate e = entropy_fit(s, 2.0, 8.0);
  CHECK(e.h == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(e.fit_residual < 1e-12);
  CHECK(e.samples == 13);
  CHECK_THROWS_AS(entropy_fit(s, 2.0, 3.0), Error);
  s.samples[10].value = 0.0;
  CHECK_THROWS_AS(entropy_fit(s, 2.0, 8.0), Error);

  const VolumeSweep sweep = volume_sweep(SurfaceMetric::hyperbolic(), Point{}, 10.0, 16, 1e-3, 100);
  const EntropyEstimate sphere = entropy_fit(sphere_series(sweep), 6.0, 10.0);
  CHECK(sphere.h == doctest::Approx(1.0).epsilon(1e-3));
  const EntropyEstimate ball = entropy_fit(ball_series(sweep), 6.0, 10.0);
  CHECK(ball.h == doctest::Approx(sphere.h).epsilon(1e-2));
  const EntropyEstimate whole = entropy_fit(sphere_series(sweep));
  CHECK(whole.t1 == doctest::Approx(6.0));
  CHECK(whole.t2 == doctest::Approx(10.0));

  // Orbit counts grow at the volume rate.
  std::vector<double> grid;
  for (double t = 6.0; t <= 12.0 + 1e-9; t += 0.5) grid.push_back(t);
  const GrowthSeries counts = count_series(*shared_group(), Point{}, Point{}, grid);
  CHECK(entropy_fit(counts, 7.0, 12.0).h == doctest::Approx(sphere.h).epsilon(0.05));
}

TEST_CASE("growth normalized by e^{hR} settles") {
  const VolumeSweep sweep = volume_sweep(SurfaceMetric::hyperbolic(), Point{0.2, 0.0}, 10.0, 16, 1e-3, 100);
  const std::size_t n = sweep.times.size() - 1;
  const double g1 = growth_normalized(sweep.sphere[n], 1.0, sweep.times[n]);
  const double g0 = growth_normalized(sweep.sphere[n - 1], 1.0, sweep.times[n - 1]);
  CHECK(std::abs((g1 - g0) / (sweep.times[n] - sweep.times[n - 1])) < 1e-2);
  CHECK(g1 == doctest::Approx(kPi).epsilon(1e-6));
}

TEST_CASE("perturbed entropy is stable across windows") {
  const VolumeSweep sweep = volume_sweep(bumpy(0.01), Point{}, 10.0, 48, 1e-2, 10);
  const GrowthSeries s = sphere_series(sweep);
  const EntropyEstimate early = entropy_fit(s, 6.0, 8.0);
  const EntropyEstimate late = entropy_fit(s, 8.0, 10.0);
  CHECK(early.h == doctest::Approx(late.h).epsilon(0.02));
  // Curvature is at most -0.55 everywhere and -1 away from the bump.
  CHECK(late.h > 0.7);
  CHECK(late.h < 1.2);
}

TEST_CASE("horocycle curvature averages") {
  const TrUAverage hyp = tr_u_average(SurfaceMetric::hyperbolic(), *shared_group(), 16, 20.0, 7);
  CHECK(hyp.first == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(hyp.second == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(hyp.geodesics == 16);

  const TrUAverage a = tr_u_average(bumpy(0.02), *shared_group(), 6, 20.0, 42, 2e-3);
  const TrUAverage b = tr_u_average(bumpy(0.02), *shared_group(), 6, 20.0, 42, 2e-3);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(a.comparison_holds);
  CHECK(a.first >= a.lower_bound);
  CHECK(a.first <= a.upper_bound);
}

TEST_CASE("rigidity defect") {
  const double hyp = rigidity_defect(SurfaceMetric::hyperbolic(), Point{0.2, 0.1}, 1.0, 6.0, 32).defect;
  CHECK(hyp < 1e-4);
  const SurfaceMetric zero = SurfaceMetric::perturbed(shared_group(), {0.0, 0.3, Point{}});
  CHECK(rigidity_defect(zero, Point{0.2, 0.1}, 1.0, 6.0, 32).defect == doctest::Approx(hyp).epsilon(1e-12).scale(1.0));
}

TEST_CASE("Gauss-Bonnet and Katok") {
  const GaussBonnet hyp = gauss_bonnet_check(SurfaceMetric::hyperbolic(), *shared_group());
  CHECK(hyp.integral == doctest::Approx(4.0 * kPi).epsilon(5e-3));
  CHECK(hyp.volume == doctest::Approx(hyp.integral).epsilon(1e-14));
  CHECK(hyp.cells >= 9000);
  const GaussBonnet pert = gauss_bonnet_check(bumpy(0.01), *shared_group());
  CHECK(pert.integral == doctest::Approx(4.0 * kPi).epsilon(5e-3));
  CHECK(pert.volume < hyp.volume);

  CHECK(octagon_defect_area() == doctest::Approx(4.0 * kPi).epsilon(1e-15));
  CHECK(katok_identity(1.0, 4.0 * kPi) == doctest::Approx(1.0));
  CHECK(katok_identity(2.0, 4.0 * kPi) == doctest::Approx(4.0));
  CHECK(katok_identity(1.0, hyp.volume) == doctest::Approx(1.0).epsilon(2e-2));
}
