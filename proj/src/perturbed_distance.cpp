#include <cmath>
#include <numbers>

#include "horolab/flow.hpp"
#include "horolab/surface_metric.hpp"

namespace horolab {

namespace {

struct Approach {
  double miss;  // hyperbolic distance from y at closest approach
  double time;  // arc length of the shot at closest approach
};

constexpr double kGolden = 0.6180339887498949;

// Closest approach of the geodesic from x at `angle` to y within [0, horizon].
Approach closest_approach(const SurfaceMetric& metric, Point x, Point y, double angle, double horizon,
                          double dt) {
  GeodesicIntegrator flow(metric, {x, angle});
  auto miss_of = [&](const GeodesicIntegrator& f) {
    return std::acosh(std::max(1.0, cosh_distance_to_image(y, f.frame(), f.local_point())));
  };
  GeodesicIntegrator before = flow;  // state one step before the best sample
  double best = miss_of(flow);
  bool best_is_start = true;
  const int n = static_cast<int>(std::ceil(horizon / dt));
  for (int k = 0; k < n; ++k) {
    GeodesicIntegrator here = flow;
    flow.step(dt);
    const double m = miss_of(flow);
    if (m < best) {
      best = m;
      before = here;
      best_is_start = false;
    }
  }
  if (best_is_start) return {best, 0.0};
  // Refine inside [t_best - dt, t_best + dt] with partial RK4 steps from the
  // sample before the best one.
  auto miss_at = [&](double s) {
    GeodesicIntegrator f = before;
    if (s > dt) {
      f.step(dt);
      f.step(s - dt);
    } else if (s > 0.0) {
      f.step(s);
    }
    return miss_of(f);
  };
  double lo = 0.0;
  double hi = 2.0 * dt;
  double a = hi - kGolden * (hi - lo);
  double b = lo + kGolden * (hi - lo);
  double fa = miss_at(a);
  double fb = miss_at(b);
  for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - kGolden * (hi - lo);
      fa = miss_at(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + kGolden * (hi - lo);
      fb = miss_at(b);
    }
  }
  const double s = 0.5 * (lo + hi);
  const double m = std::min(miss_at(s), best);
  return {m, before.time() + s};
}

}  // namespace

double perturbed_distance(const SurfaceMetric& metric, Point x, Point y, double tol) {
  require_in_disk(x, "perturbed_distance");
  require_in_disk(y, "perturbed_distance");
  if (metric.kind() != MetricKind::Perturbed) {
    throw Error(ErrorKind::Domain, "perturbed_distance requires a perturbed metric");
  }
  if (x.u == y.u && x.v == y.v) return 0.0;
  constexpr double dt = kDefaultStep;
  // lambda <= lambda_hyp, so the perturbed distance never exceeds d_hyp.
  const double horizon = hyperbolic_distance(x, y) + 0.5;

  constexpr int kCoarse = 64;
  const double step = 2.0 * std::numbers::pi / kCoarse;
  int best = 0;
  double best_miss = INFINITY;
  for (int i = 0; i < kCoarse; ++i) {
    const Approach a = closest_approach(metric, x, y, i * step, horizon, dt);
    if (a.miss < best_miss) {
      best_miss = a.miss;
      best = i;
    }
  }
  double lo = (best - 1) * step;
  double hi = (best + 1) * step;
  auto f = [&](double angle) { return closest_approach(metric, x, y, angle, horizon, dt); };
  double a = hi - kGolden * (hi - lo);
  double b = lo + kGolden * (hi - lo);
  Approach fa = f(a);
  Approach fb = f(b);
  for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
    if (fa.miss < fb.miss) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - kGolden * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + kGolden * (hi - lo);
      fb = f(b);
    }
  }
  const Approach hit = fa.miss < fb.miss ? fa : fb;
  // A geodesic through y exists, so the refined shot must pass through it.
  if (!(hit.miss < std::max(tol, 1e-7))) {
    throw Error(ErrorKind::NumericFailure, "shooting failed to reach the target (miss " +
                                               std::to_string(hit.miss) + ")");
  }
  // Closest approach is perpendicular: d^2 ~ s^2 + miss^2.
  return hit.time + 0.5 * hit.miss * hit.miss / std::max(hit.time, 1e-300);
}

}  // namespace horolab
