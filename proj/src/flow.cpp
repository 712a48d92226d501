#include "horolab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "horolab/parallel.hpp"

namespace horolab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int step_count(double T, double dt) {
  if (!(T >= 0.0)) throw Error(ErrorKind::Domain, "integration time must be >= 0");
  if (!(dt > 0.0)) throw Error(ErrorKind::Domain, "time step must be positive");
  return static_cast<int>(std::llround(T / dt));
}

}  // namespace

GeodesicIntegrator::GeodesicIntegrator(const SurfaceMetric& metric, UnitTangent start, double J0, double dJ0)
    : metric_(&metric), s_{start.base.z(), start.angle, J0, dJ0} {
  require_in_disk(start.base, "geodesic start");
  if (std::norm(s_.z) > kRecenterRadius * kRecenterRadius) metric_->recenter(s_.z, s_.theta, frame_);
  k_ = metric_->local(local_point()).curvature;
}

GeodesicIntegrator::State GeodesicIntegrator::derivative(const State& s, double* curvature) const {
  const SurfaceMetric::Local l = metric_->local(Point::from(s.z));
  const Complex dir = std::polar(1.0, s.theta);
  if (curvature) *curvature = l.curvature;
  return {dir / l.lambda, (std::conj(dir) * l.grad_log).imag() / l.lambda, s.dJ, -l.curvature * s.J};
}

void GeodesicIntegrator::step(double h) {
  auto axpy = [](const State& s, const State& d, double c) {
    return State{s.z + c * d.z, s.theta + c * d.theta, s.J + c * d.J, s.dJ + c * d.dJ};
  };
  const State k1 = derivative(s_, nullptr);
  const State k2 = derivative(axpy(s_, k1, 0.5 * h), nullptr);
  const State k3 = derivative(axpy(s_, k2, 0.5 * h), nullptr);
  const State k4 = derivative(axpy(s_, k3, h), nullptr);
  const double w = h / 6.0;
  s_.z += w * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
  s_.theta += w * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
  s_.J += w * (k1.J + 2.0 * k2.J + 2.0 * k3.J + k4.J);
  s_.dJ += w * (k1.dJ + 2.0 * k2.dJ + 2.0 * k3.dJ + k4.dJ);
  t_ += h;
  if (std::norm(s_.z) > kRecenterRadius * kRecenterRadius) metric_->recenter(s_.z, s_.theta, frame_);
  k_ = metric_->local(local_point()).curvature;
}

GeodesicRecord integrate_geodesic(const SurfaceMetric& metric, UnitTangent v0, double T, double dt) {
  const int n = step_count(T, dt);
  GeodesicRecord rec;
  rec.dt = n > 0 ? T / n : dt;
  rec.samples.reserve(static_cast<std::size_t>(n) + 1);
  GeodesicIntegrator flow(metric, v0);
  auto push = [&] {
    const Point p = flow.global_point();
    if (p.norm2() >= (1.0 - 1e-12) * (1.0 - 1e-12)) {
      throw Error(ErrorKind::Horizon, "geodesic reached the numerical edge of the disk at t = " +
                                          std::to_string(flow.time()));
    }
    rec.samples.push_back({flow.time(), p, flow.global_angle()});
  };
  push();
  for (int k = 0; k < n; ++k) {
    flow.step(rec.dt);
    push();
  }
  return rec;
}

JacobiState jacobi_evolve(const SurfaceMetric& metric, UnitTangent v0, double J0, double dJ0, double T,
                          double dt) {
  const int n = step_count(T, dt);
  GeodesicIntegrator flow(metric, v0, J0, dJ0);
  const bool check = J0 == 0.0 && dJ0 == 1.0;
  const double h = n > 0 ? T / n : dt;
  for (int k = 0; k < n; ++k) {
    flow.step(h);
    if (check && !(flow.jacobi() > 0.0)) {
      throw Error(ErrorKind::ConjugatePoint, "Jacobi field vanished at t = " + std::to_string(flow.time()));
    }
  }
  return {flow.jacobi(), flow.jacobi_derivative(), n > 0 ? flow.time() : 0.0};
}

std::vector<double> riccati_backward(std::span<const double> curvature, double dt) {
  if (curvature.size() < 3 || curvature.size() % 2 == 0) {
    throw Error(ErrorKind::Domain, "riccati_backward needs an odd number (>= 3) of curvature samples");
  }
  const std::size_t steps = (curvature.size() - 1) / 2;
  const double H = 2.0 * dt;
  // In reverse time s = t_end - t: dU/ds = -(U^2 + K).
  auto f = [](double u, double k) { return -(u * u + k); };
  std::vector<double> u(steps + 1);
  double value = 0.0;
  u[steps] = value;
  for (std::size_t m = steps; m > 0; --m) {
    const double k_start = curvature[2 * m];
    const double k_mid = curvature[2 * m - 1];
    const double k_end = curvature[2 * m - 2];
    const double k1 = f(value, k_start);
    const double k2 = f(value + 0.5 * H * k1, k_mid);
    const double k3 = f(value + 0.5 * H * k2, k_mid);
    const double k4 = f(value + H * k3, k_end);
    value += H / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(value)) throw Error(ErrorKind::NumericFailure, "Riccati solution diverged");
    u[m - 1] = value;
  }
  return u;
}

RiccatiLimit riccati_limit_curvature(const SurfaceMetric& metric, UnitTangent v, double T, double dt) {
  if (!(T > 0.0)) throw Error(ErrorKind::Domain, "riccati horizon must be positive");
  // Even number of steps to T so both solves share the sampling.
  int half = step_count(T, dt);
  if (half % 2 == 1) ++half;
  const double h = T / half;
  const int n = 2 * half;
  std::vector<double> k(static_cast<std::size_t>(n) + 1);
  GeodesicIntegrator flow(metric, v);
  k[0] = flow.curvature();
  for (int i = 1; i <= n; ++i) {
    flow.step(h);
    k[static_cast<std::size_t>(i)] = flow.curvature();
  }
  const auto full = riccati_backward(k, h);
  const auto shorter = riccati_backward(std::span<const double>(k).first(static_cast<std::size_t>(half) + 1), h);

  RiccatiLimit out;
  out.value = full[0];
  out.doubling_change = std::abs(full[0] - shorter[0]);
  const double H = 2.0 * h;
  out.derivative = (-3.0 * full[0] + 4.0 * full[1] - full[2]) / (2.0 * H);
  const auto [lo, hi] = std::minmax_element(k.begin(), k.end());
  out.min_neg_curvature = -*hi;
  out.max_neg_curvature = -*lo;
  if (out.doubling_change >= 1e-8) {
    throw Error(ErrorKind::NumericFailure,
                "Riccati limit did not stabilize under horizon doubling (change " +
                    std::to_string(out.doubling_change) + ")");
  }
  return out;
}

VolumeSweep volume_sweep(const SurfaceMetric& metric, Point x, double t_max, int n_dirs, double dt, int stride) {
  require_in_disk(x, "volume_sweep basepoint");
  if (n_dirs < 8) throw Error(ErrorKind::Domain, "volume_sweep needs at least 8 directions");
  if (stride < 1) throw Error(ErrorKind::Domain, "volume_sweep stride must be >= 1");
  const int n = step_count(t_max, dt);
  const double h = n > 0 ? t_max / n : dt;

  std::vector<int> sample_steps;
  for (int k = 0; k <= n; k += stride) sample_steps.push_back(k);
  if (sample_steps.back() != n) sample_steps.push_back(n);
  const std::size_t m = sample_steps.size();

  // Per-direction J and integral of J at the sample steps.
  std::vector<double> jac(static_cast<std::size_t>(n_dirs) * m);
  std::vector<double> integral(static_cast<std::size_t>(n_dirs) * m);
  parallel_for(static_cast<std::size_t>(n_dirs), [&](std::size_t i) {
    const double theta = kTwoPi * static_cast<double>(i) / n_dirs;
    GeodesicIntegrator flow(metric, {x, theta});
    double acc = 0.0;
    double prev = flow.jacobi();
    std::size_t next = 0;
    double* jrow = &jac[i * m];
    double* irow = &integral[i * m];
    if (sample_steps[next] == 0) {
      jrow[next] = prev;
      irow[next] = 0.0;
      ++next;
    }
    for (int k = 1; k <= n; ++k) {
      flow.step(h);
      const double cur = flow.jacobi();
      if (!(cur > 0.0)) {
        throw Error(ErrorKind::ConjugatePoint, "Jacobi field vanished in volume sweep");
      }
      acc += 0.5 * h * (prev + cur);
      prev = cur;
      if (next < m && sample_steps[next] == k) {
        jrow[next] = cur;
        irow[next] = acc;
        ++next;
      }
    }
  });

  VolumeSweep out;
  out.times.resize(m);
  out.sphere.assign(m, 0.0);
  out.ball.assign(m, 0.0);
  const double w = kTwoPi / n_dirs;
  for (std::size_t s = 0; s < m; ++s) out.times[s] = sample_steps[s] * h;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n_dirs); ++i) {
    for (std::size_t s = 0; s < m; ++s) {
      out.sphere[s] += w * jac[i * m + s];
      out.ball[s] += w * integral[i * m + s];
    }
  }
  return out;
}

double sphere_area(const SurfaceMetric& metric, Point x, double t, int n_dirs, double dt) {
  if (t == 0.0) return 0.0;
  const int n = std::max(1, step_count(t, dt));
  return volume_sweep(metric, x, t, n_dirs, dt, n).sphere.back();
}

double ball_volume(const SurfaceMetric& metric, Point x, double t, int n_dirs, double dt) {
  if (t == 0.0) return 0.0;
  const int n = std::max(1, step_count(t, dt));
  return volume_sweep(metric, x, t, n_dirs, dt, n).ball.back();
}

GrowthSeries sphere_series(const VolumeSweep& sweep) {
  GrowthSeries s;
  s.label = SeriesLabel::SphereArea;
  for (std::size_t i = 0; i < sweep.times.size(); ++i) s.samples.push_back({sweep.times[i], sweep.sphere[i]});
  return s;
}

GrowthSeries ball_series(const VolumeSweep& sweep) {
  GrowthSeries s;
  s.label = SeriesLabel::BallVolume;
  for (std::size_t i = 0; i < sweep.times.size(); ++i) s.samples.push_back({sweep.times[i], sweep.ball[i]});
  return s;
}

}  // namespace horolab
