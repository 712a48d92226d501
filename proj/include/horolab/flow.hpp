#pragma once

// Geodesic flow on a conformal disk metric with the scalar Jacobi and
// Riccati equations along geodesics, and the sphere/ball volumes they give.

#include <span>
#include <vector>

#include "horolab/disk.hpp"
#include "horolab/series.hpp"
#include "horolab/surface_metric.hpp"

namespace horolab {

inline constexpr double kDefaultStep = 1e-3;

// Unit tangent vector at `base` whose Euclidean direction is `angle`; its
// coordinate vector is (cos, sin)/lambda(base).
struct UnitTangent {
  Point base;
  double angle = 0.0;
};

struct GeodesicSample {
  double t;
  Point base;
  double angle;
};

struct GeodesicRecord {
  double dt = kDefaultStep;
  std::vector<GeodesicSample> samples;
};

struct JacobiState {
  double J = 0.0;
  double dJ = 0.0;
  double t = 0.0;
};

// Fixed-step RK4 for (z, theta, J, J') with
//   z' = e^{i theta} / lambda,
//   theta' = Im(e^{-i theta} grad log lambda) / lambda,
//   J'' = -K J.
// The state is kept near the origin by isometries of the metric (recentred
// whenever |z| > kRecenterRadius); frame() maps local to global coordinates.
class GeodesicIntegrator {
 public:
  static constexpr double kRecenterRadius = 0.95;

  GeodesicIntegrator(const SurfaceMetric& metric, UnitTangent start, double J0 = 0.0, double dJ0 = 1.0);

  void step(double h);

  double time() const { return t_; }
  Point local_point() const { return Point::from(s_.z); }
  double local_angle() const { return s_.theta; }
  const Isometry& frame() const { return frame_; }
  Point global_point() const { return frame_.apply(local_point()); }
  double global_angle() const { return wrap_angle(s_.theta + frame_.angle_shift(s_.z)); }
  // Angular coordinate of the current point, accurate even when the point is
  // too close to the boundary circle to represent.
  double boundary_angle() const { return image_angle(frame_, local_point()); }

  double jacobi() const { return s_.J; }
  double jacobi_derivative() const { return s_.dJ; }
  // Curvature at the current point.
  double curvature() const { return k_; }

 private:
  struct State {
    Complex z;
    double theta;
    double J;
    double dJ;
  };

  State derivative(const State& s, double* curvature) const;

  const SurfaceMetric* metric_;
  State s_;
  Isometry frame_;
  double t_ = 0.0;
  double k_ = 0.0;
};

GeodesicRecord integrate_geodesic(const SurfaceMetric& metric, UnitTangent v0, double T,
                                  double dt = kDefaultStep);

// Throws ConjugatePoint when started from (0, 1) and J vanishes for t > 0.
JacobiState jacobi_evolve(const SurfaceMetric& metric, UnitTangent v0, double J0, double dJ0, double T,
                          double dt = kDefaultStep);

// Solves U' = U^2 + K backwards from U(t_end) = 0, where K[k] is the
// curvature at time k*dt (K.size() odd, at least 3). The horospherical branch
// attracts in reverse time. Returns U at times 0, 2dt, 4dt, ...
std::vector<double> riccati_backward(std::span<const double> curvature, double dt);

struct RiccatiLimit {
  double value = 0.0;       // U(v): mean curvature of the stable horocycle
  double derivative = 0.0;  // dU/dt along the flow at t = 0, from the trajectory
  double doubling_change = 0.0;
  double min_neg_curvature = 0.0;  // extremes of -K sampled along the geodesic
  double max_neg_curvature = 0.0;
};

// Integrates the geodesic to 2T, solves the reversed Riccati equation from T
// and from 2T, and certifies that the two answers agree to 1e-8.
RiccatiLimit riccati_limit_curvature(const SurfaceMetric& metric, UnitTangent v, double T = 20.0,
                                     double dt = kDefaultStep);

struct VolumeSweep {
  std::vector<double> times;
  std::vector<double> sphere;  // s_t(x)
  std::vector<double> ball;    // b_t(x)
};

// One Jacobi sweep per direction (J0 = 0, J0' = 1) out to t_max; sphere
// areas are the periodic trapezoid rule over directions, ball volumes add the
// composite trapezoid in time. Samples every `stride` steps.
VolumeSweep volume_sweep(const SurfaceMetric& metric, Point x, double t_max, int n_dirs,
                         double dt = kDefaultStep, int stride = 100);

double sphere_area(const SurfaceMetric& metric, Point x, double t, int n_dirs, double dt = kDefaultStep);
double ball_volume(const SurfaceMetric& metric, Point x, double t, int n_dirs, double dt = kDefaultStep);

GrowthSeries sphere_series(const VolumeSweep& sweep);
GrowthSeries ball_series(const VolumeSweep& sweep);

}  // namespace horolab
