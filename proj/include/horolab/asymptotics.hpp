#pragma once

// Entropy fits of growth series and the dimension-two rigidity identities:
// averages of the horocycle curvature U, Gauss-Bonnet over the octagon, and
// Katok's ratio h^2 Vol / (-2 pi E).

#include <cstdint>

#include "horolab/measures.hpp"

namespace horolab {

struct EntropyEstimate {
  double h = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double fit_residual = 0.0;  // max |log value - fit| inside the window
  std::size_t samples = 0;
};

// Least-squares slope of log(value) against t over samples with t in [t1, t2].
EntropyEstimate entropy_fit(const GrowthSeries& series, double t1, double t2);
// Default window [0.6 t_max, t_max].
EntropyEstimate entropy_fit(const GrowthSeries& series);

struct TrUAverage {
  double first = 0.0;   // mean of U
  double second = 0.0;  // mean of -U' + U^2
  std::size_t geodesics = 0;
  double min_value = 0.0;
  double max_value = 0.0;
  // Riccati comparison: each U lies in [min sqrt(-K), max sqrt(-K)] along
  // its own geodesic; these are the loosest such bounds over the sample.
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool comparison_holds = true;
};

// Liouville sampling: base points uniform for hyperbolic area in the
// octagon, directions uniform, drawn from mt19937_64(seed).
TrUAverage tr_u_average(const SurfaceMetric& metric, const SurfaceGroup& group, int n_geodesics, double T,
                        std::uint64_t seed, double dt = kDefaultStep);

struct RigidityDefect {
  double defect = 0.0;  // |h - sum_i U(x, xi_i) mubar_i|
  double integral = 0.0;
};

RigidityDefect rigidity_defect(const SurfaceMetric& metric, Point x, double h, double R, int n_dirs,
                               double T = 20.0, double dt = kDefaultStep);

struct GaussBonnet {
  double integral = 0.0;  // int_F -K dVol
  double volume = 0.0;    // Vol(F) in the metric
  std::size_t cells = 0;
};

// Midpoint rule in geodesic polar coordinates on the eight triangles
// (origin, vertex, vertex) of the octagon, about `cells` cells in total.
GaussBonnet gauss_bonnet_check(const SurfaceMetric& metric, const SurfaceGroup& group, int cells = 10000);

inline double katok_identity(double h, double volume, double euler = -2.0) {
  return h * h * volume / (-2.0 * 3.14159265358979323846 * euler);
}

// G_x(R) = s_R(x) e^{-hR}.
inline double growth_normalized(double sphere, double h, double R) { return sphere * std::exp(-h * R); }

}  // namespace horolab
