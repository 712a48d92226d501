#pragma once

// Discrete Patterson-Sullivan type measures nu_p = e^{-hR} * (sphere of
// radius R pushed to the boundary), and the Margulis function built from them.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "horolab/boundary.hpp"
#include "horolab/fuchsian.hpp"

namespace horolab {

struct Atom {
  BoundaryPoint xi;
  double weight = 0.0;
  double direction = 0.0;  // initial angle of the geodesic from the basepoint
};

struct BoundaryMeasure {
  Point basepoint;
  double radius = 0.0;
  double entropy = 1.0;
  std::vector<Atom> atoms;  // sorted by xi.angle

  double mass() const;
};

// n_dirs equally spaced directions at p; atom weight e^{-hR} J(R) 2pi/n.
// Endpoints are closed form on hyperbolic-equivalent metrics and integrated
// (with a doubling certificate) otherwise.
BoundaryMeasure sphere_measure(const SurfaceMetric& metric, Point p, double R, int n_dirs, double h,
                               double dt = kDefaultStep);

// max over atoms of |log(d nu_b / d nu_a)(xi) - expected(xi)|. Densities are
// atom weight over centred cell width; nu_a is interpolated in log density.
// Raises Degenerate if some atom of nu_b has no atom of nu_a within two grid
// steps.
template <class Expected>
double max_log_density_deviation(const BoundaryMeasure& a, const BoundaryMeasure& b, Expected&& expected);

struct CocycleCheck {
  double max_deviation = 0.0;
  std::size_t atoms = 0;
};

// Checks d nu_q / d nu_p (xi) = exp(-h b_xi(q, p)) on hyperbolic-equivalent metrics.
CocycleCheck ps_cocycle_check(const BoundaryMeasure& nu_p, const BoundaryMeasure& nu_q);

struct ShadowEstimate {
  double ratio = 0.0;  // nu_p(shadow) * e^{h d(p, x)}
  double shadow_mass = 0.0;
  double distance = 0.0;
  std::size_t atoms = 0;
};

// Shadow from p of the hyperbolic ball B(x, rho), measured with nu_p.
ShadowEstimate shadow_ratio(const BoundaryMeasure& nu_p, Point x, double rho);

struct MargulisEstimate {
  Point x;
  double c = 0.0;       // h b_t(x) e^{-h t} at t_max
  double t_max = 0.0;
  double cauchy_gap = 0.0;  // |ratio(t_max) - ratio(0.8 t_max)|
  double sphere_mass = 0.0;  // s_t e^{-h t} at t_max, the mass of nu_x
};

// Uses the last sample and the sample nearest 0.8 t_max.
MargulisEstimate margulis_from_sweep(const VolumeSweep& sweep, Point x, double h);

MargulisEstimate margulis_c(const SurfaceMetric& metric, Point x, double h, double t_max, int n_dirs,
                            double dt = kDefaultStep);

// Integral of exp(-h b_xi(y, x)) against nu_x / |nu_x|, i.e. c(y)/c(x).
double normalized_busemann_integral(const SurfaceMetric& metric, const BoundaryMeasure& nu_x, Point y);

struct MargulisPair {
  double value = 0.0;  // |nu_x| * normalized integral = |nu_x| * |nu_y|
  double mass_x = 0.0;
  double normalized = 0.0;
};

MargulisPair margulis_c_xy(const SurfaceMetric& metric, Point x, Point y, double h, double R, int n_dirs,
                           double dt = kDefaultStep);

struct KappaCalibration {
  double kappa = 0.0;
  double c_xy = 0.0;
  std::vector<double> times;
  std::vector<double> kappa_sq;  // h a_t e^{-h t} / c(x, y) at each t
};

// kappa^2 = mean of h a_t e^{-h t} / c(x, y) over the sample times; only
// defined where the orbit counts are available (hyperbolic-equivalent).
KappaCalibration calibrate_kappa(const SurfaceMetric& metric, const SurfaceGroup& group, Point x, Point y,
                                 double h, double R, int n_dirs, std::vector<double> times = {11.0, 12.0, 13.0},
                                 double dt = kDefaultStep);

std::string measure_to_json(const BoundaryMeasure& m);
BoundaryMeasure measure_from_json(const std::string& text);

// ---------------------------------------------------------------------------

namespace detail {
struct DensityTable {
  std::vector<double> angle;
  std::vector<double> log_density;
};
DensityTable density_table(const BoundaryMeasure& m);
double interpolate_log_density(const DensityTable& t, double angle, double max_gap);
}  // namespace detail

template <class Expected>
double max_log_density_deviation(const BoundaryMeasure& a, const BoundaryMeasure& b, Expected&& expected) {
  const auto ta = detail::density_table(a);
  const auto tb = detail::density_table(b);
  const double step = 2.0 * 6.283185307179586 / static_cast<double>(std::max<std::size_t>(a.atoms.size(), 1));
  double worst = 0.0;
  for (std::size_t i = 0; i < tb.angle.size(); ++i) {
    const double la = detail::interpolate_log_density(ta, tb.angle[i], step);
    worst = std::max(worst, std::abs(tb.log_density[i] - la - expected(tb.angle[i])));
  }
  return worst;
}

}  // namespace horolab
