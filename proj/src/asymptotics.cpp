#include "horolab/asymptotics.hpp"

#include <numbers>
#include <random>

#include "horolab/parallel.hpp"

namespace horolab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Portable uniform in [0, 1): std::uniform_real_distribution is not
// specified bit-for-bit across standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

EntropyEstimate entropy_fit(const GrowthSeries& series, double t1, double t2) {
  const double slack = 1e-9 * (1.0 + std::abs(t2));
  std::vector<double> ts, ys;
  for (const auto& s : series.samples) {
    if (s.t < t1 - slack || s.t > t2 + slack) continue;
    if (!(s.value > 0.0)) throw Error(ErrorKind::Domain, "entropy_fit needs positive values");
    ts.push_back(s.t);
    ys.push_back(std::log(s.value));
  }
  if (ts.size() < 5) throw Error(ErrorKind::Domain, "entropy_fit window holds fewer than 5 samples");
  const double n = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    my += ys[i];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    sty += (ts[i] - mt) * (ys[i] - my);
  }
  EntropyEstimate out;
  out.h = sty / stt;
  out.t1 = t1;
  out.t2 = t2;
  out.samples = ts.size();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out.fit_residual = std::max(out.fit_residual, std::abs(ys[i] - (my + out.h * (ts[i] - mt))));
  }
  return out;
}

EntropyEstimate entropy_fit(const GrowthSeries& series) {
  if (series.samples.empty()) throw Error(ErrorKind::Domain, "entropy_fit on an empty series");
  const double t_max = series.samples.back().t;
  return entropy_fit(series, 0.6 * t_max, t_max);
}

TrUAverage tr_u_average(const SurfaceMetric& metric, const SurfaceGroup& group, int n_geodesics, double T,
                        std::uint64_t seed, double dt) {
  if (n_geodesics < 1) throw Error(ErrorKind::Domain, "tr_u_average needs at least one geodesic");
  // Draw all start vectors first so results do not depend on scheduling.
  std::mt19937_64 rng(seed);
  const double cosh_max = std::cosh(group.circumradius);
  std::vector<UnitTangent> starts;
  starts.reserve(static_cast<std::size_t>(n_geodesics));
  while (starts.size() < static_cast<std::size_t>(n_geodesics)) {
    const double r = std::acosh(1.0 + uniform01(rng) * (cosh_max - 1.0));
    const double phi = kTwoPi * uniform01(rng);
    const double theta = kTwoPi * uniform01(rng);
    const Point z = Point::from(std::polar(std::tanh(0.5 * r), phi));
    if (!group.in_domain(z, 0.0)) continue;
    starts.push_back({z, theta});
  }

  std::vector<RiccatiLimit> limits(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { limits[i] = riccati_limit_curvature(metric, starts[i], T, dt); });

  TrUAverage out;
  out.geodesics = limits.size();
  out.min_value = INFINITY;
  out.max_value = -INFINITY;
  out.lower_bound = INFINITY;
  out.upper_bound = -INFINITY;
  for (const auto& l : limits) {
    out.first += l.value;
    out.second += -l.derivative + l.value * l.value;
    out.min_value = std::min(out.min_value, l.value);
    out.max_value = std::max(out.max_value, l.value);
    const double lo = std::sqrt(l.min_neg_curvature);
    const double hi = std::sqrt(l.max_neg_curvature);
    out.lower_bound = std::min(out.lower_bound, lo);
    out.upper_bound = std::max(out.upper_bound, hi);
    if (l.value < lo - 1e-6 || l.value > hi + 1e-6) out.comparison_holds = false;
  }
  out.first /= static_cast<double>(limits.size());
  out.second /= static_cast<double>(limits.size());
  return out;
}

RigidityDefect rigidity_defect(const SurfaceMetric& metric, Point x, double h, double R, int n_dirs, double T,
                               double dt) {
  const BoundaryMeasure nu = sphere_measure(metric, x, R, n_dirs, h, dt);
  const double mass = nu.mass();
  std::vector<double> terms(nu.atoms.size());
  parallel_for(terms.size(), [&](std::size_t i) {
    const Atom& a = nu.atoms[i];
    terms[i] = riccati_limit_curvature(metric, {x, a.direction}, T, dt).value * a.weight;
  });
  RigidityDefect out;
  for (double t : terms) out.integral += t;
  out.integral /= mass;
  out.defect = std::abs(h - out.integral);
  return out;
}

GaussBonnet gauss_bonnet_check(const SurfaceMetric& metric, const SurfaceGroup& group, int cells) {
  if (cells < 8) throw Error(ErrorKind::Domain, "gauss_bonnet_check needs at least 8 cells");
  const int per_side = std::max(1, static_cast<int>(std::lround(std::sqrt(cells / 8.0))));
  const double tanh_in = std::tanh(group.inradius);
  const double sector = std::numbers::pi / 4.0;
  const double dpsi = sector / per_side;

  // Sector k spans the triangle on side k, whose midpoint is at angle k pi/4.
  std::vector<double> integral(8 * per_side, 0.0), volume(8 * per_side, 0.0);
  parallel_for(integral.size(), [&](std::size_t idx) {
    const int k = static_cast<int>(idx) / per_side;
    const int a = static_cast<int>(idx) % per_side;
    const double offset = -0.5 * sector + (a + 0.5) * dpsi;
    const double psi = k * sector + offset;
    const double rho = std::atanh(tanh_in / std::cos(offset));
    const double dr = rho / per_side;
    for (int b = 0; b < per_side; ++b) {
      const double r = (b + 0.5) * dr;
      const Point z = Point::from(std::polar(std::tanh(0.5 * r), psi));
      const auto local = metric.local(z);
      // Metric area element relative to the hyperbolic one.
      const double ratio = local.lambda / hyperbolic_factor(z);
      const double dA = std::sinh(r) * dr * dpsi * ratio * ratio;
      integral[idx] += -local.curvature * dA;
      volume[idx] += dA;
    }
  });
  GaussBonnet out;
  for (std::size_t i = 0; i < integral.size(); ++i) {
    out.integral += integral[i];
    out.volume += volume[i];
  }
  out.cells = integral.size() * static_cast<std::size_t>(per_side);
  return out;
}

}  // namespace horolab
