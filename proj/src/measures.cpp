#include "horolab/measures.hpp"

#include <json.hpp>

#include <numbers>
#include <numeric>

#include "horolab/parallel.hpp"

namespace horolab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int steps_for(double t, double dt) { return std::max(1, static_cast<int>(std::llround(t / dt))); }

}  // namespace

double BoundaryMeasure::mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.weight;
  return m;
}

BoundaryMeasure sphere_measure(const SurfaceMetric& metric, Point p, double R, int n_dirs, double h, double dt) {
  require_in_disk(p, "sphere_measure basepoint");
  if (n_dirs < 8) throw Error(ErrorKind::Domain, "sphere_measure needs at least 8 directions");
  if (!(R > 0.0)) throw Error(ErrorKind::Domain, "sphere_measure radius must be positive");
  const bool closed = metric.hyperbolic_equivalent();
  const int n = steps_for(R, dt);
  const double step = R / n;
  const double scale = std::exp(-h * R) * kTwoPi / n_dirs;

  BoundaryMeasure out;
  out.basepoint = p;
  out.radius = R;
  out.entropy = h;
  out.atoms.resize(static_cast<std::size_t>(n_dirs));
  parallel_for(out.atoms.size(), [&](std::size_t i) {
    const double theta = kTwoPi * static_cast<double>(i) / n_dirs;
    GeodesicIntegrator flow(metric, {p, theta});
    for (int k = 0; k < n; ++k) flow.step(step);
    if (!(flow.jacobi() > 0.0)) throw Error(ErrorKind::ConjugatePoint, "Jacobi field vanished in sphere_measure");
    Atom& atom = out.atoms[i];
    atom.direction = theta;
    atom.weight = scale * flow.jacobi();
    if (closed) {
      atom.xi = hyperbolic_endpoint({p, theta});
    } else {
      // Continue the same trajectory to T and 2T for the endpoint certificate.
      const double T = std::max(12.0, R);
      const int m = steps_for(T - R, dt);
      for (int k = 0; k < m; ++k) flow.step((T - R) / m);
      const double first = flow.boundary_angle();
      const int m2 = steps_for(T, dt);
      for (int k = 0; k < m2; ++k) flow.step(T / m2);
      const double second = flow.boundary_angle();
      if (angle_gap(first, second) >= 1e-6) {
        throw Error(ErrorKind::NumericFailure, "forward endpoint moved under horizon doubling");
      }
      atom.xi = BoundaryPoint::at(second);
    }
  });
  std::sort(out.atoms.begin(), out.atoms.end(),
            [](const Atom& a, const Atom& b) { return a.xi.angle < b.xi.angle; });
  return out;
}

namespace detail {

DensityTable density_table(const BoundaryMeasure& m) {
  const std::size_t n = m.atoms.size();
  if (n < 3) throw Error(ErrorKind::Domain, "density needs at least 3 atoms");
  DensityTable t;
  t.angle.resize(n);
  t.log_density.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = m.atoms[(i + n - 1) % n].xi.angle;
    const double next = m.atoms[(i + 1) % n].xi.angle;
    double width = 0.5 * wrap_angle(next - prev);
    if (!(width > 0.0)) throw Error(ErrorKind::Degenerate, "coincident atoms in boundary measure");
    t.angle[i] = m.atoms[i].xi.angle;
    t.log_density[i] = std::log(m.atoms[i].weight / width);
  }
  return t;
}

double interpolate_log_density(const DensityTable& t, double angle, double max_gap) {
  const std::size_t n = t.angle.size();
  const std::size_t j = static_cast<std::size_t>(std::upper_bound(t.angle.begin(), t.angle.end(), angle) -
                                                 t.angle.begin()) % n;
  const std::size_t i = (j + n - 1) % n;
  const double lo = wrap_angle(angle - t.angle[i]);
  const double hi = wrap_angle(t.angle[j] - angle);
  if (std::min(lo, hi) > max_gap) {
    throw Error(ErrorKind::Degenerate, "no nearby atom to pair with in density comparison");
  }
  const double span = lo + hi;
  if (span <= 0.0) return t.log_density[i];
  const double w = lo / span;
  return (1.0 - w) * t.log_density[i] + w * t.log_density[j];
}

}  // namespace detail

CocycleCheck ps_cocycle_check(const BoundaryMeasure& nu_p, const BoundaryMeasure& nu_q) {
  if (nu_p.atoms.size() != nu_q.atoms.size() || nu_p.entropy != nu_q.entropy) {
    throw Error(ErrorKind::Domain, "cocycle check needs measures built with the same n and h");
  }
  const double h = nu_p.entropy;
  const Point p = nu_p.basepoint;
  const Point q = nu_q.basepoint;
  CocycleCheck out;
  out.atoms = nu_q.atoms.size();
  out.max_deviation = max_log_density_deviation(nu_p, nu_q, [&](double angle) {
    return -h * busemann_closed(BoundaryPoint::at(angle), q, p).value;
  });
  return out;
}

ShadowEstimate shadow_ratio(const BoundaryMeasure& nu_p, Point x, double rho) {
  require_in_disk(x, "shadow centre");
  if (!(rho > 0.0)) throw Error(ErrorKind::Domain, "shadow radius must be positive");
  const Isometry to_origin = Isometry::transvection(nu_p.basepoint).inverse();
  const Complex w = to_origin.apply(x.z());
  const double r = hyperbolic_distance(Point{}, Point::from(w));
  const double dir = std::arg(w);
  const double sinh_rho = std::sinh(rho);

  ShadowEstimate out;
  out.distance = r;
  for (const auto& atom : nu_p.atoms) {
    bool inside;
    if (r <= rho) {
      inside = true;
    } else {
      const double phi = angle_gap(dir, std::arg(to_origin.apply(atom.xi.z())));
      // Right triangle: sinh(dist to ray) = sinh r sin phi when phi < pi/2.
      inside = phi < 0.5 * std::numbers::pi && std::sinh(r) * std::sin(phi) <= sinh_rho;
    }
    if (inside) {
      out.shadow_mass += atom.weight;
      ++out.atoms;
    }
  }
  if (out.atoms == 0) throw Error(ErrorKind::Degenerate, "shadow contains no atoms");
  out.ratio = out.shadow_mass * std::exp(nu_p.entropy * r);
  return out;
}

MargulisEstimate margulis_from_sweep(const VolumeSweep& sweep, Point x, double h) {
  if (sweep.times.size() < 2) throw Error(ErrorKind::Domain, "Margulis estimate needs at least two samples");
  const std::size_t last = sweep.times.size() - 1;
  const double t_early = 0.8 * sweep.times[last];
  std::size_t early = 0;
  for (std::size_t i = 0; i < last; ++i) {
    if (std::abs(sweep.times[i] - t_early) < std::abs(sweep.times[early] - t_early)) early = i;
  }
  auto ratio = [&](std::size_t i) { return h * sweep.ball[i] * std::exp(-h * sweep.times[i]); };

  MargulisEstimate out;
  out.x = x;
  out.t_max = sweep.times[last];
  out.c = ratio(last);
  out.cauchy_gap = std::abs(ratio(last) - ratio(early));
  out.sphere_mass = sweep.sphere[last] * std::exp(-h * sweep.times[last]);
  return out;
}

MargulisEstimate margulis_c(const SurfaceMetric& metric, Point x, double h, double t_max, int n_dirs, double dt) {
  if (!(t_max > 0.0)) throw Error(ErrorKind::Domain, "margulis_c horizon must be positive");
  const int n = steps_for(t_max, dt);
  const int n08 = static_cast<int>(std::llround(0.8 * n));
  // Sample exactly at 0.8 t_max and t_max.
  const int stride = std::max(1, std::gcd(n, n08));
  return margulis_from_sweep(volume_sweep(metric, x, t_max, n_dirs, dt, stride), x, h);
}

double normalized_busemann_integral(const SurfaceMetric& metric, const BoundaryMeasure& nu_x, Point y) {
  const double mass = nu_x.mass();
  if (!(mass > 0.0)) throw Error(ErrorKind::Degenerate, "boundary measure has no mass");
  const bool closed = metric.hyperbolic_equivalent();
  std::vector<double> terms(nu_x.atoms.size());
  parallel_for(terms.size(), [&](std::size_t i) {
    const Atom& a = nu_x.atoms[i];
    const double b = closed ? busemann_closed(a.xi, y, nu_x.basepoint).value
                            : busemann_numeric(metric, {nu_x.basepoint, a.direction}, y, {.tol = 1e-6}).value;
    terms[i] = std::exp(-nu_x.entropy * b) * a.weight;
  });
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum / mass;
}

MargulisPair margulis_c_xy(const SurfaceMetric& metric, Point x, Point y, double h, double R, int n_dirs, double dt) {
  require_in_disk(y, "margulis_c_xy y");
  const BoundaryMeasure nu = sphere_measure(metric, x, R, n_dirs, h, dt);
  MargulisPair out;
  out.mass_x = nu.mass();
  out.normalized = normalized_busemann_integral(metric, nu, y);
  out.value = out.mass_x * out.mass_x * out.normalized;
  return out;
}

KappaCalibration calibrate_kappa(const SurfaceMetric& metric, const SurfaceGroup& group, Point x, Point y, double h,
                                 double R, int n_dirs, std::vector<double> times, double dt) {
  if (!metric.hyperbolic_equivalent()) {
    throw Error(ErrorKind::Domain, "kappa calibration needs a hyperbolic-equivalent metric");
  }
  if (times.empty()) throw Error(ErrorKind::Domain, "kappa calibration needs sample times");
  KappaCalibration out;
  out.c_xy = margulis_c_xy(metric, x, y, h, R, n_dirs, dt).value;
  const GrowthSeries counts = count_series(group, x, y, times);
  out.times = times;
  double mean = 0.0;
  for (const auto& s : counts.samples) {
    const double k2 = h * s.value * std::exp(-h * s.t) / out.c_xy;
    out.kappa_sq.push_back(k2);
    mean += k2;
  }
  mean /= static_cast<double>(counts.samples.size());
  out.kappa = std::sqrt(mean);
  return out;
}

std::string measure_to_json(const BoundaryMeasure& m) {
  nlohmann::ordered_json j;
  j["basepoint"] = {m.basepoint.u, m.basepoint.v};
  j["radius"] = m.radius;
  j["entropy"] = m.entropy;
  auto& atoms = j["atoms"] = nlohmann::ordered_json::array();
  for (const auto& a : m.atoms) atoms.push_back({a.xi.angle, a.weight, a.direction});
  return j.dump();
}

BoundaryMeasure measure_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    BoundaryMeasure m;
    m.basepoint = {j.at("basepoint").at(0).get<double>(), j.at("basepoint").at(1).get<double>()};
    m.radius = j.at("radius").get<double>();
    m.entropy = j.at("entropy").get<double>();
    for (const auto& a : j.at("atoms")) {
      m.atoms.push_back({BoundaryPoint{a.at(0).get<double>()}, a.at(1).get<double>(), a.at(2).get<double>()});
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("bad measure JSON: ") + e.what());
  }
}

}  // namespace horolab
