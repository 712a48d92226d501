#include "horolab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace horolab {

BoundaryPoint hyperbolic_endpoint(UnitTangent v) {
  require_in_disk(v.base, "hyperbolic_endpoint");
  // The transvection to v.base has real positive derivative at 0.
  const Isometry t = Isometry::transvection(v.base);
  return BoundaryPoint::at(std::arg(t.apply(std::polar(1.0, v.angle))));
}

BoundaryPoint forward_endpoint(const SurfaceMetric& metric, UnitTangent v, double T, double dt) {
  if (!(T >= 10.0)) throw Error(ErrorKind::Domain, "forward_endpoint horizon must be >= 10");
  GeodesicIntegrator flow(metric, v);
  const int n = static_cast<int>(std::llround(T / dt));
  const double h = T / n;
  for (int k = 0; k < n; ++k) flow.step(h);
  const double first = flow.boundary_angle();
  for (int k = 0; k < n; ++k) flow.step(h);
  const double second = flow.boundary_angle();
  if (angle_gap(first, second) >= 1e-6) {
    throw Error(ErrorKind::NumericFailure, "forward endpoint moved under horizon doubling");
  }
  return BoundaryPoint::at(second);
}

BusemannValue busemann_closed(BoundaryPoint xi, Point q, Point p) {
  require_in_disk(q, "busemann q");
  require_in_disk(p, "busemann p");
  const Complex e = xi.z();
  const double value = std::log((1.0 - p.norm2()) * std::norm(q.z() - e) /
                                ((1.0 - q.norm2()) * std::norm(p.z() - e)));
  const double d = hyperbolic_distance(p, q);
  if (std::abs(value) > d + 1e-9 * (1.0 + d)) {
    throw Error(ErrorKind::NumericFailure, "Busemann bound |b| <= d(p, q) violated");
  }
  return {value, xi, q, p};
}

namespace {

// d(q, y) - d(p, y) for y near the boundary circle. The ratio of the two
// cosh values does not involve 1 - |y|^2 at leading order, so the result keeps
// full precision even where y itself carries only a few digits.
double distance_difference(Point q, Point p, Complex y) {
  const double e = 1.0 - std::norm(y);
  const double A = 2.0 * std::norm(q.z() - y) / (1.0 - q.norm2());
  const double B = 2.0 * std::norm(p.z() - y) / (1.0 - p.norm2());
  auto log_one_plus_tanh = [&](double X) {
    if (e <= 0.0) return std::log(2.0);
    const double c = 1.0 + X / e;
    return std::log1p(std::sqrt(std::max(0.0, 1.0 - 1.0 / (c * c))));
  };
  return std::log((e + A) / (e + B)) + log_one_plus_tanh(A) - log_one_plus_tanh(B);
}

}  // namespace

BusemannTrace busemann_numeric_trace(const SurfaceMetric& metric, UnitTangent from_p, Point q,
                                     const BusemannOptions& options) {
  require_in_disk(q, "busemann q");
  const Point p = from_p.base;
  const bool closed_distance = metric.hyperbolic_equivalent();
  const double cap = closed_distance ? options.max_horizon : std::min(options.max_horizon, 16.0);

  BusemannTrace trace;
  GeodesicIntegrator flow(metric, from_p);
  const double h = options.dt;
  double t_target = options.first_horizon;
  double prev = INFINITY;
  bool converged = false;
  while (t_target <= cap + 1e-12) {
    const int n = static_cast<int>(std::llround((t_target - flow.time()) / h));
    for (int k = 0; k < n; ++k) flow.step(h);
    double dist;
    if (closed_distance) {
      dist = flow.time() + distance_difference(q, p, flow.frame().apply(flow.local_point().z()));
    } else {
      dist = perturbed_distance(metric, q, flow.global_point(), 1e-10);
    }
    const double value = dist - flow.time();
    trace.sequence.emplace_back(flow.time(), value);
    if (value > prev + 1e-9) {
      throw Error(ErrorKind::NumericFailure, "Busemann sequence increased: distance oracle is inconsistent");
    }
    if (std::abs(value - prev) < options.tol) {
      converged = true;
      break;
    }
    prev = value;
    t_target *= 2.0;
  }
  if (!converged) throw Error(ErrorKind::NumericFailure, "Busemann limit did not converge within the horizon cap");

  const double value = trace.sequence.back().second;
  const double d = hyperbolic_distance(p, q);
  // The conformal factor never exceeds the hyperbolic one, so d_hyp bounds d_g.
  if (std::abs(value) > d + 1e-7 * (1.0 + d)) {
    throw Error(ErrorKind::NumericFailure, "Busemann bound |b| <= d(p, q) violated");
  }
  const BoundaryPoint xi = closed_distance ? hyperbolic_endpoint(from_p) : BoundaryPoint::at(flow.boundary_angle());
  trace.result = {value, xi, q, p};
  return trace;
}

BusemannValue busemann_numeric(const SurfaceMetric& metric, UnitTangent from_p, Point q,
                               const BusemannOptions& options) {
  return busemann_numeric_trace(metric, from_p, q, options).result;
}

Point connecting_geodesic_point(BoundaryPoint xi, BoundaryPoint eta, Point p, double s) {
  require_in_disk(p, "connecting_geodesic_point");
  if (angle_gap(xi.angle, eta.angle) < 1e-15) {
    throw Error(ErrorKind::Degenerate, "connecting geodesic needs distinct boundary points");
  }
  const Isometry to_p = Isometry::transvection(p);
  const Isometry from_p = to_p.inverse();
  const double a = std::arg(from_p.apply(xi.z()));
  const double b = std::arg(from_p.apply(eta.z()));
  const double half_gap = 0.5 * angle_gap(a, b);
  // Direction of the chord midpoint; for antipodal points any normal works.
  Complex mid = std::polar(1.0, a) + std::polar(1.0, b);
  const double mu = std::abs(mid) > 1e-300 ? std::arg(mid) : a + 0.5 * std::numbers::pi;
  const double rho = std::abs(std::cos(half_gap)) < 1e-300 ? 0.0 : (1.0 - std::sin(half_gap)) / std::cos(half_gap);
  const Point nearest = Point::from(std::polar(rho, mu));
  const double side = wrap_angle(a - mu) < std::numbers::pi ? 1.0 : -1.0;
  const double dir = mu + side * 0.5 * std::numbers::pi;
  const Point local = Isometry::transvection(nearest).apply(Point::from(std::polar(std::tanh(0.5 * s), dir)));
  return to_p.apply(local);
}

double gromov_product_at(BoundaryPoint xi, BoundaryPoint eta, Point p, Point q) {
  return -(busemann_closed(xi, q, p).value + busemann_closed(eta, q, p).value);
}

double gromov_product(const SurfaceMetric& metric, BoundaryPoint xi, BoundaryPoint eta, Point p) {
  if (!metric.hyperbolic_equivalent()) {
    throw Error(ErrorKind::Domain, "gromov_product is implemented for the hyperbolic metric only");
  }
  if (angle_gap(xi.angle, eta.angle) < 1e-15) {
    throw Error(ErrorKind::Degenerate, "gromov_product undefined for xi == eta");
  }
  return gromov_product_at(xi, eta, p, connecting_geodesic_point(xi, eta, p, 0.0));
}

}  // namespace horolab
