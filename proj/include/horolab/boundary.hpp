#pragma once

// The circle at infinity: forward endpoints of geodesics, Busemann
// functions b_xi(q, p) = lim_t d(q, c_{p,xi}(t)) - t, and the Gromov product.

#include <vector>

#include "horolab/disk.hpp"
#include "horolab/flow.hpp"
#include "horolab/surface_metric.hpp"

namespace horolab {

struct BoundaryPoint {
  double angle = 0.0;  // in [0, 2pi)

  static BoundaryPoint at(double angle) { return {wrap_angle(angle)}; }
  Complex z() const { return std::polar(1.0, angle); }
};

struct BusemannValue {
  double value = 0.0;
  BoundaryPoint xi;
  Point q;
  Point p;
};

// Closed-form endpoint of the hyperbolic geodesic through v.
BoundaryPoint hyperbolic_endpoint(UnitTangent v);

// Integrates to T and to 2T; the angles must agree to 1e-6 (else
// NumericFailure). Returns the 2T angle.
BoundaryPoint forward_endpoint(const SurfaceMetric& metric, UnitTangent v, double T = 12.0,
                               double dt = kDefaultStep);

// log[(1-|p|^2)|q-xi|^2 / ((1-|q|^2)|p-xi|^2)] on the hyperbolic disk.
BusemannValue busemann_closed(BoundaryPoint xi, Point q, Point p);

struct BusemannOptions {
  double tol = 1e-8;
  double first_horizon = 4.0;
  // Horizon cap; perturbed metrics are limited to 16 because points further
  // out cannot be placed in disk coordinates for the shooting solver.
  double max_horizon = 64.0;
  double dt = kDefaultStep;
};

struct BusemannTrace {
  BusemannValue result;
  std::vector<std::pair<double, double>> sequence;  // (t, d(q, c(t)) - t)
};

// Evaluates d(q, c(t)) - t for t = 4, 8, 16, ... along the geodesic leaving
// p in the given direction until successive values differ by < tol. The
// sequence must be nonincreasing up to 1e-9, and the result must respect
// |b| <= d(p, q); violations raise NumericFailure.
BusemannTrace busemann_numeric_trace(const SurfaceMetric& metric, UnitTangent from_p, Point q,
                                     const BusemannOptions& options = {});
BusemannValue busemann_numeric(const SurfaceMetric& metric, UnitTangent from_p, Point q,
                               const BusemannOptions& options = {});

// Point on the geodesic joining eta to xi at signed arc length s (towards
// xi) from the point of that geodesic nearest to p.
Point connecting_geodesic_point(BoundaryPoint xi, BoundaryPoint eta, Point p, double s);

// -(b_xi(q, p) + b_eta(q, p)) for the given q on the connecting geodesic.
double gromov_product_at(BoundaryPoint xi, BoundaryPoint eta, Point p, Point q);

// Gromov product on the hyperbolic metric (Domain error for perturbed metrics
// with eps > 0; Degenerate if xi == eta).
double gromov_product(const SurfaceMetric& metric, BoundaryPoint xi, BoundaryPoint eta, Point p);

}  // namespace horolab
