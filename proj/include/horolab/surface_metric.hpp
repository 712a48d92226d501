#pragma once

// Conformal metrics g = lambda(z)^2 |dz|^2 on the open unit disk: the exact
// hyperbolic metric and group-invariant perturbations
//   lambda(z) = 2/(1-|z|^2) * exp(-eps * S(z)),
// where S is a compactly supported bump summed over the orbit of a centre.
// Curvature K = -lambda^-2 * Laplacian(log lambda).

#include <memory>
#include <vector>

#include "horolab/disk.hpp"
#include "horolab/fuchsian.hpp"

namespace horolab {

enum class MetricKind { Hyperbolic, Perturbed };

const char* to_string(MetricKind kind);

struct BumpSpec {
  double amplitude = 0.0;  // eps >= 0
  double radius = 0.3;     // r0, hyperbolic length
  Point center{};          // z0
};

// phi(r) = (1 - (r/r0)^2)^3 on [0, r0], zero beyond. C^2 at r0.
double bump_profile(double r, double r0);

// S(z) = sum over gamma of phi(d(z, gamma z0)); exactly invariant under the
// group. Orbit points near the origin are cached; other arguments are first
// reduced to the octagon.
class BumpField {
 public:
  BumpField(std::shared_ptr<const SurfaceGroup> group, double radius, Point center);

  double value(Point z) const;
  // S_u + i S_v
  Complex gradient(Point z) const;
  // Euclidean Laplacian by the 5-point stencil with step kLaplacianStep.
  // Truncation error is step^2/12 * (S_uuuu + S_vvvv), below 1e-7 for r0 >= 0.2.
  double laplacian(Point z) const;

  std::size_t cached_centres() const { return centres_.size(); }

  static constexpr double kLaplacianStep = 1e-4;
  // Points with |z| <= kDirectRadius are evaluated against the cache.
  static constexpr double kDirectRadius = 0.97;

 private:
  struct Centre {
    Complex c;
    double reach;       // (cosh r0 - 1)(1 - |c|^2)/2
    double one_minus;   // 1 - |c|^2
  };

  double direct_value(Complex z) const;
  Complex direct_gradient(Complex z) const;

  std::shared_ptr<const SurfaceGroup> group_;
  double radius_;
  std::vector<Centre> centres_;
};

// One-off evaluation of the invariant bump sum.
double invariant_bump_sum(const SurfaceGroup& group, Point z, double r0, Point z0);

class SurfaceMetric {
 public:
  struct Local {
    double lambda;
    Complex grad_log;  // d(log lambda)/du + i d(log lambda)/dv
    double curvature;
  };

  static SurfaceMetric hyperbolic();
  // Validates r0 < min_translation/2, eps >= 0 and K <= -1e-6 on a 200x200
  // grid over the octagon's bounding box; throws MetricInvalid otherwise.
  static SurfaceMetric perturbed(std::shared_ptr<const SurfaceGroup> group, BumpSpec bump);

  MetricKind kind() const { return kind_; }
  const BumpSpec& bump() const { return bump_; }
  const std::shared_ptr<const SurfaceGroup>& group() const { return group_; }
  // True when lambda coincides with the hyperbolic factor everywhere.
  bool hyperbolic_equivalent() const { return kind_ == MetricKind::Hyperbolic || bump_.amplitude == 0.0; }

  double conformal_factor(Point z) const;
  // Throws MetricInvalid if the computed value is positive.
  double curvature_at(Point z) const;
  // Factor, log-gradient and curvature at a point of moderate modulus
  // (|z| <= BumpField::kDirectRadius); used by the integrators.
  Local local(Point z) const;

  // max |lambda / lambda_hyp - 1|
  double factor_deviation() const;
  // Largest curvature over an n x n grid on the octagon's bounding box.
  double max_curvature_on_grid(int n) const;
  // Extremes of -K over an n x n grid (for comparison bounds).
  std::pair<double, double> neg_curvature_range(int n) const;

  // Moves the tangent (z, theta) by an isometry of this metric so that z is
  // near the origin; `frame` maps local to global coordinates and is updated.
  void recenter(Complex& z, double& theta, Isometry& frame) const;

 private:
  MetricKind kind_ = MetricKind::Hyperbolic;
  BumpSpec bump_;
  std::shared_ptr<const SurfaceGroup> group_;
  std::shared_ptr<const BumpField> field_;
};

// Distance for a perturbed metric by shooting geodesics from x: a coarse
// angular grid, then golden-section refinement of the closest approach to y.
double perturbed_distance(const SurfaceMetric& metric, Point x, Point y, double tol = 1e-9);

}  // namespace horolab
