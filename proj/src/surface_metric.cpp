#include "horolab/surface_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace horolab {

const char* to_string(MetricKind kind) {
  return kind == MetricKind::Hyperbolic ? "hyperbolic" : "perturbed";
}

double bump_profile(double r, double r0) {
  if (r >= r0) return 0.0;
  const double s = 1.0 - (r / r0) * (r / r0);
  return s * s * s;
}

BumpField::BumpField(std::shared_ptr<const SurfaceGroup> group, double radius, Point center)
    : group_(std::move(group)), radius_(radius) {
  require_in_disk(center, "bump centre");
  if (!(radius > 0.0)) throw Error(ErrorKind::Domain, "bump radius must be positive");
  // Every orbit point whose support can meet the disc |z| <= kDirectRadius.
  const double reach = 2.0 * std::atanh(kDirectRadius) + radius + 0.05;
  OrbitOptions opts;
  opts.budget = 1'000'000;
  const OrbitBall ball = enumerate_orbit(*group_, Point{}, center, reach, opts);
  const double cr = std::cosh(radius) - 1.0;
  centres_.reserve(ball.entries.size());
  for (const auto& e : ball.entries) {
    const double om = 1.0 - e.point.norm2();
    centres_.push_back({e.point.z(), 0.5 * cr * om, om});
  }
}

double BumpField::direct_value(Complex z) const {
  const double omz = 1.0 - std::norm(z);
  double sum = 0.0;
  for (const auto& c : centres_) {
    const double q = std::norm(z - c.c);
    if (q >= c.reach * omz) continue;
    const double delta = 2.0 * q / (omz * c.one_minus);
    const double d = 2.0 * std::asinh(std::sqrt(0.5 * delta));
    sum += bump_profile(d, radius_);
  }
  return sum;
}

Complex BumpField::direct_gradient(Complex z) const {
  const double omz = 1.0 - std::norm(z);
  Complex grad{0.0, 0.0};
  const double r0sq = radius_ * radius_;
  for (const auto& c : centres_) {
    const Complex diff = z - c.c;
    const double q = std::norm(diff);
    if (q >= c.reach * omz) continue;
    const double delta = 2.0 * q / (omz * c.one_minus);
    const double d = 2.0 * std::asinh(std::sqrt(0.5 * delta));
    const double s = 1.0 - d * d / r0sq;
    if (s <= 0.0) continue;
    // phi'(d) / sinh(d), finite at d = 0
    const double d_over_sinh = d < 1e-8 ? 1.0 : d / std::sinh(d);
    const double factor = -6.0 / r0sq * s * s * d_over_sinh;
    // gradient of delta = 2|z-c|^2 / ((1-|z|^2)(1-|c|^2))
    const Complex grad_delta = (2.0 / c.one_minus) * (2.0 * diff / omz + (2.0 * q / (omz * omz)) * z);
    grad += factor * grad_delta;
  }
  return grad;
}

double BumpField::value(Point z) const {
  require_in_disk(z, "bump sum");
  if (z.norm2() <= kDirectRadius * kDirectRadius) return direct_value(z.z());
  return direct_value(reduce_to_domain(*group_, z).point.z());
}

Complex BumpField::gradient(Point z) const {
  require_in_disk(z, "bump gradient");
  if (z.norm2() <= kDirectRadius * kDirectRadius) return direct_gradient(z.z());
  // S = S o gamma, so grad S(z) = conj(gamma'(z)) * grad S(gamma z).
  const Reduction r = reduce_to_domain(*group_, z);
  const Complex den = std::conj(r.isometry.b()) * z.z() + std::conj(r.isometry.a());
  const Complex deriv = 1.0 / (den * den);
  return std::conj(deriv) * direct_gradient(r.point.z());
}

double BumpField::laplacian(Point z) const {
  constexpr double h = kLaplacianStep;
  const double centre = value(z);
  const double sum = value({z.u + h, z.v}) + value({z.u - h, z.v}) + value({z.u, z.v + h}) +
                     value({z.u, z.v - h});
  return (sum - 4.0 * centre) / (h * h);
}

double invariant_bump_sum(const SurfaceGroup& group, Point z, double r0, Point z0) {
  if (!(r0 < 0.5 * group.min_translation())) {
    throw Error(ErrorKind::Domain, "bump radius must be below half the minimal translation length");
  }
  const BumpField field(std::make_shared<const SurfaceGroup>(group), r0, z0);
  return field.value(z);
}

SurfaceMetric SurfaceMetric::hyperbolic() { return SurfaceMetric{}; }

SurfaceMetric SurfaceMetric::perturbed(std::shared_ptr<const SurfaceGroup> group, BumpSpec bump) {
  if (!group) throw Error(ErrorKind::Domain, "perturbed metric needs a surface group");
  if (!(bump.amplitude >= 0.0) || !std::isfinite(bump.amplitude)) {
    throw Error(ErrorKind::Domain, "perturbation amplitude must be >= 0");
  }
  if (!(bump.radius > 0.0 && bump.radius < 0.5 * group->min_translation())) {
    throw Error(ErrorKind::Domain, "bump radius must lie in (0, min_translation/2)");
  }
  SurfaceMetric m;
  m.kind_ = MetricKind::Perturbed;
  m.bump_ = bump;
  m.group_ = group;
  m.field_ = std::make_shared<const BumpField>(group, bump.radius, bump.center);
  if (bump.amplitude > 0.0) {
    const double kmax = m.max_curvature_on_grid(200);
    if (kmax > -1e-6) {
      throw Error(ErrorKind::MetricInvalid,
                  "perturbation too large: curvature reaches " + std::to_string(kmax));
    }
  }
  return m;
}

double SurfaceMetric::conformal_factor(Point z) const {
  require_in_disk(z, "conformal_factor");
  const double hyp = hyperbolic_factor(z);
  if (kind_ == MetricKind::Hyperbolic) return hyp;
  return hyp * std::exp(-bump_.amplitude * field_->value(z));
}

double SurfaceMetric::curvature_at(Point z) const {
  require_in_disk(z, "curvature_at");
  if (kind_ == MetricKind::Hyperbolic) return -1.0;
  // K is invariant, and the stencil is best conditioned near the origin.
  const Point zr = z.norm2() <= BumpField::kDirectRadius * BumpField::kDirectRadius
                       ? z
                       : reduce_to_domain(*group_, z).point;
  const Local l = local(zr);
  if (l.curvature > 1e-12) {
    throw Error(ErrorKind::MetricInvalid, "positive curvature " + std::to_string(l.curvature));
  }
  return l.curvature;
}

SurfaceMetric::Local SurfaceMetric::local(Point z) const {
  const double om = 1.0 - z.norm2();
  const double hyp = 2.0 / om;
  const Complex hyp_grad = (2.0 / om) * z.z();
  if (kind_ == MetricKind::Hyperbolic) return {hyp, hyp_grad, -1.0};
  const double eps = bump_.amplitude;
  const double s = field_->value(z);
  const double lambda = hyp * std::exp(-eps * s);
  if (eps == 0.0) return {lambda, hyp_grad, -1.0};
  const Complex grad = hyp_grad - eps * field_->gradient(z);
  const double lap = field_->laplacian(z);
  // Laplacian(log lambda) = lambda_hyp^2 - eps * Laplacian(S)
  const double k = -(hyp * hyp - eps * lap) / (lambda * lambda);
  return {lambda, grad, k};
}

double SurfaceMetric::factor_deviation() const {
  if (kind_ == MetricKind::Hyperbolic) return 0.0;
  // S ranges over [0, max phi] = [0, 1] when supports are disjoint; bounded
  // by the number of overlapping supports otherwise.
  double smax = 0.0;
  const double r_e = std::tanh(0.5 * group_->circumradius);
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point z{-r_e + 2.0 * r_e * (i + 0.5) / n, -r_e + 2.0 * r_e * (j + 0.5) / n};
      if (!in_open_disk(z)) continue;
      smax = std::max(smax, field_->value(z));
    }
  }
  smax = std::max(smax, field_->value(bump_.center));
  return 1.0 - std::exp(-bump_.amplitude * smax);
}

double SurfaceMetric::max_curvature_on_grid(int n) const {
  if (kind_ == MetricKind::Hyperbolic) return -1.0;
  const double r_e = std::tanh(0.5 * group_->circumradius);
  double kmax = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point z{-r_e + 2.0 * r_e * i / (n - 1), -r_e + 2.0 * r_e * j / (n - 1)};
      if (z.norm2() >= 0.999 * 0.999) continue;
      const Point zr = z.norm2() <= BumpField::kDirectRadius * BumpField::kDirectRadius
                           ? z
                           : reduce_to_domain(*group_, z).point;
      kmax = std::max(kmax, local(zr).curvature);
    }
  }
  return kmax;
}

std::pair<double, double> SurfaceMetric::neg_curvature_range(int n) const {
  if (kind_ == MetricKind::Hyperbolic) return {1.0, 1.0};
  const double r_e = std::tanh(0.5 * group_->circumradius);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point z{-r_e + 2.0 * r_e * i / (n - 1), -r_e + 2.0 * r_e * j / (n - 1)};
      if (z.norm2() >= 0.999 * 0.999) continue;
      const Point zr = z.norm2() <= BumpField::kDirectRadius * BumpField::kDirectRadius
                           ? z
                           : reduce_to_domain(*group_, z).point;
      const double negk = -local(zr).curvature;
      lo = std::min(lo, negk);
      hi = std::max(hi, negk);
    }
  }
  return {lo, hi};
}

void SurfaceMetric::recenter(Complex& z, double& theta, Isometry& frame) const {
  if (kind_ == MetricKind::Hyperbolic) {
    const Isometry to_local = Isometry::transvection(Point::from(z)).inverse();
    theta += to_local.angle_shift(z);
    frame = frame * to_local.inverse();
    z = Complex(0.0, 0.0);
    return;
  }
  const Reduction r = reduce_to_domain(*group_, Point::from(z));
  theta += r.isometry.angle_shift(z);
  frame = frame * r.isometry.inverse();
  z = r.point.z();
}

}  // namespace horolab
