#include "horolab/disk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "horolab/error.hpp"

namespace horolab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::MetricInvalid: return "metric-invalid";
    case ErrorKind::NumericFailure: return "numeric-failure";
    case ErrorKind::Horizon: return "horizon";
    case ErrorKind::ConjugatePoint: return "conjugate-point";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

void require_in_disk(Point p, const char* what) {
  if (!(std::isfinite(p.u) && std::isfinite(p.v)) || !in_open_disk(p)) {
    std::ostringstream msg;
    msg << what << ": point (" << p.u << ", " << p.v << ") is outside the open unit disk";
    throw Error(ErrorKind::Domain, msg.str());
  }
}

double cosh_distance(Point x, Point y) {
  const double dx = x.u - y.u;
  const double dy = x.v - y.v;
  return 1.0 + 2.0 * (dx * dx + dy * dy) / ((1.0 - x.norm2()) * (1.0 - y.norm2()));
}

double hyperbolic_distance(Point x, Point y) {
  // sinh(d/2) = |x - y| / sqrt((1-|x|^2)(1-|y|^2)) keeps precision for small d.
  const double chord = std::hypot(x.u - y.u, x.v - y.v);
  return 2.0 * std::asinh(chord / std::sqrt((1.0 - x.norm2()) * (1.0 - y.norm2())));
}

double hyperbolic_factor(Point z) { return 2.0 / (1.0 - z.norm2()); }

Isometry::Isometry(Complex a, Complex b) {
  const double det = std::norm(a) - std::norm(b);
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw Error(ErrorKind::Domain, "isometry coefficients must satisfy |a| > |b|");
  }
  const double s = 1.0 / std::sqrt(det);
  a_ = a * s;
  b_ = b * s;
}

Isometry Isometry::translation(double angle, double length) {
  return {Complex(std::cosh(0.5 * length), 0.0), std::polar(std::sinh(0.5 * length), angle),
          Unchecked{}};
}

Isometry Isometry::transvection(Point target) {
  const double s = 1.0 / std::sqrt(1.0 - target.norm2());
  return {Complex(s, 0.0), target.z() * s, Unchecked{}};
}

Isometry Isometry::rotation(double angle) {
  return {std::polar(1.0, 0.5 * angle), Complex(0.0, 0.0), Unchecked{}};
}

Complex Isometry::apply(Complex z) const {
  return (a_ * z + b_) / (std::conj(b_) * z + std::conj(a_));
}

double Isometry::angle_shift(Complex z) const {
  return -2.0 * std::arg(std::conj(b_) * z + std::conj(a_));
}

double Isometry::stretch(Complex z) const {
  return 1.0 / std::norm(std::conj(b_) * z + std::conj(a_));
}

bool Isometry::approx_equal(const Isometry& other, double tol) const {
  const double plus = std::max(std::abs(a_ - other.a_), std::abs(b_ - other.b_));
  const double minus = std::max(std::abs(a_ + other.a_), std::abs(b_ + other.b_));
  return std::min(plus, minus) <= tol;
}

double Isometry::distance_from_identity() const {
  const double plus = std::max(std::abs(a_ - 1.0), std::abs(b_));
  const double minus = std::max(std::abs(a_ + 1.0), std::abs(b_));
  return std::min(plus, minus);
}

Isometry operator*(const Isometry& g, const Isometry& h) {
  const Complex a = g.a_ * h.a_ + g.b_ * std::conj(h.b_);
  const Complex b = g.a_ * h.b_ + g.b_ * std::conj(h.a_);
  // Renormalize the drift of |a|^2 - |b|^2 away from 1, but only while the
  // determinant can be computed accurately; for large |a| the cancellation
  // would inject more error than it removes.
  if (std::norm(a) > 16.0) return {a, b, Isometry::Unchecked{}};
  const double det = std::norm(a) - std::norm(b);
  const double s = 1.0 / std::sqrt(det);
  return {a * s, b * s, Isometry::Unchecked{}};
}

double cosh_distance_to_image(Point w, const Isometry& g, Point z) {
  const Complex zc = z.z();
  const Complex num = g.a() * zc + g.b();
  const Complex den = std::conj(g.b()) * zc + std::conj(g.a());
  return 1.0 + 2.0 * std::norm(w.z() * den - num) / ((1.0 - w.norm2()) * (1.0 - z.norm2()));
}

double image_angle(const Isometry& g, Point z) {
  const Complex zc = z.z();
  const Complex num = g.a() * zc + g.b();
  const Complex den = std::conj(g.b()) * zc + std::conj(g.a());
  return wrap_angle(std::arg(num) - std::arg(den));
}

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(angle, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

double angle_gap(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, 2.0 * std::numbers::pi - d);
}

}  // namespace horolab
