#pragma once

// Poincare disk primitives: points, the hyperbolic distance, and the
// orientation-preserving isometries z -> (a z + b) / (conj(b) z + conj(a))
// normalized to |a|^2 - |b|^2 = 1.

#include <complex>

namespace horolab {

using Complex = std::complex<double>;

struct Point {
  double u = 0.0;
  double v = 0.0;

  Complex z() const { return {u, v}; }
  static Point from(Complex z) { return {z.real(), z.imag()}; }
  double norm2() const { return u * u + v * v; }
};

inline bool in_open_disk(Point p) { return p.norm2() < 1.0; }

// Throws Error(Domain) unless p lies in the open unit disk.
void require_in_disk(Point p, const char* what);

// 1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2)); avoids the arccosh for comparisons.
double cosh_distance(Point x, Point y);
double hyperbolic_distance(Point x, Point y);

// 2 / (1 - |z|^2)
double hyperbolic_factor(Point z);

class Isometry {
 public:
  Isometry() = default;
  // Rescales (a, b) so that |a|^2 - |b|^2 = 1; throws Domain if the pair
  // does not describe a disk automorphism.
  Isometry(Complex a, Complex b);

  static Isometry identity() { return {}; }
  // Hyperbolic translation by `length` along the diameter at `angle`.
  static Isometry translation(double angle, double length);
  // The transvection sending 0 to `target` with derivative at 0 real positive.
  static Isometry transvection(Point target);
  static Isometry rotation(double angle);

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  double det() const { return std::norm(a_) - std::norm(b_); }

  Complex apply(Complex z) const;
  Point apply(Point z) const { return Point::from(apply(z.z())); }
  // arg of the complex derivative at z: tangent angles rotate by this amount.
  double angle_shift(Complex z) const;
  // |derivative| at z
  double stretch(Complex z) const;

  Isometry inverse() const { return {std::conj(a_), -b_, Unchecked{}}; }

  // Equality as disk maps (a matrix and its negative act identically).
  bool approx_equal(const Isometry& other, double tol) const;
  // Max entry deviation from +-identity.
  double distance_from_identity() const;

  friend Isometry operator*(const Isometry& g, const Isometry& h);

 private:
  struct Unchecked {};
  Isometry(Complex a, Complex b, Unchecked) : a_(a), b_(b) {}

  Complex a_{1.0, 0.0};
  Complex b_{0.0, 0.0};
};

inline Point apply(const Isometry& g, Point z) { return g.apply(z); }
inline Isometry compose(const Isometry& g, const Isometry& h) { return g * h; }
inline Isometry inverse(const Isometry& g) { return g.inverse(); }

// cosh d(w, g(z)) computed without forming g(z), so it stays accurate when
// g(z) is too close to the boundary circle to represent.
double cosh_distance_to_image(Point w, const Isometry& g, Point z);

// Angle of g(z) reduced to [0, 2pi), robust for |g(z)| ~ 1.
double image_angle(const Isometry& g, Point z);

double wrap_angle(double angle);  // into [0, 2pi)
double angle_gap(double a, double b);  // circular distance in [0, pi]

}  // namespace horolab
