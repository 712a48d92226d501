#pragma once

// Small seeded generators for the property tests.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "horolab/disk.hpp"

namespace testgen {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  }
  double angle() { return uniform(0.0, 2.0 * std::numbers::pi); }
  // Uniform in the Euclidean disk of radius rmax.
  horolab::Point point(double rmax) {
    const double r = rmax * std::sqrt(uniform(0.0, 1.0));
    const double a = angle();
    return {r * std::cos(a), r * std::sin(a)};
  }
  horolab::Isometry isometry(double rmax = 0.9) {
    return horolab::Isometry::transvection(point(rmax)) * horolab::Isometry::rotation(angle());
  }
};

}  // namespace testgen
