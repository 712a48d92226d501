#pragma once

#include <stdexcept>
#include <string>

namespace horolab {

enum class ErrorKind {
  Domain,          // argument outside the open disk or outside a documented range
  MetricInvalid,   // perturbation produced positive curvature
  NumericFailure,  // an iteration failed to converge or a certificate failed
  Horizon,         // a trajectory reached the numerical edge of the disk
  ConjugatePoint,  // Jacobi field vanished; impossible for K <= 0
  Budget,          // orbit enumeration exceeded its node budget
  Degenerate,      // input produced an empty or undefined quantity
  Usage,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace horolab
