#pragma once

// Named experiments composed from the library, reported as one JSON object
// {config, series, estimates, diagnostics} or as CSV.

#include <array>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "horolab/error.hpp"

namespace horolab {

struct ExperimentConfig {
  std::string experiment;  // volume, orbit-count, busemann, ps-measure, margulis-map, entropy, rigidity
  std::string metric = "hyperbolic";
  double eps = 0.01;
  double bump_radius = 0.3;
  double tmax = 10.0;
  double radius = 8.0;
  int ndirs = 360;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  std::size_t budget = 5'000'000;
  std::string format = "json";
  std::string out;  // empty: stdout
  std::array<double, 2> point{0.0, 0.0};   // x (basepoint p)
  std::array<double, 2> target{0.3, 0.0};  // q / y
  double angle = 0.0;             // busemann direction at p
  double margin = -1.0;           // orbit search margin, negative = automatic
  int grid = 5;                   // margulis-map grid side
  int geodesics = 64;             // rigidity sample size
  std::string dump;               // ps-measure: also write the measure as JSON here
  bool timings = false;
};

// Throws Error(Usage) for unknown experiments or out-of-range parameters.
void validate(const ExperimentConfig& config);

nlohmann::ordered_json config_json(const ExperimentConfig& config);

nlohmann::ordered_json run(const ExperimentConfig& config);

// Writes the report in the configured format; files are written to a
// temporary name and renamed, so failures leave no partial output.
void emit(const nlohmann::ordered_json& report, const ExperimentConfig& config);

// 2 usage, 3 numeric, 4 budget.
int exit_code(ErrorKind kind);

}  // namespace horolab
