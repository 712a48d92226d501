#pragma once

#include <string>
#include <vector>

namespace horolab {

enum class SeriesLabel { SphereArea, BallVolume, OrbitCount };

const char* to_string(SeriesLabel label);

struct SeriesSample {
  double t = 0.0;
  double value = 0.0;
};

// Sampled growth curve: s_t(x), b_t(x) or a_t(x, y).
struct GrowthSeries {
  SeriesLabel label = SeriesLabel::SphereArea;
  std::vector<SeriesSample> samples;

  std::size_t size() const { return samples.size(); }
  // Times strictly increasing, values positive (t = 0 may carry zero), and
  // orbit counts nondecreasing.
  bool valid() const;
};

}  // namespace horolab
