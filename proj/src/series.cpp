#include "horolab/series.hpp"

namespace horolab {

const char* to_string(SeriesLabel label) {
  switch (label) {
    case SeriesLabel::SphereArea: return "sphereArea";
    case SeriesLabel::BallVolume: return "ballVolume";
    case SeriesLabel::OrbitCount: return "orbitCount";
  }
  return "unknown";
}

bool GrowthSeries::valid() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].value < 0.0) return false;
    if (samples[i].value == 0.0 && samples[i].t != 0.0) return false;
    if (i == 0) continue;
    if (!(samples[i].t > samples[i - 1].t)) return false;
    if (label == SeriesLabel::OrbitCount && samples[i].value < samples[i - 1].value) return false;
  }
  return true;
}

}  // namespace horolab
