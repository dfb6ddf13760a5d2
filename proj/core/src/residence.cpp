#include "qfosc/residence.hpp"

#include <cmath>
#include <stdexcept>

#include "qfosc/errors.hpp"

namespace qfosc {

void ResidenceOptions::validate() const {
  if (!(tol > 0.0 && tol < 0.5)) throw std::invalid_argument("tol must lie in (0, 0.5)");
  if (!(min_dwell > 0.0)) throw std::invalid_argument("min_dwell must be > 0");
}

ResidenceTracker::ResidenceTracker(ResidenceOptions options) : options_(options) {
  options_.validate();
}

void ResidenceTracker::close(double t_exit) {
  if (band_ && t_exit - band_start_ >= options_.min_dwell) {
    segments_.push_back({*band_, band_start_, t_exit, false});
  }
  band_.reset();
}

void ResidenceTracker::push(double t, double energy) {
  any_ = true;
  last_t_ = t;
  const LevelDistance nearest = nearest_level(energy);
  const bool inside = std::abs(nearest.offset) < options_.tol;
  if (inside && band_ == nearest.level) return;
  close(t);
  if (inside) {
    band_ = nearest.level;
    band_start_ = t;
  }
}

std::vector<ResidenceSegment> ResidenceTracker::finish() const {
  if (!any_) throw EmptySeries();
  std::vector<ResidenceSegment> out = segments_;
  if (band_ && last_t_ - band_start_ >= options_.min_dwell) {
    out.push_back({*band_, band_start_, last_t_, true});
  }
  return out;
}

std::vector<ResidenceSegment> track_residences(std::span<const TrajectorySample> samples,
                                               const ResidenceOptions& options) {
  if (samples.empty()) throw EmptySeries();
  ResidenceTracker tracker(options);
  for (const auto& s : samples) tracker.push(s);
  return tracker.finish();
}

}  // namespace qfosc
