#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qfosc/integrator.hpp"
#include "qfosc/model.hpp"

namespace qfosc {

/// Interval during which the energy stayed within tolerance of one level.
struct ResidenceSegment {
  Level level;
  double t_enter = 0.0;
  double t_exit = 0.0;
  bool censored = false;  // still open when the series ended

  double duration() const noexcept { return t_exit - t_enter; }
};

struct ResidenceOptions {
  double tol = 0.02;
  double min_dwell = kPeriod;

  void validate() const;
};

/// Online residence detector fed one (t, E) sample at a time.
///
/// A segment opens at the first sample with |E - E_n| < tol and closes at the
/// first later sample with |E - E_n| >= tol. Runs shorter than min_dwell are
/// discarded.
class ResidenceTracker {
 public:
  explicit ResidenceTracker(ResidenceOptions options = {});

  void push(double t, double energy);
  void push(const TrajectorySample& s) { push(s.t, s.energy); }

  /// Closed segments so far (time-ordered).
  const std::vector<ResidenceSegment>& closed() const noexcept { return segments_; }

  /// Closed segments plus the open one, if long enough, flagged censored.
  /// Throws EmptySeries if nothing was pushed.
  std::vector<ResidenceSegment> finish() const;

 private:
  void close(double t_exit);

  ResidenceOptions options_;
  std::vector<ResidenceSegment> segments_;
  std::optional<Level> band_;
  double band_start_ = 0.0;
  double last_t_ = 0.0;
  bool any_ = false;
};

std::vector<ResidenceSegment> track_residences(std::span<const TrajectorySample> samples,
                                               const ResidenceOptions& options = {});

}  // namespace qfosc
