#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "qfosc/fitting.hpp"
#include "qfosc/integrator.hpp"
#include "qfosc/model.hpp"
#include "qfosc/residence.hpp"

namespace qfosc {

// Settle sweeps ------------------------------------------------------------

struct SettleRow {
  double v0 = 0.0;
  double energy_final = 0.0;
  int level = 0;
  double classical_energy = 0.0;  // v0^2 / 2
};

/// One run per v0 from (q0, v0, t=0) to t_end, rows in grid order.
/// NonFiniteState is rethrown tagged with the failing v0.
std::vector<SettleRow> settle_sweep(std::span<const double> v0_grid, double q0,
                                    const ModelParams& p, const IntegratorConfig& cfg,
                                    double t_end);

/// Greatest n with n + 1/2 <= energy (0 below the ground level).
int capture_level(double energy) noexcept;

// Relaxation traces --------------------------------------------------------

struct RelaxTrace {
  std::vector<TrajectorySample> samples;  // decimated by cfg.sample_every
  std::vector<ResidenceSegment> residences;  // tracked on every step
  OscState final_state;
};

RelaxTrace relax_trace(double q0, double v0, const ModelParams& p, const IntegratorConfig& cfg,
                       double t_end, const ResidenceOptions& residence = {});

struct AveragedEnergy {
  double t = 0.0;  // window midpoint
  double energy = 0.0;
};

/// Means of E over consecutive windows of length `window` inside [t_lo, t_hi].
/// window == 0 returns the raw samples in range.
std::vector<AveragedEnergy> period_averaged_energy(std::span<const TrajectorySample> trace,
                                                   double t_lo, double t_hi,
                                                   double window = kPeriod);

/// Least-squares slope of ln|E - 1/2| against ln t over period-averaged samples
/// in [t_lo, t_hi]. Throws SignChange if E - 1/2 changes sign in the window.
double ground_asymptote_exponent(std::span<const TrajectorySample> trace, double t_lo,
                                 double t_hi, double window = kPeriod);

// Lifetimes ----------------------------------------------------------------

struct LifetimeRecord {
  double alpha = 0.0;
  Level level;
  std::vector<double> durations;  // uncensored only
  std::size_t censored = 0;
  double tau_mean = std::numeric_limits<double>::quiet_NaN();

  std::size_t observed() const noexcept { return durations.size(); }
};

/// No repeat left its starting level before t_max. Carries the censored records.
class NoTransitions : public std::runtime_error {
 public:
  explicit NoTransitions(std::vector<LifetimeRecord> records);
  const std::vector<LifetimeRecord>& records() const noexcept { return records_; }

 private:
  std::vector<LifetimeRecord> records_;
};

struct LifetimeStudyConfig {
  int start_level = 12;
  double t_max = 2.0e4;
  std::size_t repeats = 20;
  ResidenceOptions residence;
};

/// Runs `repeats` trajectories from (0, sqrt(2n+1)), repeat i seeded with
/// derive_seed(cfg.seed, i), and aggregates residence durations by level.
/// Records are ordered by ascending level. Requires active noise.
std::vector<LifetimeRecord> lifetime_study(const ModelParams& p, const IntegratorConfig& cfg,
                                           const LifetimeStudyConfig& study);

/// (E_n, tau) for levels with at least one uncensored residence, skipping
/// `exclude_level` (the start level, whose first residence has no approach
/// phase).
std::vector<LifetimePoint> lifetime_fit_points(std::span<const LifetimeRecord> records,
                                               int exclude_level);

}  // namespace qfosc
