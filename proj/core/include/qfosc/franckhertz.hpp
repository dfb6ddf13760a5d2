#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qfosc/integrator.hpp"
#include "qfosc/model.hpp"

namespace qfosc {

enum class WindowKind { stepwise, exponential };

/// Time profile zeta(t) of the electron's coupling to the oscillator's radiation.
struct InteractionWindow {
  WindowKind kind = WindowKind::stepwise;
  double t_int = 200.0;  // stepwise cutoff
  double rate = 0.0;     // exponential decay rate, no default

  static InteractionWindow stepwise(double t_int) { return {WindowKind::stepwise, t_int, 0.0}; }
  static InteractionWindow exponential(double rate) {
    return {WindowKind::exponential, 0.0, rate};
  }

  double zeta(double t) const noexcept;
  /// Time after which zeta is zero (stepwise) or below 1e-12 (exponential).
  double horizon() const noexcept;
  void validate() const;
};

/// E0 above which t_int = 200 is too short for the oscillator to return to
/// the ground state.
inline constexpr double kWindowLimitedEnergy = 4.0;

struct ScatterConfig {
  ModelParams params{10.0};
  InteractionWindow window;
  IntegratorConfig integrator{kDefaultStep, NoiseSpec::gaussian(kStudySigma), 0, 1};
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  double elastic_tol = 0.05;

  void validate() const;
};

struct ScatterResult {
  double e0 = 0.0;
  double phase = 0.0;
  double electron_final = 0.0;
  double oscillator_final = 0.0;
  bool elastic = false;
  std::size_t clamp_events = 0;  // steps where E_e was clamped at 0
};

struct SweepRow {
  double e0 = 0.0;
  double mean_electron = 0.0;
  double mean_velocity = 0.0;  // mean of per-trial sqrt(2 E_e)
  double stddev_electron = 0.0;  // population standard deviation
  bool window_limited = false;
};

struct EnsembleResult {
  SweepRow row;
  std::vector<ScatterResult> trials;
};

struct CollisionOutcome {
  double v_osc = 0.0;
  double v_electron = 0.0;
};

/// Oscillator on the ground level at collision phase phi: (sin phi, cos phi).
OscState ground_state_at_phase(double phi);

/// Instantaneous equal-mass elastic collision. The oscillator leaves with the
/// larger of the two velocities, the electron with the smaller.
CollisionOutcome collide(double v_osc_before, double v_electron_before) noexcept;

/// zeta * alpha v^2 (v^2 + q^2 - 1) cos^2(pi/2 (v^2 + q^2)).
double electron_energy_rate(const OscState& s, const ModelParams& p, double zeta) noexcept;

/// Observes (oscillator state, electron energy) after every integration step.
using ScatterObserver = std::function<void(const OscState&, double)>;

/// Single scattering event at collision phase phi. The oscillator noise stream
/// is seeded with cfg.integrator.seed.
ScatterResult scatter_once(double e0, const ScatterConfig& cfg, double phi,
                           const ScatterObserver& observer = {});

/// cfg.trials events with phases uniform on [0, 2 pi) drawn from cfg.seed;
/// trial i uses oscillator seed derive_seed(cfg.seed, i).
EnsembleResult scatter_ensemble(double e0, const ScatterConfig& cfg);

/// One ensemble per grid point, point i seeded with derive_seed(cfg.seed, i).
std::vector<SweepRow> fh_sweep(std::span<const double> e0_grid, const ScatterConfig& cfg);

}  // namespace qfosc
