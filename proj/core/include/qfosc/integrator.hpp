#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

#include "qfosc/errors.hpp"
#include "qfosc/model.hpp"

namespace qfosc {

enum class NoiseMode { off, per_step_gaussian };

/// Additive velocity kick applied after every step.
struct NoiseSpec {
  NoiseMode mode = NoiseMode::off;
  double sigma = 0.0;

  static NoiseSpec gaussian(double sigma) { return {NoiseMode::per_step_gaussian, sigma}; }
  bool active() const noexcept { return mode == NoiseMode::per_step_gaussian && sigma > 0.0; }
};

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kMaxStep = 0.01;
/// Noise floor used by lifetime and scattering studies.
inline constexpr double kStudySigma = 1e-8;

struct IntegratorConfig {
  double h = kDefaultStep;
  NoiseSpec noise;
  std::uint64_t seed = 0;
  std::size_t sample_every = 1;

  /// Throws std::invalid_argument on h outside (0, 0.01], negative sigma,
  /// or sample_every == 0.
  void validate() const;
};

struct TrajectorySample {
  double t = 0.0;
  double q = 0.0;
  double v = 0.0;
  double energy = 0.0;

  static TrajectorySample from(const OscState& s) noexcept {
    return {s.t, s.q, s.v, total_energy(s)};
  }
};

/// One classical RK4 step of length h. Throws NonFiniteState.
OscState rk4_step(const OscState& s, double h, const ModelParams& p);

namespace detail {

// RK4 without the finiteness check; t is left to the caller.
inline OscState rk4_advance(const OscState& s, double h, const ModelParams& p) noexcept {
  const Derivative k1 = deriv(s, p);
  const Derivative k2 = deriv({s.q + 0.5 * h * k1.dq, s.v + 0.5 * h * k1.dv, 0.0}, p);
  const Derivative k3 = deriv({s.q + 0.5 * h * k2.dq, s.v + 0.5 * h * k2.dv, 0.0}, p);
  const Derivative k4 = deriv({s.q + h * k3.dq, s.v + h * k3.dv, 0.0}, p);
  return {s.q + h / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq),
          s.v + h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv), s.t};
}

/// Number of steps covering (t0, t_end]; the last one may be shortened.
std::size_t step_count(double t0, double t_end, double h);

}  // namespace detail

/// Integrates from state0.t to t_end with fixed step cfg.h.
///
/// The observer receives the initial sample, every `sample_every`-th step, and
/// the final state. Times are t0 + k*h; the final step is shortened so the run
/// ends exactly at t_end. With noise active, a N(0, sigma) kick drawn from a
/// mt19937_64 stream seeded with cfg.seed is added to v after each step.
template <class Observer>
OscState integrate(const OscState& state0, const ModelParams& p, const IntegratorConfig& cfg,
                   double t_end, Observer&& observer) {
  cfg.validate();
  p.validate(/*allow_harmonic=*/true);
  if (!state0.finite()) throw NonFiniteState(state0.t);
  if (!(t_end > state0.t)) throw std::invalid_argument("t_end must exceed the start time");

  const std::size_t steps = detail::step_count(state0.t, t_end, cfg.h);
  const bool noisy = cfg.noise.active();
  std::mt19937_64 engine(cfg.seed);
  std::normal_distribution<double> kick(0.0, noisy ? cfg.noise.sigma : 1.0);

  OscState s = state0;
  observer(TrajectorySample::from(s));
  for (std::size_t k = 1; k <= steps; ++k) {
    const bool last = (k == steps);
    const double t_next = last ? t_end : state0.t + static_cast<double>(k) * cfg.h;
    s = detail::rk4_advance(s, last ? t_end - s.t : cfg.h, p);
    s.t = t_next;
    if (noisy) s.v += kick(engine);
    if (!std::isfinite(s.q) || !std::isfinite(s.v)) throw NonFiniteState(s.t);
    if (last || k % cfg.sample_every == 0) observer(TrajectorySample::from(s));
  }
  return s;
}

/// integrate() without an observer.
OscState integrate(const OscState& state0, const ModelParams& p, const IntegratorConfig& cfg,
                   double t_end);

}  // namespace qfosc
