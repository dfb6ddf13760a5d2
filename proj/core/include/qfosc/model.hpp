#pragma once

#include <cmath>
#include <numbers>

namespace qfosc {

/// Phase point of the oscillator in nondimensional units (m = omega = hbar = 1).
struct OscState {
  double q = 0.0;
  double v = 0.0;
  double t = 0.0;

  bool finite() const noexcept;
};

/// Nondimensional friction strength. alpha == 0 is the pure harmonic oscillator.
struct ModelParams {
  double alpha = 0.1;

  /// Throws std::invalid_argument unless alpha is finite and > 0
  /// (or >= 0 when `allow_harmonic`).
  void validate(bool allow_harmonic = false) const;
};

struct DimensionalParams {
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
  double a0 = 0.2;

  void validate() const;
};

/// Stationary level n with energy n + 1/2.
struct Level {
  int n = 0;

  constexpr double energy() const noexcept { return n + 0.5; }
  friend constexpr bool operator==(Level, Level) = default;
  friend constexpr auto operator<=>(Level, Level) = default;
};

struct LevelDistance {
  Level level;
  double offset = 0.0;  // E - E_n
};

inline constexpr double kPeriod = 2.0 * std::numbers::pi;

inline double total_energy(const OscState& s) noexcept {
  return 0.5 * (s.q * s.q + s.v * s.v);
}

constexpr double stationary_level_energy(int n) noexcept { return n + 0.5; }

/// Closest level to E; midpoints (E = n + 1) go to the lower level.
LevelDistance nearest_level(double energy);

/// -alpha v (q^2 + v^2 - 1) cos^2(pi/2 (q^2 + v^2)).
inline double friction_accel(const OscState& s, const ModelParams& p) noexcept {
  const double r2 = s.q * s.q + s.v * s.v;
  const double c = std::cos(0.5 * std::numbers::pi * r2);
  return -p.alpha * s.v * (r2 - 1.0) * (c * c);
}

struct Derivative {
  double dq = 0.0;
  double dv = 0.0;
};

inline Derivative deriv(const OscState& s, const ModelParams& p) noexcept {
  return {s.v, -s.q + friction_accel(s, p)};
}

/// dE/dt along the flow; identically v * friction_accel.
double energy_rate(const OscState& s, const ModelParams& p) noexcept;

ModelParams alpha_from_dimensional(const DimensionalParams& d);

}  // namespace qfosc
