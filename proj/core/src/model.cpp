#include "qfosc/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qfosc/errors.hpp"

namespace qfosc {

NonFiniteState::NonFiniteState(double time, std::string context)
    : std::runtime_error("non-finite oscillator state at t=" + std::to_string(time) +
                         (context.empty() ? "" : " (" + context + ")")),
      time_(time),
      context_(std::move(context)) {}

NonFiniteState NonFiniteState::tagged(std::string context) const {
  return NonFiniteState(time_, std::move(context));
}

SignChange::SignChange(double time)
    : std::runtime_error("distance to ground level changes sign near t=" +
                         std::to_string(time)),
      time_(time) {}

bool OscState::finite() const noexcept {
  return std::isfinite(q) && std::isfinite(v) && std::isfinite(t);
}

void ModelParams::validate(bool allow_harmonic) const {
  if (!std::isfinite(alpha) || alpha < 0.0 || (alpha == 0.0 && !allow_harmonic)) {
    throw std::invalid_argument("alpha must be finite and " +
                                std::string(allow_harmonic ? ">= 0" : "> 0"));
  }
}

void DimensionalParams::validate() const {
  for (double x : {mass, omega, hbar, a0}) {
    if (!std::isfinite(x) || x <= 0.0) {
      throw std::invalid_argument("dimensional parameters must be finite and > 0");
    }
  }
}

LevelDistance nearest_level(double energy) {
  if (!(energy >= 0.0)) throw std::invalid_argument("energy must be >= 0");
  const double x = energy - 0.5;
  if (x <= 0.0) return {Level{0}, x};
  const double lower = std::floor(x);
  const double n = (x - lower <= 0.5) ? lower : lower + 1.0;
  return {Level{static_cast<int>(n)}, x - n};
}

double energy_rate(const OscState& s, const ModelParams& p) noexcept {
  // -2 alpha v^2 (E - 1/2) cos^2(pi E); the trig argument is built from
  // q^2 + v^2 exactly as in friction_accel.
  const double r2 = s.q * s.q + s.v * s.v;
  const double c = std::cos(0.5 * std::numbers::pi * r2);
  const double excess = 0.5 * r2 - 0.5;
  return -2.0 * p.alpha * (s.v * s.v) * excess * (c * c);
}

ModelParams alpha_from_dimensional(const DimensionalParams& d) {
  d.validate();
  return ModelParams{0.5 * d.a0 * d.hbar};
}

}  // namespace qfosc
