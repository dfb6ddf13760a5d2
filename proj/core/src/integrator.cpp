#include "qfosc/integrator.hpp"

#include <cmath>
#include <stdexcept>

namespace qfosc {

void IntegratorConfig::validate() const {
  if (!(h > 0.0 && h <= kMaxStep)) throw std::invalid_argument("step h must lie in (0, 0.01]");
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
    throw std::invalid_argument("noise sigma must be finite and >= 0");
  }
  if (sample_every == 0) throw std::invalid_argument("sample_every must be >= 1");
}

OscState rk4_step(const OscState& s, double h, const ModelParams& p) {
  if (!(h > 0.0)) throw std::invalid_argument("step h must be > 0");
  OscState out = detail::rk4_advance(s, h, p);
  out.t = s.t + h;
  if (!out.finite()) throw NonFiniteState(out.t);
  return out;
}

namespace detail {

std::size_t step_count(double t0, double t_end, double h) {
  const double span = (t_end - t0) / h;
  // Absorb representation error so that e.g. 100 / 1e-3 gives 100000 steps.
  const double rounded = std::round(span);
  const double n = (std::abs(span - rounded) <= 1e-9 * std::max(1.0, rounded)) ? rounded
                                                                                 : std::ceil(span);
  return static_cast<std::size_t>(std::max(1.0, n));
}

}  // namespace detail

OscState integrate(const OscState& state0, const ModelParams& p, const IntegratorConfig& cfg,
                   double t_end) {
  return integrate(state0, p, cfg, t_end, [](const TrajectorySample&) {});
}

}  // namespace qfosc
