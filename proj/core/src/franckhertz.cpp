#include "qfosc/franckhertz.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qfosc/errors.hpp"
#include "qfosc/parallel.hpp"
#include "qfosc/seeding.hpp"

namespace qfosc {

double InteractionWindow::zeta(double t) const noexcept {
  if (kind == WindowKind::stepwise) return t <= t_int ? 1.0 : 0.0;
  return std::exp(-rate * t);
}

double InteractionWindow::horizon() const noexcept {
  if (kind == WindowKind::stepwise) return t_int;
  return -std::log(1e-12) / rate;
}

void InteractionWindow::validate() const {
  if (kind == WindowKind::stepwise && !(t_int > 0.0 && std::isfinite(t_int))) {
    throw std::invalid_argument("stepwise window needs t_int > 0");
  }
  if (kind == WindowKind::exponential && !(rate > 0.0 && std::isfinite(rate))) {
    throw std::invalid_argument("exponential window needs an explicit rate > 0");
  }
}

void ScatterConfig::validate() const {
  params.validate();
  window.validate();
  integrator.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(elastic_tol > 0.0)) throw std::invalid_argument("elastic_tol must be > 0");
}

OscState ground_state_at_phase(double phi) {
  if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) {
    throw std::invalid_argument("collision phase must lie in [0, 2 pi)");
  }
  return {std::sin(phi), std::cos(phi), 0.0};
}

CollisionOutcome collide(double v_osc_before, double v_electron_before) noexcept {
  const double mean = 0.5 * (v_osc_before + v_electron_before);
  const double half_gap = 0.5 * std::abs(v_osc_before - v_electron_before);
  return {mean + half_gap, mean - half_gap};
}

double electron_energy_rate(const OscState& s, const ModelParams& p, double zeta) noexcept {
  const double r2 = s.v * s.v + s.q * s.q;
  const double c = std::cos(0.5 * std::numbers::pi * r2);
  return zeta * p.alpha * (s.v * s.v) * (r2 - 1.0) * (c * c);
}

namespace {

struct Coupled {
  OscState osc;
  double electron = 0.0;
};

// RK4 on (q, v, E_e); zeta is sampled at the stage times.
Coupled coupled_step(const Coupled& y, double h, const ModelParams& p,
                     const InteractionWindow& w) {
  const double t = y.osc.t;
  auto stage = [&](const OscState& s, double ts) {
    const Derivative d = deriv(s, p);
    return std::array<double, 3>{d.dq, d.dv, electron_energy_rate(s, p, w.zeta(ts))};
  };
  const OscState& s = y.osc;
  const auto k1 = stage(s, t);
  const auto k2 = stage({s.q + 0.5 * h * k1[0], s.v + 0.5 * h * k1[1], 0.0}, t + 0.5 * h);
  const auto k3 = stage({s.q + 0.5 * h * k2[0], s.v + 0.5 * h * k2[1], 0.0}, t + 0.5 * h);
  const auto k4 = stage({s.q + h * k3[0], s.v + h * k3[1], 0.0}, t + h);
  Coupled out;
  out.osc.q = s.q + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
  out.osc.v = s.v + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
  out.electron = y.electron + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
  return out;
}

}  // namespace

ScatterResult scatter_once(double e0, const ScatterConfig& cfg, double phi,
                           const ScatterObserver& observer) {
  if (!(e0 >= 0.0) || !std::isfinite(e0)) throw std::invalid_argument("E0 must be >= 0");
  cfg.validate();
  const IntegratorConfig& ic = cfg.integrator;

  OscState osc = ground_state_at_phase(phi);
  const double ve0 = std::sqrt(2.0 * e0);
  const CollisionOutcome hit = collide(osc.v, ve0);
  osc.v = hit.v_osc;

  ScatterResult result;
  result.e0 = e0;
  result.phase = phi;

  Coupled y{osc, 0.5 * hit.v_electron * hit.v_electron};
  if (observer) observer(y.osc, y.electron);

  const double t_end = cfg.window.horizon();
  const std::size_t steps = detail::step_count(0.0, t_end, ic.h);
  const bool noisy = ic.noise.active();
  std::mt19937_64 engine(ic.seed);
  std::normal_distribution<double> kick(0.0, noisy ? ic.noise.sigma : 1.0);

  for (std::size_t k = 1; k <= steps; ++k) {
    const bool last = (k == steps);
    const double t_next = last ? t_end : static_cast<double>(k) * ic.h;
    y = coupled_step(y, last ? t_end - y.osc.t : ic.h, cfg.params, cfg.window);
    y.osc.t = t_next;
    if (noisy) y.osc.v += kick(engine);
    if (!y.osc.finite() || !std::isfinite(y.electron)) throw NonFiniteState(t_next);
    if (y.electron < 0.0) {
      y.electron = 0.0;
      ++result.clamp_events;
    }
    if (observer) observer(y.osc, y.electron);
  }

  result.electron_final = y.electron;
  result.oscillator_final = total_energy(y.osc);
  result.elastic = std::abs(result.electron_final - e0) < cfg.elastic_tol;
  return result;
}

EnsembleResult scatter_ensemble(double e0, const ScatterConfig& cfg) {
  cfg.validate();
  std::mt19937_64 phase_engine(cfg.seed);
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  std::vector<double> phases(cfg.trials);
  for (auto& phi : phases) {
    phi = uniform(phase_engine);
    if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
  }

  EnsembleResult out;
  out.trials = parallel_map(cfg.trials, [&](std::size_t i) {
    ScatterConfig trial = cfg;
    trial.integrator.seed = derive_seed(cfg.seed, i);
    return scatter_once(e0, trial, phases[i]);
  });

  const auto n = static_cast<double>(out.trials.size());
  double sum_e = 0.0, sum_v = 0.0;
  for (const auto& r : out.trials) {
    sum_e += r.electron_final;
    sum_v += std::sqrt(2.0 * r.electron_final);
  }
  const double mean_e = sum_e / n;
  double ss = 0.0;
  for (const auto& r : out.trials) ss += (r.electron_final - mean_e) * (r.electron_final - mean_e);

  out.row = {e0, mean_e, sum_v / n, std::sqrt(ss / n), e0 > kWindowLimitedEnergy};
  return out;
}

std::vector<SweepRow> fh_sweep(std::span<const double> e0_grid, const ScatterConfig& cfg) {
  if (e0_grid.empty()) throw std::invalid_argument("fh_sweep: empty E0 grid");
  cfg.validate();
  std::vector<SweepRow> rows;
  rows.reserve(e0_grid.size());
  // Trials inside each ensemble already run on the worker pool.
  for (std::size_t i = 0; i < e0_grid.size(); ++i) {
    ScatterConfig point = cfg;
    point.seed = derive_seed(cfg.seed, i);
    rows.push_back(scatter_ensemble(e0_grid[i], point).row);
  }
  return rows;
}

}  // namespace qfosc
