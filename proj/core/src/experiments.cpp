#include "qfosc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "qfosc/errors.hpp"
#include "qfosc/parallel.hpp"
#include "qfosc/seeding.hpp"

namespace qfosc {

namespace {

std::string tag(const char* name, double value) {
  std::ostringstream os;
  os.precision(17);
  os << name << '=' << value;
  return os.str();
}

}  // namespace

int capture_level(double energy) noexcept {
  // Slack of a few ulps so that grid points landing exactly on a level
  // (v0 = 3 -> E = 4.5) are not demoted by representation error.
  const double x = energy - 0.5 + 1e-12 * std::max(1.0, energy);
  return x <= 0.0 ? 0 : static_cast<int>(std::floor(x));
}

std::vector<SettleRow> settle_sweep(std::span<const double> v0_grid, double q0,
                                    const ModelParams& p, const IntegratorConfig& cfg,
                                    double t_end) {
  if (v0_grid.empty()) throw std::invalid_argument("settle_sweep: empty v0 grid");
  if (!(t_end > 0.0)) throw std::invalid_argument("settle_sweep: t_end must be > 0");
  cfg.validate();
  p.validate(/*allow_harmonic=*/true);

  return parallel_map(v0_grid.size(), [&](std::size_t i) {
    const double v0 = v0_grid[i];
    try {
      const OscState end = integrate(OscState{q0, v0, 0.0}, p, cfg, t_end);
      const double e = total_energy(end);
      return SettleRow{v0, e, nearest_level(e).level.n, 0.5 * v0 * v0};
    } catch (const NonFiniteState& err) {
      throw err.tagged(tag("v0", v0));
    }
  });
}

RelaxTrace relax_trace(double q0, double v0, const ModelParams& p, const IntegratorConfig& cfg,
                       double t_end, const ResidenceOptions& residence) {
  cfg.validate();
  RelaxTrace out;
  ResidenceTracker tracker(residence);
  IntegratorConfig every_step = cfg;
  every_step.sample_every = 1;
  std::size_t index = 0;
  TrajectorySample last{};
  out.final_state = integrate(OscState{q0, v0, 0.0}, p, every_step, t_end,
                              [&](const TrajectorySample& s) {
                                tracker.push(s);
                                if (index++ % cfg.sample_every == 0) out.samples.push_back(s);
                                last = s;
                              });
  if (out.samples.back().t != last.t) out.samples.push_back(last);
  out.residences = tracker.finish();
  return out;
}

std::vector<AveragedEnergy> period_averaged_energy(std::span<const TrajectorySample> trace,
                                                   double t_lo, double t_hi, double window) {
  if (!(t_hi > t_lo)) throw std::invalid_argument("averaging window: t_hi must exceed t_lo");
  if (!(window >= 0.0)) throw std::invalid_argument("averaging window must be >= 0");
  std::vector<AveragedEnergy> out;
  if (window == 0.0) {
    for (const auto& s : trace) {
      if (s.t >= t_lo && s.t <= t_hi) out.push_back({s.t, s.energy});
    }
    return out;
  }
  double block_start = t_lo;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : trace) {
    if (s.t < t_lo) continue;
    if (s.t > t_hi) break;
    while (s.t >= block_start + window) {
      if (count > 0) out.push_back({block_start + 0.5 * window, sum / static_cast<double>(count)});
      block_start += window;
      sum = 0.0;
      count = 0;
    }
    sum += s.energy;
    ++count;
  }
  // Trailing partial block is dropped; it would bias the mean with part of a period.
  return out;
}

double ground_asymptote_exponent(std::span<const TrajectorySample> trace, double t_lo,
                                 double t_hi, double window) {
  if (trace.empty()) throw EmptySeries();
  if (t_lo <= 0.0 || t_lo < trace.front().t || t_hi > trace.back().t) {
    throw std::invalid_argument("asymptote window must lie inside the trace with t_lo > 0");
  }
  const auto averaged = period_averaged_energy(trace, t_lo, t_hi, window);
  if (averaged.size() < 2) throw std::invalid_argument("asymptote window holds < 2 samples");

  const double sign0 = std::copysign(1.0, averaged.front().energy - 0.5);
  std::vector<double> ln_t, ln_eps;
  for (const auto& a : averaged) {
    const double eps = a.energy - 0.5;
    if (eps == 0.0 || std::copysign(1.0, eps) != sign0) throw SignChange(a.t);
    ln_t.push_back(std::log(a.t));
    ln_eps.push_back(std::log(std::abs(eps)));
  }
  return fit_line(ln_t, ln_eps).slope;
}

NoTransitions::NoTransitions(std::vector<LifetimeRecord> records)
    : std::runtime_error("no level transitions observed before t_max"),
      records_(std::move(records)) {}

std::vector<LifetimeRecord> lifetime_study(const ModelParams& p, const IntegratorConfig& cfg,
                                           const LifetimeStudyConfig& study) {
  p.validate();
  cfg.validate();
  study.residence.validate();
  if (!cfg.noise.active()) {
    throw std::invalid_argument("lifetime_study requires active noise (sigma > 0)");
  }
  if (study.start_level < 0) throw std::invalid_argument("start level must be >= 0");
  if (study.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (!(study.t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");

  const double v0 = std::sqrt(2.0 * study.start_level + 1.0);
  const auto runs = parallel_map(study.repeats, [&](std::size_t i) {
    IntegratorConfig run_cfg = cfg;
    run_cfg.seed = derive_seed(cfg.seed, i);
    ResidenceTracker tracker(study.residence);
    integrate(OscState{0.0, v0, 0.0}, p, run_cfg, study.t_max,
              [&](const TrajectorySample& s) { tracker.push(s); });
    return tracker.finish();
  });

  std::map<int, LifetimeRecord> by_level;
  bool any_exit = false;
  for (const auto& segments : runs) {
    for (const auto& seg : segments) {
      auto& rec = by_level[seg.level.n];
      rec.alpha = p.alpha;
      rec.level = seg.level;
      if (seg.censored) {
        ++rec.censored;
      } else {
        rec.durations.push_back(seg.duration());
        any_exit = true;
      }
    }
  }

  std::vector<LifetimeRecord> records;
  records.reserve(by_level.size());
  for (auto& [n, rec] : by_level) {
    if (!rec.durations.empty()) {
      rec.tau_mean = std::accumulate(rec.durations.begin(), rec.durations.end(), 0.0) /
                     static_cast<double>(rec.durations.size());
    }
    records.push_back(std::move(rec));
  }
  if (!any_exit) throw NoTransitions(std::move(records));
  return records;
}

std::vector<LifetimePoint> lifetime_fit_points(std::span<const LifetimeRecord> records,
                                               int exclude_level) {
  std::vector<LifetimePoint> pts;
  for (const auto& rec : records) {
    if (rec.level.n == exclude_level || rec.durations.empty()) continue;
    pts.push_back({rec.level.energy(), rec.tau_mean});
  }
  return pts;
}

}  // namespace qfosc
