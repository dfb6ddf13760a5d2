#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qfosc/errors.hpp"
#include "qfosc/experiments.hpp"

using namespace qfosc;

TEST_CASE("capture_level") {
  CHECK(capture_level(0.2) == 0);
  CHECK(capture_level(1.49) == 0);
  CHECK(capture_level(1.5) == 1);
  CHECK(capture_level(8.0) == 7);
  // v0 = 3 built as 1.8 + 12 * 0.1 lands a hair off 4.5.
  const double v0 = 1.8 + 12 * 0.1;
  CHECK(capture_level(0.5 * v0 * v0) == 4);
}

TEST_CASE("settle_sweep examples") {
  const std::vector<double> grid{1.6, 4.0, 6.0, 7.0};
  const auto rows = settle_sweep(grid, 0.0, {0.1}, IntegratorConfig{}, 100.0);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].v0 == grid[i]);
    CHECK(rows[i].classical_energy == 0.5 * grid[i] * grid[i]);
  }
  CHECK(std::abs(rows[0].energy_final - 0.5) < 0.15);
  CHECK(rows[0].level == 0);
  // Greatest level below v0^2 / 2 = 8 is 7.5.
  CHECK(std::abs(rows[1].energy_final - 7.5) < 0.05);
  CHECK(rows[1].level == 7);
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const double classical = rows[i].classical_energy;
    // Capture below the classical energy costs at most one level spacing.
    CHECK(std::abs(rows[i].energy_final - classical) / classical <= 2.0 / (grid[i] * grid[i]));
  }
  CHECK(rows[3].level == 24);
}

TEST_CASE("settle_sweep errors") {
  CHECK_THROWS_AS(settle_sweep({}, 0.0, {0.1}, IntegratorConfig{}, 100.0),
                  std::invalid_argument);
  const std::vector<double> bad{1.0, 1e155};
  try {
    settle_sweep(bad, 0.0, {0.1}, IntegratorConfig{}, 1.0);
    FAIL("expected NonFiniteState");
  } catch (const NonFiniteState& e) {
    CHECK(e.context() == "v0=1e+155");
  }
}

TEST_CASE("relax_trace: ground level start is one censored residence") {
  IntegratorConfig cfg;
  cfg.sample_every = 1000;
  const auto tr = relax_trace(0.0, 1.0, {7.0}, cfg, 100.0);
  REQUIRE(tr.residences.size() == 1);
  CHECK(tr.residences[0].level.n == 0);
  CHECK(tr.residences[0].censored);
  CHECK(tr.residences[0].t_enter == 0.0);
  CHECK(tr.residences[0].t_exit == 100.0);
  CHECK(tr.samples.size() == 101);
  CHECK(tr.samples.back().t == 100.0);
}

TEST_CASE("relax_trace: pump-up from below") {
  IntegratorConfig cfg;
  cfg.sample_every = 10;
  const auto tr = relax_trace(0.1, 0.0, {0.1}, cfg, 100.0);
  const auto avg = period_averaged_energy(tr.samples, 0.0, 100.0);
  REQUIRE(avg.size() == 15);
  for (std::size_t i = 1; i < avg.size(); ++i) CHECK(avg[i].energy > avg[i - 1].energy);
  CHECK(avg.back().energy < 0.5);
}

TEST_CASE("relax_trace: noisy cascade descends from n = 12") {
  IntegratorConfig cfg;
  cfg.noise = NoiseSpec::gaussian(kStudySigma);
  cfg.seed = 9;
  cfg.sample_every = 1000;
  const auto tr = relax_trace(0.0, 5.0, {7.0}, cfg, 2000.0);
  REQUIRE(tr.residences.size() >= 3);
  CHECK(tr.residences.front().level.n == 12);
  for (std::size_t i = 1; i < tr.residences.size(); ++i) {
    CHECK(tr.residences[i].level < tr.residences[i - 1].level);
    CHECK(tr.residences[i].t_enter - tr.residences[i - 1].t_exit < 0.1);
  }
}

TEST_CASE("ground_asymptote_exponent on synthetic power laws") {
  std::vector<TrajectorySample> half, inverse, below;
  for (double t = 1.0; t <= 200.0; t += 0.01) {
    half.push_back({t, 0.0, 0.0, 0.5 + 0.3 / std::sqrt(t)});
    inverse.push_back({t, 0.0, 0.0, 0.5 + 2.0 / t});
    below.push_back({t, 0.0, 0.0, 0.5 - 0.3 / std::sqrt(t)});
  }
  CHECK(ground_asymptote_exponent(half, 20.0, 100.0, 0.0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(ground_asymptote_exponent(inverse, 20.0, 100.0, 0.0) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ground_asymptote_exponent(below, 20.0, 100.0, 0.0) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  // Period averaging of a smooth power law only perturbs the slope slightly.
  CHECK(ground_asymptote_exponent(half, 20.0, 100.0) == doctest::Approx(-0.5).epsilon(1e-2));
}

TEST_CASE("ground_asymptote_exponent errors") {
  std::vector<TrajectorySample> crossing;
  for (double t = 1.0; t <= 100.0; t += 0.01) crossing.push_back({t, 0.0, 0.0, 0.5 + 0.1 * std::cos(t / 10.0)});
  CHECK_THROWS_AS(ground_asymptote_exponent(crossing, 2.0, 99.0), SignChange);
  CHECK_THROWS_AS(ground_asymptote_exponent(crossing, 2.0, 150.0), std::invalid_argument);
  CHECK_THROWS_AS(ground_asymptote_exponent({}, 2.0, 50.0), EmptySeries);
}

TEST_CASE("ground_asymptote_exponent on a relaxation run") {
  IntegratorConfig cfg;
  const auto tr = relax_trace(0.0, 1.6, {0.1}, cfg, 100.0);
  // Independent adaptive-step reference (scipy, rtol 1e-12) gives -0.502.
  const double slope = ground_asymptote_exponent(tr.samples, 20.0, 100.0);
  CHECK(slope == doctest::Approx(-0.502).epsilon(0.04));
}

TEST_CASE("lifetime_study on the ground level reports censoring only") {
  IntegratorConfig cfg;
  cfg.noise = NoiseSpec::gaussian(kStudySigma);
  LifetimeStudyConfig study;
  study.start_level = 0;
  study.t_max = 50.0;
  study.repeats = 3;
  try {
    lifetime_study({7.0}, cfg, study);
    FAIL("expected NoTransitions");
  } catch (const NoTransitions& e) {
    REQUIRE(e.records().size() == 1);
    CHECK(e.records()[0].level.n == 0);
    CHECK(e.records()[0].censored == 3);
    CHECK(e.records()[0].observed() == 0);
    CHECK(std::isnan(e.records()[0].tau_mean));
  }
}

TEST_CASE("lifetime_study preconditions") {
  LifetimeStudyConfig study;
  CHECK_THROWS_AS(lifetime_study({7.0}, IntegratorConfig{}, study), std::invalid_argument);
  IntegratorConfig cfg;
  cfg.noise = NoiseSpec::gaussian(kStudySigma);
  study.repeats = 0;
  CHECK_THROWS_AS(lifetime_study({7.0}, cfg, study), std::invalid_argument);
}

TEST_CASE("lifetime_study aggregates by level") {
  IntegratorConfig cfg;
  cfg.noise = NoiseSpec::gaussian(kStudySigma);
  cfg.seed = 77;
  LifetimeStudyConfig study;
  study.t_max = 800.0;
  study.repeats = 3;
  const auto a = lifetime_study({7.0}, cfg, study);
  const auto b = lifetime_study({7.0}, cfg, study);
  REQUIRE(a.size() >= 3);
  std::size_t censored = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) CHECK(a[i].level > a[i - 1].level);
    CHECK(a[i].alpha == 7.0);
    CHECK(a[i].durations == b[i].durations);
    censored += a[i].censored;
    if (!a[i].durations.empty()) {
      double sum = 0.0;
      for (double d : a[i].durations) sum += d;
      CHECK(a[i].tau_mean == doctest::Approx(sum / a[i].durations.size()));
    }
  }
  CHECK(censored <= 3);
  CHECK(a.back().level.n == 12);
  CHECK(a.back().censored == 0);

  const auto pts = lifetime_fit_points(a, 12);
  for (const auto& p : pts) CHECK(p.energy < 12.5);
}
