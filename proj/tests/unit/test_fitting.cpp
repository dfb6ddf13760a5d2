#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include "qfosc/errors.hpp"
#include "qfosc/fitting.hpp"

using namespace qfosc;

TEST_CASE("fit_power_law recovers an exact generator") {
  std::vector<LifetimePoint> pts;
  for (double e : {1.5, 2.5, 3.5, 5.5, 8.5, 11.5}) pts.push_back({e, std::exp(10.0) * std::pow(e, -3.0)});
  const auto fit = fit_power_law(pts);
  CHECK(fit.ln_a == doctest::Approx(10.0).epsilon(1e-10));
  CHECK(fit.beta == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK(fit.n_points == 6);
}

TEST_CASE("fit_power_law preconditions") {
  const std::vector<LifetimePoint> two{{1.5, 10.0}, {2.5, 5.0}};
  CHECK_THROWS_AS(fit_power_law(two), std::invalid_argument);
  const std::vector<LifetimePoint> same{{1.5, 10.0}, {1.5, 5.0}, {1.5, 7.0}};
  CHECK_THROWS_AS(fit_power_law(same), DegenerateInput);
  const std::vector<LifetimePoint> neg{{1.5, 10.0}, {2.5, -5.0}, {3.5, 7.0}};
  CHECK_THROWS_AS(fit_power_law(neg), std::invalid_argument);
}

TEST_CASE("fit_power_law r2 drops with scatter") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<LifetimePoint> pts;
  for (double e = 1.5; e < 12.0; e += 1.0) {
    pts.push_back({e, std::exp(9.0 + noise(rng)) * std::pow(e, -2.0)});
  }
  const auto fit = fit_power_law(pts);
  CHECK(fit.r2 < 1.0);
  CHECK(fit.r2 > 0.5);
  CHECK(fit.beta == doctest::Approx(2.0).epsilon(0.3));
}

TEST_CASE("fit_a_vs_alpha") {
  std::vector<AlphaPoint> inverse;
  for (double a : {5.0, 7.0, 10.0}) inverse.push_back({a, 13.93 - std::log(a)});
  const auto s = fit_a_vs_alpha(inverse);
  CHECK(s.exponent == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(s.ln_a0 == doctest::Approx(13.93).epsilon(1e-12));

  std::vector<AlphaPoint> flat{{1.0, 4.0}, {2.0, 4.0}, {3.0, 4.0}};
  CHECK(fit_a_vs_alpha(flat).exponent == doctest::Approx(0.0));

  std::vector<AlphaPoint> repeated{{5.0, 1.0}, {5.0, 2.0}, {7.0, 3.0}};
  CHECK_THROWS_AS(fit_a_vs_alpha(repeated), DegenerateInput);
}

TEST_CASE("fit_line basics") {
  const std::vector<double> x{0.0, 1.0, 2.0}, y{1.0, 3.0, 5.0};
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  const std::vector<double> short_y{1.0};
  CHECK_THROWS_AS(fit_line(x, short_y), std::invalid_argument);
}
