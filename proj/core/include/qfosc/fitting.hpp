#pragma once

#include <cstddef>
#include <span>

namespace qfosc {

/// y = intercept + slope * x by ordinary least squares.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
  std::size_t n_points = 0;
};

/// Throws std::invalid_argument on size mismatch or fewer than 2 points,
/// DegenerateInput if all x are equal.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct LifetimePoint {
  double energy = 0.0;
  double tau = 0.0;
};

/// tau = A * E^(-beta), fitted as ln tau = ln_a - beta ln E.
struct PowerLawFit {
  double ln_a = 0.0;
  double beta = 0.0;
  double r2 = 0.0;
  std::size_t n_points = 0;
};

inline constexpr std::size_t kMinFitPoints = 3;

/// Requires >= 3 points with E > 0 and tau > 0 (std::invalid_argument);
/// DegenerateInput if every E is the same.
PowerLawFit fit_power_law(std::span<const LifetimePoint> points);

struct AlphaPoint {
  double alpha = 0.0;
  double ln_a = 0.0;
};

/// ln A = ln_a0 + exponent * ln alpha.
struct AlphaScaling {
  double ln_a0 = 0.0;
  double exponent = 0.0;
  double r2 = 0.0;
};

/// Requires >= 3 distinct alpha > 0; DegenerateInput otherwise.
AlphaScaling fit_a_vs_alpha(std::span<const AlphaPoint> points);

}  // namespace qfosc
