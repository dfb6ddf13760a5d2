#include "qfosc/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "qfosc/errors.hpp"

namespace qfosc {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("fit_line: need at least 2 points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DegenerateInput("fit_line: all abscissae are equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_points = x.size();
  if (syy == 0.0) {
    fit.r2 = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      ss_res += r * r;
    }
    fit.r2 = 1.0 - ss_res / syy;
  }
  return fit;
}

PowerLawFit fit_power_law(std::span<const LifetimePoint> points) {
  if (points.size() < kMinFitPoints) {
    throw std::invalid_argument("fit_power_law: need at least 3 points");
  }
  std::vector<double> ln_e, ln_tau;
  ln_e.reserve(points.size());
  ln_tau.reserve(points.size());
  for (const auto& pt : points) {
    if (!(pt.energy > 0.0) || !(pt.tau > 0.0)) {
      throw std::invalid_argument("fit_power_law: E and tau must be > 0");
    }
    ln_e.push_back(std::log(pt.energy));
    ln_tau.push_back(std::log(pt.tau));
  }
  const LinearFit line = fit_line(ln_e, ln_tau);
  return {line.intercept, -line.slope, line.r2, line.n_points};
}

AlphaScaling fit_a_vs_alpha(std::span<const AlphaPoint> points) {
  std::set<double> distinct;
  std::vector<double> ln_alpha, ln_a;
  for (const auto& pt : points) {
    if (!(pt.alpha > 0.0)) throw std::invalid_argument("fit_a_vs_alpha: alpha must be > 0");
    distinct.insert(pt.alpha);
    ln_alpha.push_back(std::log(pt.alpha));
    ln_a.push_back(pt.ln_a);
  }
  if (distinct.size() < kMinFitPoints) {
    throw DegenerateInput("fit_a_vs_alpha: need at least 3 distinct alpha values");
  }
  const LinearFit line = fit_line(ln_alpha, ln_a);
  return {line.intercept, line.slope, line.r2};
}

}  // namespace qfosc
