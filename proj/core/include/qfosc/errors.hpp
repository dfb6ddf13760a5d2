#pragma once

#include <stdexcept>
#include <string>

namespace qfosc {

/// Integration produced a NaN or Inf. Carries the simulation time of the
/// failing step and, when raised inside a sweep, the offending sweep point.
class NonFiniteState : public std::runtime_error {
 public:
  explicit NonFiniteState(double time, std::string context = {});

  double time() const noexcept { return time_; }
  const std::string& context() const noexcept { return context_; }

  /// Copy of this error with `context` attached (e.g. "v0=2.5").
  NonFiniteState tagged(std::string context) const;

 private:
  double time_;
  std::string context_;
};

class EmptySeries : public std::runtime_error {
 public:
  EmptySeries() : std::runtime_error("empty sample series") {}
};

/// Signed distance to the ground level changed sign inside a fit window.
class SignChange : public std::runtime_error {
 public:
  explicit SignChange(double time);
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Regression input with no spread in the abscissa.
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qfosc
