#pragma once

#include <stdexcept>
#include <string>

namespace lmgeo {

/// Input that violates a documented precondition (shape, range, grammar).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Landmarks too close, or a Gram/cometric matrix too ill-conditioned to factor.
class DegenerateConfiguration : public std::runtime_error {
 public:
  explicit DegenerateConfiguration(const std::string& what, double time = 0.0)
      : std::runtime_error(what), time_(time) {}

  /// Integration time at which the degeneracy was hit (0 outside integrators).
  [[nodiscard]] double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A numerical procedure that could not reach a trustworthy answer.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lmgeo
