#pragma once

#include <optional>

#include "gaborwf/grid.hpp"

namespace gaborwf {

/// Analysis window: the standard Gaussian e^{-pi t^2} or sampled values on a grid.
class Window {
 public:
  static Window standard_gaussian();
  /// Values must be finite and not all zero; the grid start must sit on the step lattice.
  static Window custom(SampledSignal samples);
  /// Samples e^{-pi t^2 / sigma^2} on [-6 sigma, 6 sigma] rounded out to the step.
  static Window sampled_gaussian(double sigma, double step);

  bool is_standard() const noexcept { return !samples_.has_value(); }
  const SampledSignal& samples() const;

  /// Window value at t; custom windows are zero off their grid and use the nearest sample.
  cdouble value(double t) const;

  /// Support radius beyond which the window is treated as zero.
  double radius() const noexcept { return radius_; }

  /// ||window||_2.
  double l2_norm() const;

  /// Short tag for metadata: "standard" or "custom".
  const char* tag() const noexcept { return is_standard() ? "standard" : "custom"; }

 private:
  Window() = default;
  std::optional<SampledSignal> samples_;
  double radius_ = 6.0;
};

}  // namespace gaborwf
