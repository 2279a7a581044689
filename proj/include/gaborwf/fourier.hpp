#pragma once

#include "gaborwf/grid.hpp"

namespace gaborwf {

/// Frequency grid reciprocal to g: step 1/(count*step), centred so that index floor(count/2) is 0.
Grid1D reciprocal_grid(const Grid1D& g);

/// Riemann-sum approximation of f^(xi) = int e^{-2 pi i x xi} f(x) dx on reciprocal_grid(s.grid()).
SampledSignal dft(const SampledSignal& s);

/// Inverse of dft: f(x) = int e^{2 pi i x xi} F(xi) dxi, evaluated on the time grid `target`.
/// F must live on reciprocal_grid(target).
SampledSignal idft(const SampledSignal& spectrum, const Grid1D& target);

}  // namespace gaborwf
