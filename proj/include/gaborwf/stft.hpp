#pragma once

#include <variant>

#include "gaborwf/atom.hpp"
#include "gaborwf/grid.hpp"
#include "gaborwf/window.hpp"

namespace gaborwf {

/// V_w u(x, xi) = int u(y) conj(w(y - x)) e^{-2 pi i y xi} dy on every point of pg.
/// pg.x points must lie on the (infinitely extended) sample lattice of u; samples outside
/// the grid count as zero. A custom window must share the signal step.
PhaseField stft_numeric(const SampledSignal& u, const Window& w, const PhaseGrid& pg);

/// Closed-form STFT against the standard Gaussian window.
cdouble stft_analytic(const Atom& a, PhasePoint z);
PhaseField stft_analytic(const Atom& a, const PhaseGrid& pg);

/// Catalog entry point that also checks the window; custom windows raise UnsupportedAtom.
cdouble stft_analytic(const Atom& a, PhasePoint z, const Window& w);

/// Cross-Wigner distribution W(u, v)(x, xi) = int e^{-2 pi i y xi} u(x + y/2) conj(v(x - y/2)) dy.
/// Points on the grid or half-grid use exact samples; others interpolate linearly.
PhaseField wigner_numeric(const SampledSignal& u, const SampledSignal& v, const PhaseGrid& pg);

/// Default sampling step used when an atom has to be evaluated numerically.
inline constexpr double kDefaultSampleStep = 1.0 / 128.0;

/// Picks the analytic catalog when possible and the sampled path otherwise.
/// Atoms analysed with a custom window are sampled at the window step over a grid
/// large enough to hold every requested x plus the window support.
class StftEvaluator {
 public:
  StftEvaluator(AtomPtr atom, Window w);
  StftEvaluator(SampledSignal u, Window w);

  PhaseField evaluate(const PhaseGrid& pg) const;

  /// True when values come from the closed form.
  bool analytic() const noexcept;

  /// Spacing that sampled x coordinates must respect; 0 for the analytic path.
  double x_quantum() const noexcept;

  const Window& window() const noexcept { return window_; }

 private:
  std::variant<AtomPtr, SampledSignal> source_;
  Window window_;
};

}  // namespace gaborwf
