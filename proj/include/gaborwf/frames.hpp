#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaborwf/grid.hpp"
#include "gaborwf/stft.hpp"
#include "gaborwf/window.hpp"

namespace gaborwf {

/// Separable lattice {(alpha k, beta m) : |k| <= kx, |m| <= kxi}, enumerated k-major.
struct LatticeSpec {
  double alpha = 0.5;
  double beta = 0.5;
  int kx = 40;
  int kxi = 40;

  void validate() const;
  std::size_t size() const noexcept { return static_cast<std::size_t>(2 * kx + 1) * static_cast<std::size_t>(2 * kxi + 1); }
  std::size_t index(int k, int m) const noexcept {
    return static_cast<std::size_t>(k + kx) * static_cast<std::size_t>(2 * kxi + 1) + static_cast<std::size_t>(m + kxi);
  }
  int k_of(std::size_t idx) const noexcept { return static_cast<int>(idx / (2 * kxi + 1)) - kx; }
  int m_of(std::size_t idx) const noexcept { return static_cast<int>(idx % (2 * kxi + 1)) - kxi; }
  PhasePoint point(std::size_t idx) const noexcept { return {alpha * k_of(idx), beta * m_of(idx)}; }

  /// The lattice as a phase grid, optionally translated by `offset`.
  PhaseGrid phase_grid(PhasePoint offset = {}) const;
};

/// values[i] = V u(lattice.point(i) + offset); the offset is zero unless the caller recentres.
struct GaborCoefficients {
  LatticeSpec lattice;
  std::string window_tag;
  std::vector<cdouble> values;
  PhasePoint offset{};
};

struct FrameReport {
  double A = 0.0;
  double B = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

struct DualWindow {
  SampledSignal window;
  int iterations = 0;
  double residual = 0.0;  // ||S dual - w|| / ||w||
};

/// Grid of the sampled frame model: step 1/40 on [-16, 16].
Grid1D default_frame_grid();

GaborCoefficients gabor_coefficients(const StftEvaluator& ev, const LatticeSpec& L, PhasePoint offset = {});
GaborCoefficients gabor_coefficients(const AtomPtr& u, const Window& w, const LatticeSpec& L);
GaborCoefficients gabor_coefficients(const SampledSignal& u, const Window& w, const LatticeSpec& L);

/// S f = sum_lambda <f, pi(lambda) w> pi(lambda) w on f's grid (h-weighted inner product).
SampledSignal frame_operator_apply(const SampledSignal& f, const Window& w, const LatticeSpec& L);

/// Extreme eigenvalues of S on the sampled model. Throws NotAFrame when alpha*beta >= 1
/// or the lower bound is below 1e-8.
FrameReport frame_bounds(const Window& w, const LatticeSpec& L, const Grid1D& grid = default_frame_grid());

/// Canonical dual S^{-1} w by conjugate gradients; NoConvergence past max_iterations.
DualWindow dual_window(const Window& w, const LatticeSpec& L, double tol = 1e-8,
                       const Grid1D& grid = default_frame_grid(), int max_iterations = 500);

/// sum_lambda c(lambda) pi(lambda) dual on the dual's grid.
SampledSignal reconstruct(const GaborCoefficients& c, const SampledSignal& dual);

/// Truncated discrete M^{p,q}_{v_s} norm; p or q = infinity uses a maximum.
/// The inner sum runs over k (position), the outer over m (frequency).
double modulation_norm(const GaborCoefficients& c, double p, double q, double s);
double modulation_norm(const StftEvaluator& ev, const LatticeSpec& L, double p, double q, double s);

}  // namespace gaborwf
