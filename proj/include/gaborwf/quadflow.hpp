#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "gaborwf/atom.hpp"
#include "gaborwf/grid.hpp"
#include "gaborwf/wavefront.hpp"

namespace gaborwf {

/// Weyl symbol a(x, xi) = A x^2 / 2 + B xi x + C xi^2 / 2 (n = 1).
struct QuadraticHamiltonian {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;

  /// A = C = 2 pi; flow is the rotation [[cos t, sin t], [-sin t, cos t]].
  static QuadraticHamiltonian harmonic() { return {kTwoPi, 0.0, kTwoPi}; }
  /// Symbol 2 pi^2 xi^2; flow [[1, 2 pi t], [0, 1]].
  static QuadraticHamiltonian free_particle() { return {0.0, 0.0, 4.0 * kPi * kPi}; }
};

enum class HamiltonianTag { Free, Harmonic };

const char* to_string(HamiltonianTag t) noexcept;
QuadraticHamiltonian hamiltonian_for(HamiltonianTag t);

/// [[B, C], [-A, -B]]
Eigen::Matrix2d hamiltonian_matrix(const QuadraticHamiltonian& H);

/// max |S^T J S - J| with J = [[0, 1], [-1, 0]].
double symplectic_defect(const Eigen::Matrix2d& S);

/// exp((t / 2 pi) * hamiltonian_matrix(H)) by scaling and squaring. Throws NotSymplectic
/// if the result misses the symplectic invariant.
Eigen::Matrix2d classical_flow(const QuadraticHamiltonian& H, double t);

/// Multiplier e^{-2 pi^2 i t xi^2} applied after zero padding; result on u0's grid.
SampledSignal propagate_free(const SampledSignal& u0, double t);

/// Mehler kernel quadrature; t = k pi exactly uses the reflection branch.
/// Throws NearSingularTime when 0 < |t - k pi| <= 0.05.
SampledSignal propagate_harmonic(const SampledSignal& u0, double t);

SampledSignal propagate(HamiltonianTag tag, const SampledSignal& u0, double t);

/// Grid used to sample atoms before propagation: step 1/128 on [-28, 28].
Grid1D default_propagation_grid();

/// Least-squares slope of the STFT magnitude ridge: for each x the xi maximising |V u(x, .)|
/// (parabolic refinement), then a line fit xi = slope * x + b over `xs`.
double ridge_slope(const SampledSignal& u, const std::vector<double>& xs, double xi_min, double xi_max,
                   double xi_step);

struct PropagationReport {
  HamiltonianTag hamiltonian = HamiltonianTag::Free;
  double t = 0.0;
  std::vector<double> predicted;  // flagged sector centres, radians
  std::vector<double> observed;
  double max_mismatch = 0.0;
  bool pass = false;
};

/// Compares the transported estimate of u0 with the estimate of the propagated samples.
PropagationReport verify_propagation(const AtomPtr& u0, HamiltonianTag tag, double t,
                                     const EstimatorConfig& cfg = {}, const LatticeSpec& L = {});

}  // namespace gaborwf
