#pragma once

#include <Eigen/Core>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "gaborwf/frames.hpp"
#include "gaborwf/grid.hpp"
#include "gaborwf/stft.hpp"

namespace gaborwf {

/// Angular sector of phase space truncated to the annulus r_min <= |z| <= r_max.
struct ConicSector {
  double theta = 0.0;
  double halfwidth = 0.0;
  double r_min = 0.0;
  double r_max = 1.0;

  bool contains_angle(double angle) const noexcept;
  bool contains(PhasePoint z) const noexcept;
};

/// Angle of z in [0, 2 pi).
double phase_angle(PhasePoint z) noexcept;
/// Distance between two angles on the circle, in [0, pi].
double angular_distance(double a, double b) noexcept;

struct SupStat {};
struct LpStat {
  double p = 2.0;  // infinity allowed
  double s = 0.0;
};
using Statistic = std::variant<SupStat, LpStat>;

struct DecayProfile {
  ConicSector sector;
  Statistic statistic;
  std::vector<double> radii;   // shell midpoints, increasing
  std::vector<double> values;  // statistic per shell
};

enum class DecayKind { Rapid, Polynomial, NonDecaying };

struct DecayClass {
  DecayKind kind = DecayKind::Rapid;
  double order = std::numeric_limits<double>::infinity();
  double order_stderr = 0.0;

  bool flagged() const noexcept { return kind != DecayKind::Rapid; }
};

const char* to_string(DecayKind k) noexcept;
int class_code(DecayKind k) noexcept;  // 0 rapid, 1 polynomial, 2 non-decaying

struct EstimatorConfig {
  int sectors = 72;
  double r_min = 4.0;
  double r_max = 20.0;
  int shells = 8;
  Statistic statistic = SupStat{};
  /// Sectors next to a singular ray fit orders of 3 and up; rays themselves stay below 0.5.
  double n_max = 2.5;
  double floor = 1e-12;
  /// Analyse V u(lambda + c) with c the |V u|^2 centroid over the lattice.
  bool recenter = true;
};

struct WaveFrontEstimate {
  int K = 0;
  std::vector<ConicSector> sectors;
  std::vector<DecayClass> classes;
  std::vector<int> flagged;
  PhasePoint center{};

  std::vector<double> flagged_angles() const;
};

/// K sectors centred at 2 pi j / K with halfwidth 1.5 pi / K (50% overlap).
std::vector<ConicSector> sector_partition(int K, double r_min, double r_max);

/// Equal-width shell edges on [r_min, r_max].
std::vector<double> shell_edges(double r_min, double r_max, int shells);

/// Per-shell statistic over lattice points in the sector; positions are the lattice points,
/// values are taken as given (so recentred coefficients analyse V u(lambda + offset)).
/// Throws InsufficientLattice when a shell holds fewer than 3 points.
DecayProfile decay_profile(const GaborCoefficients& c, const ConicSector& sec, int shells, const Statistic& stat);

/// Same statistic over a fine grid of relative positions; L^p sums carry the cell area.
DecayProfile decay_profile(const PhaseField& f, const ConicSector& sec, int shells, const Statistic& stat);

/// Log-log slope fit over the outer half of the shells (see README for the rules).
DecayClass classify_decay(const DecayProfile& p, double n_max = 8.0, double floor = 1e-12);

/// Summability heuristic for L^p statistics: Rapid or NonDecaying.
DecayClass classify_summable(const DecayProfile& p, double floor = 1e-12);

/// |V u|^2-weighted centroid of the lattice coefficients.
PhasePoint coefficient_centroid(const GaborCoefficients& c);

WaveFrontEstimate estimate_wavefront(const StftEvaluator& ev, const LatticeSpec& L, const EstimatorConfig& cfg = {});

struct AgreementReport {
  std::vector<DecayClass> discrete;
  std::vector<DecayClass> continuous;
  std::vector<int> flagged_discrete;
  std::vector<int> flagged_continuous;
  bool agree = false;
};

/// Classifies every sector twice under LpStat(p, s): from lattice sums and from Riemann sums
/// over `fine` (relative positions, step <= alpha / 4).
AgreementReport compare_discrete_continuous(const StftEvaluator& ev, const LatticeSpec& L, const PhaseGrid& fine,
                                            double p, double s, const EstimatorConfig& cfg = {});

/// Maps each flagged direction through S and rebins to the nearest sector centre.
/// Throws NotSymplectic unless det S = 1 within 1e-9.
WaveFrontEstimate transport_estimate(const WaveFrontEstimate& e, const Eigen::Matrix2d& S);

/// Tolerance check against exact rays: every flagged sector must be within 2 pi / K of a ray
/// (distance from the ray to the sector's closed interval), and every ray must lie inside a
/// flagged sector.
struct RayCheck {
  bool pass = false;
  std::vector<int> false_positives;
  std::vector<double> missed_rays;
};
RayCheck check_against_rays(const WaveFrontEstimate& e, const std::vector<double>& rays);

}  // namespace gaborwf
