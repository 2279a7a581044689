#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gaborwf {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// A point z = (x, xi) of phase space.
struct PhasePoint {
  double x = 0.0;
  double xi = 0.0;
};

/// Uniform one-dimensional grid: points start + k * step, k = 0..count-1.
class Grid1D {
 public:
  Grid1D(double start, double step, std::size_t count);

  /// Symmetric grid on [-half_width, half_width]; half_width must be a multiple of step.
  static Grid1D symmetric(double half_width, double step);

  double start() const noexcept { return start_; }
  double step() const noexcept { return step_; }
  std::size_t count() const noexcept { return count_; }
  double stop() const noexcept { return start_ + static_cast<double>(count_ - 1) * step_; }
  double at(std::size_t k) const noexcept { return start_ + static_cast<double>(k) * step_; }

  /// Fractional index of t, i.e. (t - start) / step.
  double index_of(double t) const noexcept { return (t - start_) / step_; }

  /// True if t is within 1e-9 steps of a grid point of the infinite extension of this grid.
  bool on_lattice(double t) const noexcept;

  bool contains(double t) const noexcept;

  bool operator==(const Grid1D&) const = default;

 private:
  double start_;
  double step_;
  std::size_t count_;
};

/// Cartesian product grid in phase space; canonical order is x-index major.
struct PhaseGrid {
  Grid1D x;
  Grid1D xi;

  std::size_t size() const noexcept { return x.count() * xi.count(); }
  std::size_t index(std::size_t ix, std::size_t ixi) const noexcept { return ix * xi.count() + ixi; }
  PhasePoint point(std::size_t flat) const noexcept {
    return {x.at(flat / xi.count()), xi.at(flat % xi.count())};
  }
};

/// Complex samples on a Grid1D.
class SampledSignal {
 public:
  SampledSignal(Grid1D grid, std::vector<cdouble> values);
  static SampledSignal zeros(Grid1D grid);

  const Grid1D& grid() const noexcept { return grid_; }
  std::span<const cdouble> values() const noexcept { return values_; }
  std::vector<cdouble>& mutable_values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  cdouble operator[](std::size_t k) const noexcept { return values_[k]; }

  /// Sample at grid index k of the infinite extension, zero outside.
  cdouble at_index(long long k) const noexcept {
    return (k < 0 || k >= static_cast<long long>(values_.size())) ? cdouble{} : values_[k];
  }

  /// L2 norm with the Riemann weight `step`.
  double l2_norm() const;

 private:
  Grid1D grid_;
  std::vector<cdouble> values_;
};

/// Complex values over a PhaseGrid, in canonical order.
struct PhaseField {
  PhaseGrid grid;
  std::vector<cdouble> values;

  cdouble at(std::size_t ix, std::size_t ixi) const { return values[grid.index(ix, ixi)]; }
};

/// <f, g> = step * sum f conj(g); grids must match.
cdouble inner_product(const SampledSignal& f, const SampledSignal& g);

/// Pointwise product, used for enveloped test signals.
SampledSignal multiply(const SampledSignal& f, const SampledSignal& g);

/// Relative L2 distance ||f - g|| / ||g||.
double relative_l2_error(const SampledSignal& f, const SampledSignal& reference);

}  // namespace gaborwf
