#include "gaborwf/grid.hpp"

#include <cmath>

#include "gaborwf/error.hpp"

namespace gaborwf {

Grid1D::Grid1D(double start, double step, std::size_t count) : start_(start), step_(step), count_(count) {
  if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start))
    throw DomainError("grid step must be positive and finite");
  if (count < 2) throw DomainError("grid needs at least 2 points");
}

Grid1D Grid1D::symmetric(double half_width, double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  const double n = half_width / step;
  const double nr = std::round(n);
  if (std::abs(n - nr) > 1e-9 * std::max(1.0, nr))
    throw DomainError("half width is not a multiple of the step");
  return Grid1D(-nr * step, step, static_cast<std::size_t>(2 * nr + 1));
}

bool Grid1D::on_lattice(double t) const noexcept {
  const double k = index_of(t);
  return std::abs(k - std::round(k)) < 1e-9 * std::max(1.0, std::abs(k)) + 1e-9;
}

bool Grid1D::contains(double t) const noexcept {
  const double k = index_of(t);
  return k > -1e-9 && k < static_cast<double>(count_ - 1) + 1e-9;
}

SampledSignal::SampledSignal(Grid1D grid, std::vector<cdouble> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.count())
    throw DomainError("sample count " + std::to_string(values_.size()) + " does not match grid count " +
                      std::to_string(grid_.count()));
}

SampledSignal SampledSignal::zeros(Grid1D grid) {
  return SampledSignal(grid, std::vector<cdouble>(grid.count()));
}

double SampledSignal::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s * grid_.step());
}

static void require_same_grid(const SampledSignal& f, const SampledSignal& g) {
  const auto& a = f.grid();
  const auto& b = g.grid();
  if (a.count() != b.count() || std::abs(a.step() - b.step()) > 1e-12 * a.step() ||
      std::abs(a.start() - b.start()) > 1e-9 * a.step())
    throw GridMismatch("signals live on different grids");
}

cdouble inner_product(const SampledSignal& f, const SampledSignal& g) {
  require_same_grid(f, g);
  cdouble s{};
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * std::conj(g[k]);
  return s * f.grid().step();
}

SampledSignal multiply(const SampledSignal& f, const SampledSignal& g) {
  require_same_grid(f, g);
  std::vector<cdouble> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = f[k] * g[k];
  return SampledSignal(f.grid(), std::move(out));
}

double relative_l2_error(const SampledSignal& f, const SampledSignal& reference) {
  require_same_grid(f, reference);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    num += std::norm(f[k] - reference[k]);
    den += std::norm(reference[k]);
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace gaborwf
