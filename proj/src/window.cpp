#include "gaborwf/window.hpp"

#include <cmath>

#include "gaborwf/error.hpp"

namespace gaborwf {

Window Window::standard_gaussian() { return Window(); }

Window Window::custom(SampledSignal samples) {
  bool any = false;
  for (const auto& v : samples.values()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("window values must be finite");
    if (v != cdouble{}) any = true;
  }
  if (!any) throw DomainError("window must not vanish identically");
  const auto& g = samples.grid();
  const double s = g.start() / g.step();
  if (std::abs(s - std::round(s)) > 1e-9 * std::max(1.0, std::abs(s)))
    throw GridMismatch("window grid start must be an integer multiple of its step");
  Window w;
  double r = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k)
    if (samples[k] != cdouble{}) r = std::max(r, std::abs(g.at(k)));
  w.radius_ = r;
  w.samples_.emplace(std::move(samples));
  return w;
}

Window Window::sampled_gaussian(double sigma, double step) {
  if (!(sigma > 0.0)) throw DomainError("window width must be positive");
  const double half = std::ceil(6.0 * sigma / step) * step;
  const Grid1D g = Grid1D::symmetric(half, step);
  std::vector<cdouble> v(g.count());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double u = g.at(k) / sigma;
    v[k] = std::exp(-kPi * u * u);
  }
  return custom(SampledSignal(g, std::move(v)));
}

const SampledSignal& Window::samples() const {
  if (!samples_) throw UnsupportedAtom("standard window has no sample grid");
  return *samples_;
}

cdouble Window::value(double t) const {
  if (!samples_) return std::exp(-kPi * t * t);
  const auto& g = samples_->grid();
  const double k = std::round(g.index_of(t));
  if (k < 0 || k > static_cast<double>(g.count() - 1)) return {};
  return (*samples_)[static_cast<std::size_t>(k)];
}

double Window::l2_norm() const {
  if (!samples_) return std::pow(2.0, -0.25);
  return samples_->l2_norm();
}

}  // namespace gaborwf
