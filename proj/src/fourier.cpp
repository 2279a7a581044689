#include "gaborwf/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "fft.hpp"
#include "gaborwf/error.hpp"

namespace gaborwf {

namespace detail {

namespace {

// FFTW planning is not thread-safe; execution with fftw_execute_dft is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan get_plan(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find({n, sign});
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> scratch(n);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(std::make_pair(n, sign), plan);
  return plan;
}

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& data, int sign) {
  if (data.empty()) return;
  fftw_plan plan = get_plan(static_cast<int>(data.size()), sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace detail

Grid1D reciprocal_grid(const Grid1D& g) {
  const std::size_t n = g.count();
  const double dxi = 1.0 / (static_cast<double>(n) * g.step());
  const double c = static_cast<double>(n / 2);
  return Grid1D(-c * dxi, dxi, n);
}

SampledSignal dft(const SampledSignal& s) {
  const Grid1D& g = s.grid();
  const std::size_t n = g.count();
  const Grid1D fg = reciprocal_grid(g);
  const double c = static_cast<double>(n / 2);
  std::vector<cdouble> buf(n);
  for (std::size_t j = 0; j < n; ++j)
    buf[j] = s[j] * std::polar(1.0, kTwoPi * std::fmod(static_cast<double>(j) * c, static_cast<double>(n)) /
                                        static_cast<double>(n));
  detail::fft_inplace(buf, -1);
  for (std::size_t k = 0; k < n; ++k) buf[k] *= g.step() * std::polar(1.0, -kTwoPi * g.start() * fg.at(k));
  return SampledSignal(fg, std::move(buf));
}

SampledSignal idft(const SampledSignal& spectrum, const Grid1D& target) {
  const Grid1D fg = reciprocal_grid(target);
  const Grid1D& sg = spectrum.grid();
  if (sg.count() != fg.count() || std::abs(sg.step() - fg.step()) > 1e-12 * fg.step() ||
      std::abs(sg.start() - fg.start()) > 1e-9 * fg.step())
    throw GridMismatch("spectrum is not on the reciprocal grid of the target");
  const std::size_t n = target.count();
  const double c = static_cast<double>(n / 2);
  std::vector<cdouble> buf(n);
  for (std::size_t k = 0; k < n; ++k) buf[k] = spectrum[k] * std::polar(1.0, kTwoPi * target.start() * fg.at(k));
  detail::fft_inplace(buf, +1);
  for (std::size_t j = 0; j < n; ++j)
    buf[j] *= fg.step() * std::polar(1.0, -kTwoPi * std::fmod(static_cast<double>(j) * c, static_cast<double>(n)) /
                                              static_cast<double>(n));
  return SampledSignal(target, std::move(buf));
}

}  // namespace gaborwf
