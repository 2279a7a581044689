#include "gaborwf/stft.hpp"

#include <cmath>

#include "fft.hpp"
#include "gaborwf/error.hpp"

namespace gaborwf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// STFT of amp * exp(-pi p y^2 + 2 pi q y) against e^{-pi t^2}; Re p >= 0.
// Exponents are combined before exp so large cancelling terms do not overflow.
cdouble gaussian_family(cdouble log_amp, cdouble p, cdouble q, double x, double xi) {
  const cdouble a = p + 1.0;
  const cdouble b = q + x - cdouble(0.0, xi);
  return std::exp(log_amp + kPi * b * b / a - kPi * x * x) / std::sqrt(a);
}

// Conjugated window samples at offsets n*h, n in [first, first + values.size()).
struct WindowTaps {
  long long first = 0;
  std::vector<cdouble> values;
};

WindowTaps window_taps(const Window& w, double h) {
  WindowTaps taps;
  if (w.is_standard()) {
    const long long W = static_cast<long long>(std::ceil(w.radius() / h));
    taps.first = -W;
    taps.values.resize(2 * W + 1);
    for (long long n = -W; n <= W; ++n) {
      const double t = static_cast<double>(n) * h;
      taps.values[n + W] = std::exp(-kPi * t * t);
    }
    return taps;
  }
  const auto& s = w.samples();
  if (std::abs(s.grid().step() - h) > 1e-12 * h) throw GridMismatch("window step differs from signal step");
  taps.first = std::llround(s.grid().start() / h);
  taps.values.resize(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) taps.values[k] = std::conj(s[k]);
  return taps;
}

long long lattice_index(const Grid1D& g, double x) {
  const double k = g.index_of(x);
  const double kr = std::round(k);
  if (std::abs(k - kr) > 1e-6) throw GridMismatch("x = " + std::to_string(x) + " is not on the signal grid");
  return static_cast<long long>(kr);
}

}  // namespace

PhaseField stft_numeric(const SampledSignal& u, const Window& w, const PhaseGrid& pg) {
  const Grid1D& g = u.grid();
  const double h = g.step();
  const WindowTaps taps = window_taps(w, h);
  const std::size_t nx = pg.x.count();
  const std::size_t nxi = pg.xi.count();

  std::vector<long long> ix(nx);
  for (std::size_t i = 0; i < nx; ++i) ix[i] = lattice_index(g, pg.x.at(i));

  const double r = 1.0 / (h * pg.xi.step());
  const double rr = std::round(r);
  const bool use_fft = std::abs(r - rr) < 1e-9 * r && rr >= 1.0 && rr <= static_cast<double>(1 << 22);
  const std::size_t P = use_fft ? static_cast<std::size_t>(rr) : 0;
  const double xis = pg.xi.start();

  // e^{-2 pi i n h xis} for each tap
  std::vector<cdouble> tap_phase(taps.values.size());
  for (std::size_t j = 0; j < taps.values.size(); ++j) {
    const double n = static_cast<double>(taps.first + static_cast<long long>(j));
    tap_phase[j] = taps.values[j] * std::polar(1.0, -kTwoPi * std::fmod(n * h * xis, 1.0));
  }

  PhaseField out{pg, std::vector<cdouble>(pg.size())};

#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(nx); ++i) {
    const double x = pg.x.at(i);
    cdouble* row = out.values.data() + static_cast<std::size_t>(i) * nxi;
    if (use_fft) {
      std::vector<cdouble> bins(P);
      for (std::size_t j = 0; j < taps.values.size(); ++j) {
        const long long n = taps.first + static_cast<long long>(j);
        const cdouble s = u.at_index(ix[i] + n);
        if (s == cdouble{}) continue;
        long long b = n % static_cast<long long>(P);
        if (b < 0) b += static_cast<long long>(P);
        bins[b] += s * tap_phase[j];
      }
      detail::fft_inplace(bins, -1);
      for (std::size_t m = 0; m < nxi; ++m)
        row[m] = h * std::polar(1.0, -kTwoPi * std::fmod(x * pg.xi.at(m), 1.0)) * bins[m % P];
    } else {
      const double dphi = -kTwoPi * h * pg.xi.step();
      for (std::size_t m = 0; m < nxi; ++m) {
        cdouble acc{};
        for (std::size_t j = 0; j < taps.values.size(); ++j) {
          const long long n = taps.first + static_cast<long long>(j);
          const cdouble s = u.at_index(ix[i] + n);
          if (s == cdouble{}) continue;
          acc += s * tap_phase[j] * std::polar(1.0, std::fmod(dphi * static_cast<double>(n) * static_cast<double>(m), kTwoPi));
        }
        row[m] = h * std::polar(1.0, -kTwoPi * std::fmod(x * pg.xi.at(m), 1.0)) * acc;
      }
    }
  }
  return out;
}

cdouble stft_analytic(const Atom& a, PhasePoint z) {
  return std::visit(
      overloaded{
          [&](const Delta& d) {
            const double t = d.x0 - z.x;
            return std::exp(cdouble(-kPi * t * t, -kTwoPi * std::fmod(d.x0 * z.xi, 1.0)));
          },
          [&](const PlaneWave& p) { return gaussian_family(0.0, 0.0, cdouble(0.0, p.xi0), z.x, z.xi); },
          [&](const Chirp& c) { return gaussian_family(0.0, cdouble(0.0, -c.c), 0.0, z.x, z.xi); },
          [&](const Gaussian& G) {
            const double w = 1.0 / (G.sigma * G.sigma);
            return gaussian_family(-kPi * G.x0 * G.x0 * w, w, G.x0 * w, z.x, z.xi);
          },
          [&](const Shifted& s) {
            const PhasePoint inner{z.x - s.z0.x, z.xi - s.z0.xi};
            return std::polar(1.0, -kTwoPi * std::fmod(s.z0.x * inner.xi, 1.0)) * stft_analytic(*s.inner, inner);
          },
          [&](const Sum& s) {
            cdouble acc{};
            for (const auto& t : s.terms) acc += t.weight * stft_analytic(*t.atom, z);
            return acc;
          },
      },
      a.v);
}

cdouble stft_analytic(const Atom& a, PhasePoint z, const Window& w) {
  if (!w.is_standard()) throw UnsupportedAtom("closed-form STFT is only available for the standard Gaussian window");
  return stft_analytic(a, z);
}

PhaseField stft_analytic(const Atom& a, const PhaseGrid& pg) {
  PhaseField out{pg, std::vector<cdouble>(pg.size())};
#pragma omp parallel for
  for (long long k = 0; k < static_cast<long long>(pg.size()); ++k)
    out.values[k] = stft_analytic(a, pg.point(static_cast<std::size_t>(k)));
  return out;
}

PhaseField wigner_numeric(const SampledSignal& u, const SampledSignal& v, const PhaseGrid& pg) {
  const Grid1D& g = u.grid();
  if (!(g == v.grid())) throw GridMismatch("wigner inputs must share a grid");
  const double h = g.step();
  const long long N = static_cast<long long>(g.count());
  auto interp = [&](const SampledSignal& s, double k) -> cdouble {
    const double f = std::floor(k);
    const long long k0 = static_cast<long long>(f);
    const double t = k - f;
    if (t < 1e-9) return s.at_index(k0);
    return (1.0 - t) * s.at_index(k0) + t * s.at_index(k0 + 1);
  };

  PhaseField out{pg, std::vector<cdouble>(pg.size())};
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(pg.x.count()); ++i) {
    const double x = pg.x.at(i);
    const double kx = g.index_of(x);
    const double twice = 2.0 * kx;
    // y = 2 j h + offset, with offset h when x sits on the half grid
    const bool half = std::abs(twice - std::round(twice)) < 1e-9 && std::llround(twice) % 2 != 0;
    const double off = half ? 1.0 : 0.0;
    std::vector<double> ys;
    std::vector<cdouble> prod;
    for (long long j = -N; j <= N; ++j) {
      const double dj = static_cast<double>(j) + off / 2.0;  // y/2 in steps
      const double kp = kx + dj, km = kx - dj;
      if (kp < -1e-9 || km < -1e-9 || kp > N - 1 + 1e-9 || km > N - 1 + 1e-9) continue;
      ys.push_back(2.0 * dj * h);
      prod.push_back(interp(u, kp) * std::conj(interp(v, km)));
    }
    for (std::size_t m = 0; m < pg.xi.count(); ++m) {
      const double xi = pg.xi.at(m);
      cdouble acc{};
      for (std::size_t q = 0; q < ys.size(); ++q) acc += prod[q] * std::polar(1.0, -kTwoPi * std::fmod(ys[q] * xi, 1.0));
      out.values[pg.index(i, m)] = 2.0 * h * acc;
    }
  }
  return out;
}

StftEvaluator::StftEvaluator(AtomPtr atom, Window w) : source_(std::move(atom)), window_(std::move(w)) {
  if (!std::get<AtomPtr>(source_)) throw DomainError("null atom");
}

StftEvaluator::StftEvaluator(SampledSignal u, Window w) : source_(std::move(u)), window_(std::move(w)) {}

bool StftEvaluator::analytic() const noexcept {
  return std::holds_alternative<AtomPtr>(source_) && window_.is_standard();
}

double StftEvaluator::x_quantum() const noexcept {
  if (analytic()) return 0.0;
  if (auto* s = std::get_if<SampledSignal>(&source_)) return s->grid().step();
  return window_.samples().grid().step();
}

PhaseField StftEvaluator::evaluate(const PhaseGrid& pg) const {
  if (auto* s = std::get_if<SampledSignal>(&source_)) return stft_numeric(*s, window_, pg);
  const Atom& a = *std::get<AtomPtr>(source_);
  if (window_.is_standard()) return stft_analytic(a, pg);
  const double h = window_.samples().grid().step();
  const double lo = std::floor((pg.x.start() - window_.radius()) / h - 2.0);
  const double hi = std::ceil((pg.x.stop() + window_.radius()) / h + 2.0);
  Grid1D sg(lo * h, h, static_cast<std::size_t>(hi - lo + 1));
  return stft_numeric(eval_atom(a, sg), window_, pg);
}

}  // namespace gaborwf
