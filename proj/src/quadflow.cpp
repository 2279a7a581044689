#include "gaborwf/quadflow.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gaborwf/error.hpp"
#include "gaborwf/fourier.hpp"
#include "gaborwf/stft.hpp"

namespace gaborwf {

namespace {

constexpr double kSingularGuard = 0.05;
constexpr double kExactBranch = 1e-12;
constexpr std::size_t kMaxPadded = std::size_t{1} << 22;

// Taylor series of degree 18 after scaling the argument below 1/2 in the 1-norm.
Eigen::Matrix2d expm(const Eigen::Matrix2d& M) {
  const double norm = M.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::Matrix2d X = M / std::ldexp(1.0, s);
  Eigen::Matrix2d term = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d sum = Eigen::Matrix2d::Identity();
  for (int k = 1; k <= 18; ++k) {
    term = term * X / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

long long nearest_multiple_of_pi(double t) { return std::llround(t / kPi); }

}  // namespace

const char* to_string(HamiltonianTag t) noexcept { return t == HamiltonianTag::Free ? "free" : "harmonic"; }

QuadraticHamiltonian hamiltonian_for(HamiltonianTag t) {
  return t == HamiltonianTag::Free ? QuadraticHamiltonian::free_particle() : QuadraticHamiltonian::harmonic();
}

Eigen::Matrix2d hamiltonian_matrix(const QuadraticHamiltonian& H) {
  Eigen::Matrix2d M;
  M << H.B, H.C, -H.A, -H.B;
  return M;
}

double symplectic_defect(const Eigen::Matrix2d& S) {
  Eigen::Matrix2d J;
  J << 0, 1, -1, 0;
  return (S.transpose() * J * S - J).cwiseAbs().maxCoeff();
}

Eigen::Matrix2d classical_flow(const QuadraticHamiltonian& H, double t) {
  if (!std::isfinite(t)) throw DomainError("time must be finite");
  const Eigen::Matrix2d S = expm((t / kTwoPi) * hamiltonian_matrix(H));
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff() * S.cwiseAbs().maxCoeff());
  if (!(symplectic_defect(S) < 1e-10 * scale)) throw NotSymplectic("flow matrix lost the symplectic invariant");
  return S;
}

SampledSignal propagate_free(const SampledSignal& u0, double t) {
  if (!std::isfinite(t)) throw DomainError("time must be finite");
  if (t == 0.0) return u0;
  const Grid1D& g = u0.grid();
  const double h = g.step();
  // pad so that the band |xi| <= 1/(2h), which travels 2 pi |t| xi, cannot wrap around
  const double travel = kPi * std::abs(t) / h;
  std::size_t pad = static_cast<std::size_t>(std::ceil(travel / h)) + 16;
  std::size_t total = g.count() + 2 * pad;
  if (total > kMaxPadded) {
    pad = (kMaxPadded - g.count()) / 2;
    total = g.count() + 2 * pad;
  }
  const Grid1D pg(g.start() - static_cast<double>(pad) * h, h, total);
  std::vector<cdouble> padded(total);
  for (std::size_t j = 0; j < g.count(); ++j) padded[j + pad] = u0[j];
  SampledSignal spec = dft(SampledSignal(pg, std::move(padded)));
  auto& v = spec.mutable_values();
  const Grid1D& fg = spec.grid();
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double xi = fg.at(k);
    v[k] *= std::polar(1.0, -kTwoPi * std::fmod(kPi * t * xi * xi, 1.0));
  }
  SampledSignal back = idft(spec, pg);
  std::vector<cdouble> out(g.count());
  for (std::size_t j = 0; j < g.count(); ++j) out[j] = back[j + pad];
  return SampledSignal(g, std::move(out));
}

SampledSignal propagate_harmonic(const SampledSignal& u0, double t) {
  if (!std::isfinite(t)) throw DomainError("time must be finite");
  const long long kn = nearest_multiple_of_pi(t);
  const double dist = std::abs(t - static_cast<double>(kn) * kPi);
  const Grid1D& g = u0.grid();
  const std::size_t n = g.count();

  if (dist <= kExactBranch) {
    if (kn % 4 == 0) return u0;
    const cdouble c = std::polar(1.0, -kPi * static_cast<double>(kn) / 2.0);
    std::vector<cdouble> out(n);
    const bool reflect = (kn % 2) != 0;
    if (reflect && std::abs(g.start() + g.stop()) > 1e-9 * g.step())
      throw DomainError("reflection branch needs a grid symmetric about 0");
    for (std::size_t j = 0; j < n; ++j) out[j] = c * u0[reflect ? n - 1 - j : j];
    return SampledSignal(g, std::move(out));
  }
  if (dist <= kSingularGuard)
    throw NearSingularTime("t = " + std::to_string(t) + " lies within 0.05 of a multiple of pi");

  const long long k = static_cast<long long>(std::floor(t / kPi));
  const double st = std::sin(t);
  const double cot = std::cos(t) / st;
  const cdouble ck = std::polar(1.0 / std::sqrt(std::abs(st)), -kPi * static_cast<double>(2 * k + 1) / 4.0);
  const double h = g.step();

  std::vector<cdouble> pre(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = g.at(j);
    pre[j] = u0[j] * std::polar(1.0, kTwoPi * std::fmod(0.5 * cot * y * y, 1.0));
  }

  std::vector<cdouble> out(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const double x = g.at(i);
    const double f = x / st;  // frequency of e^{-2 pi i x y / sin t} in y
    const cdouble step = std::polar(1.0, -kTwoPi * std::fmod(f * h, 1.0));
    cdouble acc{};
    cdouble ph{};
    for (std::size_t j = 0; j < n; ++j) {
      if (j % 256 == 0) ph = std::polar(1.0, -kTwoPi * std::fmod(f * g.at(j), 1.0));
      acc += pre[j] * ph;
      ph *= step;
    }
    out[i] = h * ck * std::polar(1.0, kTwoPi * std::fmod(0.5 * cot * x * x, 1.0)) * acc;
  }
  return SampledSignal(g, std::move(out));
}

SampledSignal propagate(HamiltonianTag tag, const SampledSignal& u0, double t) {
  return tag == HamiltonianTag::Free ? propagate_free(u0, t) : propagate_harmonic(u0, t);
}

Grid1D default_propagation_grid() { return Grid1D::symmetric(28.0, 1.0 / 128.0); }

double ridge_slope(const SampledSignal& u, const std::vector<double>& xs, double xi_min, double xi_max,
                   double xi_step) {
  if (xs.size() < 2) throw DomainError("ridge fit needs at least two x values");
  if (!(xi_step > 0.0) || !(xi_max > xi_min)) throw DomainError("bad frequency range");
  const std::size_t nxi = static_cast<std::size_t>(std::floor((xi_max - xi_min) / xi_step)) + 1;
  std::vector<double> px, py;
  for (double x : xs) {
    const PhaseGrid pg{Grid1D(x, u.grid().step(), 2), Grid1D(xi_min, xi_step, nxi)};
    const PhaseField f = stft_numeric(u, Window::standard_gaussian(), pg);
    std::size_t best = 0;
    for (std::size_t m = 1; m < nxi; ++m)
      if (std::abs(f.at(0, m)) > std::abs(f.at(0, best))) best = m;
    double xi = pg.xi.at(best);
    if (best > 0 && best + 1 < nxi) {
      const double a = std::log(std::abs(f.at(0, best - 1)));
      const double b = std::log(std::abs(f.at(0, best)));
      const double c = std::log(std::abs(f.at(0, best + 1)));
      const double den = a - 2.0 * b + c;
      if (den < 0.0) xi += 0.5 * xi_step * (a - c) / den;
    }
    px.push_back(x);
    py.push_back(xi);
  }
  const double n = static_cast<double>(px.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    mx += px[i];
    my += py[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    sxx += (px[i] - mx) * (px[i] - mx);
    sxy += (px[i] - mx) * (py[i] - my);
  }
  return sxy / sxx;
}

PropagationReport verify_propagation(const AtomPtr& u0, HamiltonianTag tag, double t, const EstimatorConfig& cfg,
                                     const LatticeSpec& L) {
  if (!u0) throw DomainError("null atom");
  if (tag == HamiltonianTag::Harmonic) {
    const long long kn = nearest_multiple_of_pi(t);
    const double dist = std::abs(t - static_cast<double>(kn) * kPi);
    if (dist > kExactBranch && dist <= kSingularGuard)
      throw NearSingularTime("t = " + std::to_string(t) + " lies within 0.05 of a multiple of pi");
  }
  const Eigen::Matrix2d S = classical_flow(hamiltonian_for(tag), t);
  const Window std_window = Window::standard_gaussian();

  const WaveFrontEstimate before = estimate_wavefront(StftEvaluator(u0, std_window), L, cfg);
  const WaveFrontEstimate predicted = transport_estimate(before, S);

  const SampledSignal ut = propagate(tag, eval_atom(*u0, default_propagation_grid()), t);
  const WaveFrontEstimate observed = estimate_wavefront(StftEvaluator(ut, std_window), L, cfg);

  PropagationReport rep;
  rep.hamiltonian = tag;
  rep.t = t;
  rep.predicted = predicted.flagged_angles();
  rep.observed = observed.flagged_angles();
  auto worst = [](const std::vector<double>& from, const std::vector<double>& to) {
    double w = 0.0;
    for (double a : from) {
      double best = kPi;
      for (double b : to) best = std::min(best, angular_distance(a, b));
      w = std::max(w, best);
    }
    return w;
  };
  if (rep.predicted.empty() != rep.observed.empty()) {
    rep.max_mismatch = kPi;
  } else {
    rep.max_mismatch = std::max(worst(rep.predicted, rep.observed), worst(rep.observed, rep.predicted));
  }
  rep.pass = rep.max_mismatch <= kTwoPi / cfg.sectors + 1e-9;
  return rep;
}

}  // namespace gaborwf
