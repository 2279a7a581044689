#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gaborwf/gaborwf.hpp"
#include "oracle.hpp"

using namespace gaborwf;
using doctest::Approx;

namespace {

// Dense S = h G G^* with G's columns the sampled time-frequency shifts of e^{-pi t^2}.
Eigen::MatrixXcd dense_frame_operator(const Grid1D& g, const LatticeSpec& L) {
  const Eigen::Index n = static_cast<Eigen::Index>(g.count());
  Eigen::MatrixXcd G(n, static_cast<Eigen::Index>(L.size()));
  for (std::size_t i = 0; i < L.size(); ++i) {
    const PhasePoint z = L.point(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double t = g.at(j);
      G(j, i) = std::exp(-oracle::pi * (t - z.x) * (t - z.x)) * std::exp(oracle::cd(0, 2 * oracle::pi * z.xi * t));
    }
  }
  return g.step() * G * G.adjoint();
}

SampledSignal random_signal(const Grid1D& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<cdouble> v(g.count());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double t = g.at(j);
    v[j] = cdouble(nd(rng), nd(rng)) * std::exp(-t * t / 40.0);
  }
  return SampledSignal(g, v);
}

double analysis_energy(const SampledSignal& f, const LatticeSpec& L) {
  // sum_lambda |<f, pi(lambda) w>|^2 computed directly
  double e = 0.0;
  const Grid1D& g = f.grid();
  for (std::size_t i = 0; i < L.size(); ++i) {
    const PhasePoint z = L.point(i);
    oracle::cd acc = 0.0;
    for (std::size_t j = 0; j < g.count(); ++j) {
      const double t = g.at(j);
      if (std::abs(t - z.x) > 7) continue;
      acc += f[j] * std::exp(-oracle::pi * (t - z.x) * (t - z.x)) * std::exp(oracle::cd(0, -2 * oracle::pi * z.xi * t));
    }
    e += std::norm(acc * g.step());
  }
  return e;
}

const Grid1D kSmall = Grid1D::symmetric(8.0, 1.0 / 8);
const LatticeSpec kSmallLattice{0.5, 0.5, 16, 8};  // covers [-8, 8] and the Nyquist band

}  // namespace

TEST_CASE("lattice spec enumeration") {
  const LatticeSpec L{0.5, 0.25, 3, 2};
  CHECK(L.size() == 35);
  CHECK(L.k_of(L.index(-3, 2)) == -3);
  CHECK(L.m_of(L.index(1, -2)) == -2);
  CHECK(L.point(L.index(2, 1)).x == 1.0);
  CHECK(L.point(L.index(2, 1)).xi == 0.25);
  CHECK_THROWS_AS((LatticeSpec{0.0, 0.5, 3, 3}.validate()), DomainError);
  CHECK_THROWS_AS((LatticeSpec{0.5, 0.5, 0, 3}.validate()), DomainError);
}

TEST_CASE("coefficients of the canonical atoms") {
  const LatticeSpec L{0.5, 0.5, 16, 16};
  const auto d = gabor_coefficients(make_delta(0.0), Window::standard_gaussian(), L);
  const auto p = gabor_coefficients(make_planewave(0.0), Window::standard_gaussian(), L);
  for (std::size_t i = 0; i < L.size(); ++i) {
    const double k = L.k_of(i), m = L.m_of(i);
    CHECK(std::abs(d.values[i]) == Approx(std::exp(-kPi * k * k / 4)).epsilon(1e-12));
    CHECK(std::abs(p.values[i]) == Approx(std::exp(-kPi * m * m / 4)).epsilon(1e-12));
  }
  const auto z = gabor_coefficients(SampledSignal::zeros(Grid1D::symmetric(16.0, 1.0 / 64)), Window::standard_gaussian(), L);
  for (const auto& v : z.values) CHECK(v == cdouble(0.0));
}

TEST_CASE("frame operator matches the dense oracle") {
  const Eigen::MatrixXcd S = dense_frame_operator(kSmall, kSmallLattice);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = random_signal(kSmall, rng);
    const auto Sf = frame_operator_apply(f, Window::standard_gaussian(), kSmallLattice);
    Eigen::VectorXcd fv(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) fv(j) = f[j];
    const Eigen::VectorXcd want = S * fv;
    double err = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) err = std::max(err, std::abs(Sf[j] - want(j)));
    CHECK(err < 1e-11 * want.cwiseAbs().maxCoeff());
  }
  const auto zero = frame_operator_apply(SampledSignal::zeros(kSmall), Window::standard_gaussian(), kSmallLattice);
  for (const auto& v : zero.values()) CHECK(v == cdouble(0.0));
}

TEST_CASE("frame bounds match a dense eigendecomposition") {
  const Eigen::MatrixXcd S = dense_frame_operator(kSmall, kSmallLattice);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  const FrameReport r = frame_bounds(Window::standard_gaussian(), kSmallLattice, kSmall);
  CHECK(r.A == Approx(lo).epsilon(1e-8));
  CHECK(r.B == Approx(hi).epsilon(1e-8));
  CHECK(r.A <= r.B);
  CHECK(r.residual >= 0.0);
  CHECK(r.residual < 1e-6);
}

TEST_CASE("default frame bounds") {
  const FrameReport r = frame_bounds(Window::standard_gaussian(), LatticeSpec{});
  CHECK(r.A > 0.0);
  CHECK(r.B / r.A < 10.0);
  MESSAGE("A = " << r.A << ", B = " << r.B << ", B/A = " << r.B / r.A);
  const FrameReport again = frame_bounds(Window::standard_gaussian(), LatticeSpec{});
  CHECK(again.A == r.A);
  CHECK(again.B == r.B);
}

TEST_CASE("self-adjointness and positivity") {
  const Grid1D g = default_frame_grid();
  const LatticeSpec L;
  std::mt19937_64 rng(3);
  const FrameReport r = frame_bounds(Window::standard_gaussian(), L);
  for (int trial = 0; trial < 4; ++trial) {
    const auto f = random_signal(g, rng);
    const auto k = random_signal(g, rng);
    const auto Sf = frame_operator_apply(f, Window::standard_gaussian(), L);
    const auto Sk = frame_operator_apply(k, Window::standard_gaussian(), L);
    CHECK(std::abs(inner_product(Sf, k) - inner_product(f, Sk)) < 1e-9);
    const cdouble q = inner_product(Sf, f);
    CHECK(std::abs(q.imag()) < 1e-10 * std::abs(q));
    const double rayleigh = q.real() / std::pow(f.l2_norm(), 2);
    CHECK(rayleigh >= r.A * (1 - 1e-9));
    CHECK(rayleigh <= r.B * (1 + 1e-9));
  }
  const auto gs = eval_atom(*make_gaussian(0.0, 1.0), g);
  const double rq = inner_product(frame_operator_apply(gs, Window::standard_gaussian(), L), gs).real() /
                    std::pow(gs.l2_norm(), 2);
  CHECK(rq >= r.A * (1 - 1e-9));
  CHECK(rq <= r.B * (1 + 1e-9));
}

TEST_CASE("property: frame inequality on random signals") {
  const LatticeSpec L = kSmallLattice;
  const FrameReport r = frame_bounds(Window::standard_gaussian(), L, kSmall);
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_signal(kSmall, rng);
    const double e = analysis_energy(f, L), n2 = std::pow(f.l2_norm(), 2);
    CHECK(e >= r.A * n2 * (1 - 1e-6));
    CHECK(e <= r.B * n2 * (1 + 1e-6));
  }
}

TEST_CASE("not a frame") {
  CHECK_THROWS_AS(frame_bounds(Window::standard_gaussian(), LatticeSpec{1.0, 1.0, 10, 10}), NotAFrame);
  CHECK_THROWS_AS(frame_bounds(Window::standard_gaussian(), LatticeSpec{2.0, 0.75, 10, 10}), NotAFrame);
  CHECK_THROWS_AS(dual_window(Window::standard_gaussian(), LatticeSpec{1.0, 1.5, 10, 10}), NotAFrame);
  // lattice far too short to cover the grid: the sampled S is singular
  CHECK_THROWS_AS(frame_bounds(Window::standard_gaussian(), LatticeSpec{0.5, 0.5, 2, 2}, kSmall), NotAFrame);
}

TEST_CASE("dual window against a dense solve") {
  const Eigen::MatrixXcd S = dense_frame_operator(kSmall, kSmallLattice);
  Eigen::VectorXcd phi(kSmall.count());
  for (std::size_t j = 0; j < kSmall.count(); ++j) phi(j) = std::exp(-oracle::pi * kSmall.at(j) * kSmall.at(j));
  const Eigen::VectorXcd want = S.ldlt().solve(phi);
  const DualWindow d = dual_window(Window::standard_gaussian(), kSmallLattice, 1e-10, kSmall);
  double err = 0.0;
  for (std::size_t j = 0; j < kSmall.count(); ++j) err = std::max(err, std::abs(d.window[j] - want(j)));
  CHECK(err < 1e-8 * want.cwiseAbs().maxCoeff());
  CHECK(d.residual <= 1e-10);
}

TEST_CASE("dual window residual, decay and reconstruction") {
  const LatticeSpec L;
  const DualWindow d = dual_window(Window::standard_gaussian(), L, 1e-8);
  CHECK(d.residual <= 1e-8);
  CHECK(d.iterations > 0);
  const auto Sd = frame_operator_apply(d.window, Window::standard_gaussian(), L);
  const auto phi = eval_atom(*make_gaussian(0.0, 1.0), default_frame_grid());
  CHECK(relative_l2_error(Sd, phi) <= 1e-8);
  for (std::size_t j = 0; j < d.window.size(); ++j)
    if (std::abs(d.window.grid().at(j)) > 10) CHECK(std::abs(d.window[j]) < 1e-6);

  const auto g = default_frame_grid();
  for (const auto& u : {make_gaussian(0.0, 1.0), make_gaussian(1.0, 2.0)}) {
    const auto rec = reconstruct(gabor_coefficients(u, Window::standard_gaussian(), L), d.window);
    CHECK(relative_l2_error(rec, eval_atom(*u, g)) < 1e-6);
  }
  // enveloped chirp: e^{pi i t^2} e^{-pi t^2 / 9}
  std::vector<cdouble> v(g.count());
  for (std::size_t j = 0; j < g.count(); ++j) {
    const double t = g.at(j);
    v[j] = std::polar(std::exp(-kPi * t * t / 9.0), kPi * t * t);
  }
  const SampledSignal chirp(g, v);
  const auto rec = reconstruct(gabor_coefficients(chirp, Window::standard_gaussian(), L), d.window);
  CHECK(relative_l2_error(rec, chirp) < 1e-5);

  GaborCoefficients zero{L, "standard", std::vector<cdouble>(L.size()), {}};
  const auto rz = reconstruct(zero, d.window);
  for (const auto& z : rz.values()) CHECK(z == cdouble(0.0));
}

TEST_CASE("property: larger truncation does not worsen reconstruction") {
  const auto g = default_frame_grid();
  const auto u = make_gaussian(0.5, 1.5);
  double prev = 1e300;
  for (int K : {16, 24, 32, 40}) {
    const LatticeSpec L{0.5, 0.5, K, K};
    const DualWindow d = dual_window(Window::standard_gaussian(), L, 1e-10);
    const double err = relative_l2_error(reconstruct(gabor_coefficients(u, Window::standard_gaussian(), L), d.window),
                                         eval_atom(*u, g));
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
}

TEST_CASE("dual window error paths") {
  CHECK_THROWS_AS(dual_window(Window::standard_gaussian(), LatticeSpec{}, 1e-14, default_frame_grid(), 3), NoConvergence);
  try {
    dual_window(Window::standard_gaussian(), LatticeSpec{}, 1e-14, default_frame_grid(), 3);
  } catch (const NoConvergence& e) {
    CHECK(e.iterations() == 3);
    CHECK(e.residual() > 0.0);
  }
  CHECK_THROWS_AS(dual_window(Window::standard_gaussian(), LatticeSpec{}, 0.0), DomainError);
  GaborCoefficients bad{LatticeSpec{}, "standard", std::vector<cdouble>(3), {}};
  CHECK_THROWS_AS(reconstruct(bad, SampledSignal::zeros(default_frame_grid())), DomainError);
  GaborCoefficients off{LatticeSpec{0.31, 0.5, 4, 4}, "standard", std::vector<cdouble>(81), {}};
  CHECK_THROWS_AS(reconstruct(off, SampledSignal::zeros(default_frame_grid())), GridMismatch);
}

TEST_CASE("modulation norm") {
  const LatticeSpec L{0.5, 0.5, 16, 16};
  const auto c = gabor_coefficients(make_gaussian(0.0, 1.0), Window::standard_gaussian(), L);
  double direct = 0.0;
  for (const auto& v : c.values) direct += std::norm(v);
  CHECK(modulation_norm(c, 2, 2, 0) == Approx(std::sqrt(direct)).epsilon(1e-14));

  const auto d = gabor_coefficients(make_delta(0.0), Window::standard_gaussian(), L);
  CHECK(modulation_norm(d, INFINITY, INFINITY, 0) == Approx(1.0).epsilon(1e-14));

  // inner sum over k, outer over m: p = 1, q = inf for the delta is max_m sum_k e^{-pi k^2 / 4}
  double row = 0.0;
  for (int k = -16; k <= 16; ++k) row += std::exp(-kPi * k * k / 4.0);
  CHECK(modulation_norm(d, 1, INFINITY, 0) == Approx(row).epsilon(1e-12));
  CHECK(modulation_norm(d, INFINITY, 1, 0) == Approx(33.0).epsilon(1e-12));

  for (const auto& u : {make_gaussian(0.0, 1.0), make_chirp(1.0), make_delta(0.5)}) {
    const StftEvaluator ev(u, Window::standard_gaussian());
    for (double p : {1.0, 2.0, double(INFINITY)}) {
      CHECK(modulation_norm(ev, L, p, p, 2) >= modulation_norm(ev, L, p, p, 0));
      const StftEvaluator scaled(make_sum({{2.5, u}}), Window::standard_gaussian());
      CHECK(modulation_norm(scaled, L, p, 2, 1) == Approx(2.5 * modulation_norm(ev, L, p, 2, 1)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(modulation_norm(c, 0.5, 2, 0), DomainError);
}
