// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gaborwf/gaborwf.hpp"

using namespace gaborwf;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double deg(double d) { return d * kPi / 180.0; }

struct Canonical {
  std::string name;
  AtomPtr atom;
  std::vector<double> rays;
};

std::vector<Canonical> boxed_atoms() {
  const auto chirp_rays = [](double c) {
    const double a = std::atan(c) < 0 ? std::atan(c) + kPi : std::atan(c);
    return std::vector<double>{a, a + kPi};
  };
  return {
      {"delta:0", make_delta(0.0), {deg(90), deg(270)}},
      {"delta:1", make_delta(1.0), {deg(90), deg(270)}},
      {"planewave:0", make_planewave(0.0), {0.0, deg(180)}},
      {"planewave:3", make_planewave(3.0), {0.0, deg(180)}},
      {"chirp:1", make_chirp(1.0), chirp_rays(1.0)},
      {"chirp:-2", make_chirp(-2.0), chirp_rays(-2.0)},
      {"gaussian:0,1", make_gaussian(0.0, 1.0), {}},
  };
}

WaveFrontEstimate estimate(const AtomPtr& u, const Window& w) {
  return estimate_wavefront(StftEvaluator(u, w), LatticeSpec{0.5, 0.5, 40, 40}, EstimatorConfig{});
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome ac1() {
  const Grid1D g = Grid1D::symmetric(16.0, 1.0 / 64);
  const PhaseGrid pg{Grid1D::symmetric(6.0, 0.125), Grid1D::symmetric(6.0, 0.125)};
  double worst = 0.0;
  for (const auto& atom : {make_delta(0.0), make_planewave(0.0), make_planewave(3.0), make_chirp(0.5), make_chirp(1.0),
                           make_chirp(2.0), make_gaussian(0.0, 1.0)}) {
    const auto A = stft_analytic(*atom, pg);
    const auto N = stft_numeric(eval_atom(*atom, g), Window::standard_gaussian(), pg);
    double err = 0.0, peak = 0.0;
    for (std::size_t k = 0; k < A.values.size(); ++k) {
      err = std::max(err, std::abs(A.values[k] - N.values[k]));
      peak = std::max(peak, std::abs(A.values[k]));
    }
    worst = std::max(worst, err / peak);
  }
  return {worst < 1e-5, "max relative error " + fmt(worst) + " (< 1e-5)"};
}

Outcome flagged_check(const Window& w) {
  std::string bad;
  for (const auto& c : boxed_atoms()) {
    const RayCheck rc = check_against_rays(estimate(c.atom, w), c.rays);
    if (!rc.pass) bad += " " + c.name;
  }
  return {bad.empty(), bad.empty() ? "7 atoms match their rays within one sector width" : "mismatch:" + bad};
}

Outcome ac3() {
  const Window w13 = Window::sampled_gaussian(1.3, 1.0 / 64);
  std::string bad;
  for (const auto& c : boxed_atoms()) {
    const auto a = estimate(c.atom, Window::standard_gaussian());
    const auto b = estimate(c.atom, w13);
    bool same = a.flagged == b.flagged;
    for (std::size_t j = 0; j < a.classes.size(); ++j) same = same && a.classes[j].kind == b.classes[j].kind;
    if (!same) bad += " " + c.name;
  }
  return {bad.empty(), bad.empty() ? "classifications identical under the sigma = 1.3 window" : "differs:" + bad};
}

Outcome ac4() {
  const LatticeSpec L;
  const PhaseGrid fine{Grid1D::symmetric(21.0, 0.125), Grid1D::symmetric(21.0, 0.125)};
  std::string bad;
  int runs = 0;
  for (const auto& [name, atom] : std::vector<std::pair<std::string, AtomPtr>>{
           {"delta:0", make_delta(0.0)}, {"gaussian:0,1", make_gaussian(0.0, 1.0)}, {"chirp:2", make_chirp(2.0)}}) {
    const StftEvaluator ev(atom, Window::standard_gaussian());
    for (double p : {2.0, double(INFINITY)})
      for (double s : {0.0, 2.0}) {
        ++runs;
        if (!compare_discrete_continuous(ev, L, fine, p, s).agree)
          bad += " " + name + "(p=" + fmt(p) + ",s=" + fmt(s) + ")";
      }
  }
  return {bad.empty(), bad.empty() ? std::to_string(runs) + " sector-wise agreements" : "disagree:" + bad};
}

// Chirp rate read from the phase of a signal: d(arg u)/dx = 2 pi c x near the origin.
double phase_chirp_rate(const SampledSignal& u, double half_width) {
  const Grid1D& g = u.grid();
  std::vector<double> xs, rates;
  for (std::size_t j = 1; j + 1 < g.count(); ++j) {
    const double x = g.at(j);
    if (std::abs(x) > half_width || std::abs(x) < 0.5) continue;
    const double dphi = std::arg(u[j + 1] * std::conj(u[j - 1])) / (2 * g.step());
    xs.push_back(x);
    rates.push_back(dphi / kTwoPi);
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += xs[i] * xs[i];
    sxy += xs[i] * rates[i];
  }
  return sxy / sxx;
}

Outcome ac5() {
  const Grid1D g = default_propagation_grid();
  const double width = kTwoPi / 72;
  std::ostringstream detail;
  bool pass = true;
  for (double t : {0.5, 1.0}) {
    const SampledSignal ut = propagate_free(eval_atom(*make_delta(0.0), g), t);
    const double slope = ridge_slope(ut, {-3, -2, -1, 0, 1, 2, 3}, -3, 3, 1.0 / 64);
    const Eigen::Vector2d v = classical_flow(QuadraticHamiltonian::free_particle(), t) * Eigen::Vector2d(0, 1);
    const double flow_angle = std::atan2(v(1), v(0));
    const double kernel_rate = phase_chirp_rate(ut, 3.0);
    const double e1 = angular_distance(std::atan(slope), flow_angle);
    const double e2 = angular_distance(std::atan(slope), std::atan(kernel_rate));
    const double e3 = std::abs(kernel_rate * kTwoPi * t - 1.0);
    pass = pass && e1 <= width && e2 <= width && e3 < 0.02;
    detail << "t=" << t << ": ridge " << fmt(slope) << ", flow " << fmt(v(1) / v(0)) << ", kernel " << fmt(kernel_rate)
           << "; ";
  }
  return {pass, detail.str()};
}

Outcome propagation_check(const AtomPtr& u, HamiltonianTag tag, const std::vector<double>& times) {
  std::ostringstream detail;
  bool pass = true;
  for (double t : times) {
    const PropagationReport r = verify_propagation(u, tag, t);
    pass = pass && r.pass;
    detail << "t=" << fmt(t) << " mismatch " << fmt(r.max_mismatch * 180 / kPi) << " deg; ";
  }
  return {pass, detail.str()};
}

Outcome ac7() {
  Outcome o = propagation_check(make_planewave(0.0), HamiltonianTag::Harmonic, {kPi / 6, kPi / 4, kPi / 3});
  const SampledSignal u0 = eval_atom(*make_planewave(0.0), default_propagation_grid());
  for (double t : {kPi / 6, kPi / 4, kPi / 3}) {
    const double slope = ridge_slope(propagate_harmonic(u0, t), {-3, -2, -1, 0, 1, 2, 3}, -8, 8, 1.0 / 64);
    const double rel = std::abs(slope + std::tan(t)) / std::tan(t);
    o.pass = o.pass && rel < 0.02;
    o.detail += "rate " + fmt(slope) + " vs " + fmt(-std::tan(t)) + "; ";
  }
  return o;
}

Outcome ac8() {
  const LatticeSpec L{0.5, 0.5, 40, 40};
  const Window w = Window::standard_gaussian();
  const Grid1D grid = default_frame_grid();
  const FrameReport fr = frame_bounds(w, L, grid);
  const DualWindow d = dual_window(w, L, 1e-8, grid);
  const SampledSignal phi = eval_atom(*make_gaussian(0.0, 1.0), grid);
  const double dual_res = relative_l2_error(frame_operator_apply(d.window, w, L), phi);

  const SampledSignal gauss = eval_atom(*make_gaussian(0.0, 1.0), grid);
  const SampledSignal chirp = multiply(eval_atom(*make_chirp(1.0), grid), eval_atom(*make_gaussian(0.0, 3.0), grid));
  const double e_gauss = relative_l2_error(reconstruct(gabor_coefficients(gauss, w, L), d.window), gauss);
  const double e_chirp = relative_l2_error(reconstruct(gabor_coefficients(chirp, w, L), d.window), chirp);

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> nd;
  int held = 0;
  for (int i = 0; i < 20; ++i) {
    std::vector<cdouble> v(grid.count());
    for (auto& z : v) z = cdouble(nd(rng), nd(rng));
    const SampledSignal f(grid, std::move(v));
    const double energy = inner_product(frame_operator_apply(f, w, L), f).real();
    const double n2 = std::pow(f.l2_norm(), 2);
    held += energy >= fr.A * n2 * (1 - 1e-6) && energy <= fr.B * n2 * (1 + 1e-6);
  }
  const bool pass = dual_res <= 1e-8 && e_gauss < 1e-5 && e_chirp < 1e-5 && held == 20;
  return {pass, "dual residual " + fmt(dual_res) + ", reconstruction " + fmt(e_gauss) + " / " + fmt(e_chirp) +
                    ", inequality " + std::to_string(held) + "/20 (A=" + fmt(fr.A) + ", B=" + fmt(fr.B) + ")"};
}

Outcome ac9() {
  double group = 0.0, sympl = 0.0, period = 0.0, ident = 0.0;
  const std::vector<double> times = {-2.3, -0.4, 0.1, 0.7, 1.9, 5.0};
  for (const auto& H : {QuadraticHamiltonian::free_particle(), QuadraticHamiltonian::harmonic()}) {
    ident = std::max(ident, (classical_flow(H, 0.0) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
    for (double s : times)
      for (double t : times) {
        const Eigen::Matrix2d a = classical_flow(H, s + t);
        const Eigen::Matrix2d b = classical_flow(H, s) * classical_flow(H, t);
        group = std::max(group, (a - b).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff()));
      }
    for (double t : times) {
      const Eigen::Matrix2d S = classical_flow(H, t);
      sympl = std::max(sympl, symplectic_defect(S) / std::max(1.0, std::pow(S.cwiseAbs().maxCoeff(), 2)));
    }
  }
  const auto R = QuadraticHamiltonian::harmonic();
  for (double t : times) period = std::max(period, (classical_flow(R, t + kTwoPi) - classical_flow(R, t)).cwiseAbs().maxCoeff());
  const bool pass = group < 1e-10 && sympl < 1e-10 && period < 1e-9 && ident == 0.0;
  return {pass, "group " + fmt(group) + ", symplectic " + fmt(sympl) + ", period " + fmt(period) + ", identity " +
                    fmt(ident)};
}

Outcome ac10() {
  const std::vector<PhasePoint> shifts = {{2, 0}, {0, 2}, {-2, 0}, {0, -2}, {1.4, 1.4}, {-1.2, 0.9}, {0.5, -1.5}};
  std::string bad;
  for (const auto& c : boxed_atoms()) {
    const auto base = estimate(c.atom, Window::standard_gaussian()).flagged;
    for (const PhasePoint z : shifts)
      if (estimate(make_shifted(c.atom, z), Window::standard_gaussian()).flagged != base)
        bad += " " + c.name + "@(" + fmt(z.x) + "," + fmt(z.xi) + ")";
  }
  return {bad.empty(), bad.empty() ? "7 atoms x 7 shifts invariant" : "changed:" + bad};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC-1", ac1},
      {"AC-2", [] { return flagged_check(Window::standard_gaussian()); }},
      {"AC-3", ac3},
      {"AC-4", ac4},
      {"AC-5", ac5},
      {"AC-6", [] { return propagation_check(make_delta(0.0), HamiltonianTag::Free, {1.0 / kTwoPi, 0.5}); }},
      {"AC-7", ac7},
      {"AC-8", ac8},
      {"AC-9", ac9},
      {"AC-10", ac10},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %s: %s\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
