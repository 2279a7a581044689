#include "gaborwf/wavefront.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gaborwf/error.hpp"

namespace gaborwf {

namespace {

constexpr double kAngleEps = 1e-12;

struct Sample {
  PhasePoint z;
  double mag;
};

double lp_weight(PhasePoint z, double s) { return std::pow(1.0 + z.x * z.x + z.xi * z.xi, s / 2.0); }

// Shell statistic over arbitrary samples; area multiplies L^p sums.
DecayProfile profile_of(const std::vector<Sample>& samples, const ConicSector& sec, int shells,
                        const Statistic& stat, double area, bool require_points) {
  if (shells < 4) throw DomainError("need at least 4 shells");
  const auto edges = shell_edges(sec.r_min, sec.r_max, shells);
  std::vector<double> acc(shells, 0.0);
  std::vector<int> count(shells, 0);
  const LpStat* lp = std::get_if<LpStat>(&stat);
  const bool use_max = !lp || std::isinf(lp->p);
  for (const auto& s : samples) {
    if (!sec.contains(s.z)) continue;
    const double r = std::hypot(s.z.x, s.z.xi);
    int j = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), r) - edges.begin()) - 1;
    if (j == shells) j = shells - 1;  // r == r_max closes the last shell
    if (j < 0 || j >= shells) continue;
    ++count[j];
    const double v = lp ? s.mag * lp_weight(s.z, lp->s) : s.mag;
    if (use_max)
      acc[j] = std::max(acc[j], v);
    else
      acc[j] += std::pow(v, lp->p) * area;
  }
  DecayProfile p{sec, stat, {}, {}};
  for (int j = 0; j < shells; ++j) {
    if (require_points && count[j] < 3) throw InsufficientLattice(j);
    p.radii.push_back(0.5 * (edges[j] + edges[j + 1]));
    p.values.push_back(use_max ? acc[j] : std::pow(acc[j], 1.0 / lp->p));
  }
  return p;
}

std::vector<Sample> lattice_samples(const GaborCoefficients& c) {
  std::vector<Sample> out(c.values.size());
  for (std::size_t i = 0; i < c.values.size(); ++i) out[i] = {c.lattice.point(i), std::abs(c.values[i])};
  return out;
}

void check_config(const EstimatorConfig& cfg, const LatticeSpec& L) {
  if (cfg.sectors < 8 || cfg.sectors % 2 != 0) throw BadPartition("sector count must be even and >= 8");
  if (!(cfg.r_max > cfg.r_min) || cfg.r_min < 1.0) throw BadPartition("annulus needs r_max > r_min >= 1");
  if (cfg.shells < 4) throw DomainError("need at least 4 shells");
  if (const auto* lp = std::get_if<LpStat>(&cfg.statistic)) {
    if (!(lp->p >= 1.0)) throw DomainError("p must be >= 1");
    if (!(lp->s >= 0.0)) throw DomainError("s must be >= 0");
  }
  L.validate();
  if (L.alpha * L.kx < cfg.r_max - 1e-12 || L.beta * L.kxi < cfg.r_max - 1e-12)
    throw DomainError("lattice does not cover r_max");
}

DecayClass classify(const DecayProfile& p, const EstimatorConfig& cfg) {
  if (std::holds_alternative<LpStat>(p.statistic)) return classify_summable(p, cfg.floor);
  return classify_decay(p, cfg.n_max, cfg.floor);
}

// Centre used for the analysis; sampled paths need x on the signal lattice.
PhasePoint analysis_center(const StftEvaluator& ev, const LatticeSpec& L, const EstimatorConfig& cfg,
                           GaborCoefficients& raw) {
  raw = gabor_coefficients(ev, L);
  if (!cfg.recenter) return {};
  PhasePoint c = coefficient_centroid(raw);
  const double q = ev.x_quantum();
  if (q > 0.0) c.x = std::round(c.x / q) * q;
  return c;
}

}  // namespace

double phase_angle(PhasePoint z) noexcept {
  double a = std::atan2(z.xi, z.x);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

double angular_distance(double a, double b) noexcept {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return d > kPi ? kTwoPi - d : d;
}

bool ConicSector::contains_angle(double angle) const noexcept {
  return angular_distance(angle, theta) <= halfwidth + kAngleEps;
}

bool ConicSector::contains(PhasePoint z) const noexcept {
  const double r = std::hypot(z.x, z.xi);
  if (r < r_min || r > r_max) return false;
  return contains_angle(phase_angle(z));
}

const char* to_string(DecayKind k) noexcept {
  switch (k) {
    case DecayKind::Rapid:
      return "rapid";
    case DecayKind::Polynomial:
      return "polynomial";
    case DecayKind::NonDecaying:
      return "nondecaying";
  }
  return "?";
}

int class_code(DecayKind k) noexcept { return static_cast<int>(k); }

std::vector<double> WaveFrontEstimate::flagged_angles() const {
  std::vector<double> out;
  for (int j : flagged) out.push_back(sectors[j].theta);
  return out;
}

std::vector<ConicSector> sector_partition(int K, double r_min, double r_max) {
  if (K < 8 || K % 2 != 0) throw BadPartition("sector count must be even and >= 8, got " + std::to_string(K));
  if (!(r_max > r_min) || r_min < 1.0) throw BadPartition("annulus needs r_max > r_min >= 1");
  std::vector<ConicSector> out;
  for (int j = 0; j < K; ++j) out.push_back({kTwoPi * j / K, 1.5 * kPi / K, r_min, r_max});
  return out;
}

std::vector<double> shell_edges(double r_min, double r_max, int shells) {
  std::vector<double> e(shells + 1);
  for (int j = 0; j <= shells; ++j) e[j] = r_min + (r_max - r_min) * j / shells;
  e[shells] = r_max;
  return e;
}

DecayProfile decay_profile(const GaborCoefficients& c, const ConicSector& sec, int shells, const Statistic& stat) {
  return profile_of(lattice_samples(c), sec, shells, stat, 1.0, true);
}

DecayProfile decay_profile(const PhaseField& f, const ConicSector& sec, int shells, const Statistic& stat) {
  std::vector<Sample> samples(f.values.size());
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = {f.grid.point(i), std::abs(f.values[i])};
  return profile_of(samples, sec, shells, stat, f.grid.x.step() * f.grid.xi.step(), false);
}

DecayClass classify_decay(const DecayProfile& p, double n_max, double floor) {
  const int J = static_cast<int>(p.values.size());
  if (J < 4) throw DomainError("need at least 4 shells");
  std::vector<int> tail;
  for (int j = J / 2; j < J; ++j)
    if (p.values[j] > floor) tail.push_back(j);
  if (tail.empty()) return {};
  if (tail.size() == 1) {
    if (tail[0] < J - 1) return {};
    throw DegenerateFit("only the outermost shell is above the floor");
  }
  // least squares log v = a + b log r on the tail shells
  const double n = static_cast<double>(tail.size());
  double mx = 0.0, my = 0.0;
  for (int j : tail) {
    mx += std::log(p.radii[j]);
    my += std::log(p.values[j]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int j : tail) {
    const double dx = std::log(p.radii[j]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p.values[j]) - my);
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (int j : tail) {
    const double e = std::log(p.values[j]) - (my + slope * (std::log(p.radii[j]) - mx));
    rss += e * e;
  }
  const double se = tail.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  const double nu = -slope;
  // boundary ties go to the more singular class
  if (nu <= 0.5) return {DecayKind::NonDecaying, nu, se};
  if (nu > n_max) return {DecayKind::Rapid, nu, se};
  return {DecayKind::Polynomial, nu, se};
}

DecayClass classify_summable(const DecayProfile& p, double floor) {
  const int J = static_cast<int>(p.values.size());
  if (J < 4) throw DomainError("need at least 4 shells");
  const auto* lp = std::get_if<LpStat>(&p.statistic);
  const double pe = (!lp || std::isinf(lp->p)) ? 2.0 : lp->p;
  const double factor = std::pow(2.0, 0.1 * pe);
  const double first = p.values[J - 4];
  const double last = p.values[J - 1];
  if (last <= floor) return {};
  const double order = std::log(first / last) / std::log(p.radii[J - 1] / p.radii[J - 4]);
  if (first / last >= factor * factor * factor) return {DecayKind::Rapid, order, 0.0};
  return {DecayKind::NonDecaying, order, 0.0};
}

PhasePoint coefficient_centroid(const GaborCoefficients& c) {
  double w = 0.0, x = 0.0, xi = 0.0;
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    const double m = std::norm(c.values[i]);
    const PhasePoint z = c.lattice.point(i);
    w += m;
    x += m * (z.x + c.offset.x);
    xi += m * (z.xi + c.offset.xi);
  }
  if (!(w > 0.0)) return {};
  return {x / w, xi / w};
}

WaveFrontEstimate estimate_wavefront(const StftEvaluator& ev, const LatticeSpec& L, const EstimatorConfig& cfg) {
  check_config(cfg, L);
  GaborCoefficients raw;
  const PhasePoint c = analysis_center(ev, L, cfg, raw);
  const GaborCoefficients coeffs = (c.x == 0.0 && c.xi == 0.0) ? raw : gabor_coefficients(ev, L, c);

  WaveFrontEstimate e;
  e.K = cfg.sectors;
  e.center = c;
  e.sectors = sector_partition(cfg.sectors, cfg.r_min, cfg.r_max);
  e.classes.resize(e.sectors.size());
  const auto samples = lattice_samples(coeffs);
  for (std::size_t j = 0; j < e.sectors.size(); ++j) {
    const auto prof = profile_of(samples, e.sectors[j], cfg.shells, cfg.statistic, 1.0, true);
    e.classes[j] = classify(prof, cfg);
    if (e.classes[j].flagged()) e.flagged.push_back(static_cast<int>(j));
  }
  return e;
}

AgreementReport compare_discrete_continuous(const StftEvaluator& ev, const LatticeSpec& L, const PhaseGrid& fine,
                                            double p, double s, const EstimatorConfig& base) {
  EstimatorConfig cfg = base;
  cfg.statistic = LpStat{p, s};
  check_config(cfg, L);
  if (fine.x.step() > L.alpha / 4 + 1e-12 || fine.xi.step() > L.beta / 4 + 1e-12)
    throw DomainError("fine grid step must be <= alpha / 4");

  const WaveFrontEstimate disc = estimate_wavefront(ev, L, cfg);
  const PhasePoint c = disc.center;
  const PhaseGrid moved{Grid1D(fine.x.start() + c.x, fine.x.step(), fine.x.count()),
                        Grid1D(fine.xi.start() + c.xi, fine.xi.step(), fine.xi.count())};
  PhaseField field = ev.evaluate(moved);
  field.grid = fine;  // positions relative to the centre

  AgreementReport rep;
  rep.discrete = disc.classes;
  rep.flagged_discrete = disc.flagged;
  std::vector<Sample> samples(field.values.size());
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = {fine.point(i), std::abs(field.values[i])};
  const double area = fine.x.step() * fine.xi.step();
  for (std::size_t j = 0; j < disc.sectors.size(); ++j) {
    const auto prof = profile_of(samples, disc.sectors[j], cfg.shells, cfg.statistic, area, false);
    rep.continuous.push_back(classify_summable(prof, cfg.floor));
    if (rep.continuous.back().flagged()) rep.flagged_continuous.push_back(static_cast<int>(j));
  }
  rep.agree = rep.flagged_discrete == rep.flagged_continuous;
  return rep;
}

WaveFrontEstimate transport_estimate(const WaveFrontEstimate& e, const Eigen::Matrix2d& S) {
  if (!S.allFinite() || std::abs(S.determinant() - 1.0) >= 1e-9) throw NotSymplectic("matrix is not symplectic");
  Eigen::Matrix2d J;
  J << 0, 1, -1, 0;
  if ((S.transpose() * J * S - J).cwiseAbs().maxCoeff() >= 1e-9) throw NotSymplectic("matrix is not symplectic");

  WaveFrontEstimate out;
  out.K = e.K;
  out.sectors = e.sectors;
  out.classes.assign(e.sectors.size(), DecayClass{});
  const Eigen::Vector2d c = S * Eigen::Vector2d(e.center.x, e.center.xi);
  out.center = {c(0), c(1)};
  const double width = kTwoPi / e.K;
  for (int j : e.flagged) {
    const double th = e.sectors[j].theta;
    const Eigen::Vector2d d = S * Eigen::Vector2d(std::cos(th), std::sin(th));
    const double pos = phase_angle({d(0), d(1)}) / width;
    const double lo = std::floor(pos);
    const double frac = pos - lo;
    std::vector<int> bins;
    if (std::abs(frac - 0.5) < 1e-9) {
      bins = {static_cast<int>(lo), static_cast<int>(lo) + 1};
    } else {
      bins = {static_cast<int>(std::lround(pos))};
    }
    for (int b : bins) {
      b = ((b % e.K) + e.K) % e.K;
      if (!out.classes[b].flagged()) out.classes[b] = e.classes[j];
    }
  }
  for (std::size_t j = 0; j < out.classes.size(); ++j)
    if (out.classes[j].flagged()) out.flagged.push_back(static_cast<int>(j));
  return out;
}

RayCheck check_against_rays(const WaveFrontEstimate& e, const std::vector<double>& rays) {
  RayCheck rc;
  const double tol = kTwoPi / e.K + 1e-9;
  for (int j : e.flagged) {
    const auto& s = e.sectors[j];
    bool ok = false;
    for (double r : rays) ok = ok || std::max(0.0, angular_distance(r, s.theta) - s.halfwidth) <= tol;
    if (!ok) rc.false_positives.push_back(j);
  }
  for (double r : rays) {
    bool hit = false;
    for (int j : e.flagged) hit = hit || e.sectors[j].contains_angle(r);
    if (!hit) rc.missed_rays.push_back(r);
  }
  rc.pass = rc.false_positives.empty() && rc.missed_rays.empty();
  return rc;
}

}  // namespace gaborwf
