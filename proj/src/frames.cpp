#include "gaborwf/frames.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "gaborwf/error.hpp"

namespace gaborwf {

namespace {

using Vec = Eigen::VectorXcd;

// Precomputed pieces of S on a fixed grid: modulation table and shifted windows.
class FrameModel {
 public:
  FrameModel(const Window& w, const LatticeSpec& L, const Grid1D& grid) : grid_(grid), L_(L) {
    L.validate();
    const std::size_t n = grid.count();
    const int M = 2 * L.kxi + 1;
    E_.resize(M, static_cast<Eigen::Index>(n));
    for (int m = 0; m < M; ++m)
      for (std::size_t j = 0; j < n; ++j)
        E_(m, j) = std::polar(1.0, kTwoPi * std::fmod(L.beta * (m - L.kxi) * grid.at(j), 1.0));
    const double reach = w.radius() + grid.step();
    for (int k = -L.kx; k <= L.kx; ++k) {
      const double c = L.alpha * k;
      const long long lo = std::max<long long>(0, static_cast<long long>(std::ceil(grid.index_of(c - reach))));
      const long long hi = std::min<long long>(static_cast<long long>(n) - 1,
                                               static_cast<long long>(std::floor(grid.index_of(c + reach))));
      Segment seg;
      seg.first = lo;
      if (hi >= lo) {
        seg.g.resize(hi - lo + 1);
        for (long long j = lo; j <= hi; ++j) seg.g(j - lo) = w.value(grid.at(j) - c);
      }
      segs_.push_back(std::move(seg));
    }
  }

  Vec apply(const Vec& f) const {
    const std::size_t nk = segs_.size();
    std::vector<Vec> parts(nk);
    const double h = grid_.step();
#pragma omp parallel for schedule(dynamic)
    for (long long k = 0; k < static_cast<long long>(nk); ++k) {
      const Segment& s = segs_[k];
      parts[k] = Vec::Zero(f.size());
      const Eigen::Index len = s.g.size();
      if (len == 0) continue;
      const auto Eb = E_.middleCols(s.first, len);
      const Vec y = f.segment(s.first, len).cwiseProduct(s.g.conjugate());
      const Vec c = h * (Eb.conjugate() * y);
      parts[k].segment(s.first, len) = s.g.cwiseProduct(Eb.transpose() * c);
    }
    return tree_sum(parts, f.size());
  }

  const Grid1D& grid() const { return grid_; }

 private:
  struct Segment {
    Eigen::Index first = 0;
    Vec g;
  };

  Grid1D grid_;
  LatticeSpec L_;
  Eigen::MatrixXcd E_;
  std::vector<Segment> segs_;

 public:
  // Pairwise reduction in a fixed order so the result does not depend on thread count.
  static Vec tree_sum(std::vector<Vec>& parts, Eigen::Index n) {
    if (parts.empty()) return Vec::Zero(n);
    for (std::size_t stride = 1; stride < parts.size(); stride *= 2)
      for (std::size_t i = 0; i + stride < parts.size(); i += 2 * stride) parts[i] += parts[i + stride];
    return parts[0];
  }
};

Vec to_vec(const SampledSignal& s) {
  Vec v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) v(j) = s[j];
  return v;
}

SampledSignal to_signal(const Grid1D& g, const Vec& v) {
  return SampledSignal(g, std::vector<cdouble>(v.data(), v.data() + v.size()));
}

Vec sample_window(const Window& w, const Grid1D& g) {
  Vec v(static_cast<Eigen::Index>(g.count()));
  for (std::size_t j = 0; j < g.count(); ++j) v(j) = w.value(g.at(j));
  return v;
}

double lp_accumulate(const std::vector<double>& vals, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : vals) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  for (double v : vals) s += std::pow(v, p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

void LatticeSpec::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw DomainError("lattice constants must be positive");
  if (kx < 1 || kxi < 1) throw DomainError("lattice bounds must be at least 1");
}

PhaseGrid LatticeSpec::phase_grid(PhasePoint offset) const {
  validate();
  return PhaseGrid{Grid1D(-alpha * kx + offset.x, alpha, static_cast<std::size_t>(2 * kx + 1)),
                   Grid1D(-beta * kxi + offset.xi, beta, static_cast<std::size_t>(2 * kxi + 1))};
}

Grid1D default_frame_grid() { return Grid1D::symmetric(16.0, 1.0 / 40.0); }

GaborCoefficients gabor_coefficients(const StftEvaluator& ev, const LatticeSpec& L, PhasePoint offset) {
  PhaseField f = ev.evaluate(L.phase_grid(offset));
  return GaborCoefficients{L, ev.window().tag(), std::move(f.values), offset};
}

GaborCoefficients gabor_coefficients(const AtomPtr& u, const Window& w, const LatticeSpec& L) {
  return gabor_coefficients(StftEvaluator(u, w), L);
}

GaborCoefficients gabor_coefficients(const SampledSignal& u, const Window& w, const LatticeSpec& L) {
  return gabor_coefficients(StftEvaluator(u, w), L);
}

SampledSignal frame_operator_apply(const SampledSignal& f, const Window& w, const LatticeSpec& L) {
  FrameModel model(w, L, f.grid());
  return to_signal(f.grid(), model.apply(to_vec(f)));
}

FrameReport frame_bounds(const Window& w, const LatticeSpec& L, const Grid1D& grid) {
  L.validate();
  if (L.alpha * L.beta >= 1.0)
    throw NotAFrame("alpha*beta = " + std::to_string(L.alpha * L.beta) + " >= 1; no frame asserted");
  FrameModel model(w, L, grid);
  const Eigen::Index n = static_cast<Eigen::Index>(grid.count());

  // Lanczos with full reorthogonalization from a fixed-seed start vector.
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> nd;
  Vec v(n);
  for (Eigen::Index j = 0; j < n; ++j) v(j) = cdouble(nd(rng), nd(rng));
  v.normalize();

  const int max_steps = static_cast<int>(std::min<Eigen::Index>(n, 400));
  std::vector<Vec> V{v};
  std::vector<double> a, b;
  Eigen::VectorXd ritz;
  Eigen::MatrixXd ritz_vecs;
  int steps = 0;
  for (int j = 0; j < max_steps; ++j) {
    Vec wv = model.apply(V[j]);
    const double aj = V[j].dot(wv).real();
    a.push_back(aj);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& q : V) wv -= q.dot(wv) * q;
    const double bj = wv.norm();
    steps = j + 1;

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
    for (int i = 0; i < steps; ++i) {
      T(i, i) = a[i];
      if (i + 1 < steps) T(i, i + 1) = T(i + 1, i) = b[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    ritz = es.eigenvalues();
    ritz_vecs = es.eigenvectors();
    const double scale = std::abs(ritz(steps - 1));
    const double r_lo = bj * std::abs(ritz_vecs(steps - 1, 0));
    const double r_hi = bj * std::abs(ritz_vecs(steps - 1, steps - 1));
    if (steps >= 4 && r_lo < 1e-11 * scale && r_hi < 1e-11 * scale) break;
    if (bj < 1e-14 * std::max(1.0, scale)) break;
    b.push_back(bj);
    V.push_back(wv / bj);
  }

  auto ritz_residual = [&](int col) {
    Vec y = Vec::Zero(n);
    for (int i = 0; i < steps; ++i) y += ritz_vecs(i, col) * V[i];
    const double nrm = y.norm();
    return (model.apply(y) - ritz(col) * y).norm() / nrm;
  };

  FrameReport rep;
  rep.A = ritz(0);
  rep.B = ritz(steps - 1);
  rep.iterations = steps;
  rep.residual = std::max(ritz_residual(0), ritz_residual(steps - 1));
  if (!(rep.A >= 1e-8)) throw NotAFrame("lower frame bound " + std::to_string(rep.A) + " below 1e-8");
  return rep;
}

DualWindow dual_window(const Window& w, const LatticeSpec& L, double tol, const Grid1D& grid, int max_iterations) {
  L.validate();
  if (L.alpha * L.beta >= 1.0)
    throw NotAFrame("alpha*beta = " + std::to_string(L.alpha * L.beta) + " >= 1; no frame asserted");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  FrameModel model(w, L, grid);
  const Vec rhs = sample_window(w, grid);
  const double bnorm = rhs.norm();
  Vec x = Vec::Zero(rhs.size());
  Vec r = rhs;
  int it = 0;
  double rel = 1.0;
  // CG with a true-residual restart whenever the recursive residual claims convergence
  while (it < max_iterations) {
    Vec p = r;
    double rr = r.squaredNorm();
    while (it < max_iterations && std::sqrt(rr) > tol * bnorm) {
      const Vec Sp = model.apply(p);
      const double alpha = rr / p.dot(Sp).real();
      x += alpha * p;
      r -= alpha * Sp;
      const double rr_new = r.squaredNorm();
      p = r + (rr_new / rr) * p;
      rr = rr_new;
      ++it;
    }
    r = rhs - model.apply(x);
    rel = r.norm() / bnorm;
    if (rel <= tol) return DualWindow{to_signal(grid, x), it, rel};
  }
  throw NoConvergence(it, rel);
}

SampledSignal reconstruct(const GaborCoefficients& c, const SampledSignal& dual) {
  const LatticeSpec& L = c.lattice;
  L.validate();
  if (c.values.size() != L.size()) throw DomainError("coefficient count does not match the lattice");
  const Grid1D& g = dual.grid();
  const double h = g.step();
  const double shift = L.alpha / h;
  if (std::abs(shift - std::round(shift)) > 1e-9 * shift)
    throw GridMismatch("lattice step alpha is not a multiple of the dual window step");
  const long long s = std::llround(shift);
  const Eigen::Index n = static_cast<Eigen::Index>(g.count());
  const int M = 2 * L.kxi + 1;
  Eigen::MatrixXcd ET(n, M);
  for (Eigen::Index j = 0; j < n; ++j)
    for (int m = 0; m < M; ++m) ET(j, m) = std::polar(1.0, kTwoPi * std::fmod(L.beta * (m - L.kxi) * g.at(j), 1.0));

  std::vector<Vec> parts(2 * L.kx + 1);
#pragma omp parallel for schedule(dynamic)
  for (int kk = 0; kk < 2 * L.kx + 1; ++kk) {
    const int k = kk - L.kx;
    Eigen::Map<const Vec> ck(c.values.data() + L.index(k, -L.kxi), M);
    const Vec z = ET * ck;
    Vec part = Vec::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const long long src = j - static_cast<long long>(k) * s;
      if (src >= 0 && src < n) part(j) = dual[static_cast<std::size_t>(src)] * z(j);
    }
    parts[kk] = std::move(part);
  }
  return to_signal(g, FrameModel::tree_sum(parts, n));
}

double modulation_norm(const GaborCoefficients& c, double p, double q, double s) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("p and q must be >= 1");
  const LatticeSpec& L = c.lattice;
  std::vector<double> outer;
  for (int m = -L.kxi; m <= L.kxi; ++m) {
    std::vector<double> inner;
    for (int k = -L.kx; k <= L.kx; ++k) {
      const PhasePoint z{L.alpha * k, L.beta * m};
      const double wgt = std::pow(1.0 + z.x * z.x + z.xi * z.xi, s / 2.0);
      inner.push_back(std::abs(c.values[L.index(k, m)]) * wgt);
    }
    outer.push_back(lp_accumulate(inner, p));
  }
  return lp_accumulate(outer, q);
}

double modulation_norm(const StftEvaluator& ev, const LatticeSpec& L, double p, double q, double s) {
  return modulation_norm(gabor_coefficients(ev, L), p, q, s);
}

}  // namespace gaborwf
