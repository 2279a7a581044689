#include "gaborwf/atom.hpp"

#include <cmath>
#include <string>

#include "gaborwf/error.hpp"

namespace gaborwf {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

AtomPtr make_delta(double x0) {
  require_finite(x0, "delta center");
  return std::make_shared<const Atom>(Atom{Delta{x0}});
}

AtomPtr make_planewave(double xi0) {
  require_finite(xi0, "plane wave frequency");
  return std::make_shared<const Atom>(Atom{PlaneWave{xi0}});
}

AtomPtr make_chirp(double c) {
  require_finite(c, "chirp rate");
  if (c == 0.0) throw DomainError("chirp rate must be nonzero; use planewave:0");
  return std::make_shared<const Atom>(Atom{Chirp{c}});
}

AtomPtr make_gaussian(double x0, double sigma) {
  require_finite(x0, "gaussian center");
  require_finite(sigma, "gaussian width");
  if (!(sigma > 0.0)) throw DomainError("gaussian width must be positive");
  return std::make_shared<const Atom>(Atom{Gaussian{x0, sigma}});
}

AtomPtr make_shifted(AtomPtr inner, PhasePoint z0) {
  if (!inner) throw DomainError("shifted atom needs an inner atom");
  require_finite(z0.x, "shift x");
  require_finite(z0.xi, "shift xi");
  return std::make_shared<const Atom>(Atom{Shifted{std::move(inner), z0}});
}

AtomPtr make_sum(std::vector<Sum::Term> terms) {
  if (terms.empty()) throw DomainError("sum needs at least one term");
  for (const auto& t : terms) {
    if (!t.atom) throw DomainError("sum term without atom");
    if (!std::isfinite(t.weight.real()) || !std::isfinite(t.weight.imag()))
      throw DomainError("sum weight must be finite");
  }
  return std::make_shared<const Atom>(Atom{Sum{std::move(terms)}});
}

SampledSignal eval_atom(const Atom& a, const Grid1D& g) {
  std::vector<cdouble> out(g.count());
  std::visit(
      overloaded{
          [&](const Delta& d) {
            if (!g.contains(d.x0))
              throw DomainError("delta center " + std::to_string(d.x0) + " outside grid range");
            const auto k = static_cast<std::size_t>(std::llround(g.index_of(d.x0)));
            out[k] = 1.0 / g.step();
          },
          [&](const PlaneWave& p) {
            for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::polar(1.0, kTwoPi * p.xi0 * g.at(k));
          },
          [&](const Chirp& c) {
            for (std::size_t k = 0; k < out.size(); ++k) {
              const double t = g.at(k);
              out[k] = std::polar(1.0, kPi * c.c * t * t);
            }
          },
          [&](const Gaussian& G) {
            for (std::size_t k = 0; k < out.size(); ++k) {
              const double u = (g.at(k) - G.x0) / G.sigma;
              out[k] = std::exp(-kPi * u * u);
            }
          },
          [&](const Shifted& s) {
            // samples of inner(t - x0) are the inner atom on the grid moved by -x0
            Grid1D moved(g.start() - s.z0.x, g.step(), g.count());
            auto inner = eval_atom(*s.inner, moved);
            for (std::size_t k = 0; k < out.size(); ++k)
              out[k] = inner[k] * std::polar(1.0, kTwoPi * s.z0.xi * g.at(k));
          },
          [&](const Sum& s) {
            for (const auto& term : s.terms) {
              auto part = eval_atom(*term.atom, g);
              for (std::size_t k = 0; k < out.size(); ++k) out[k] += term.weight * part[k];
            }
          },
      },
      a.v);
  return SampledSignal(g, std::move(out));
}

bool contains_delta(const Atom& a) {
  return std::visit(overloaded{
                        [](const Delta&) { return true; },
                        [](const Shifted& s) { return contains_delta(*s.inner); },
                        [](const Sum& s) {
                          for (const auto& t : s.terms)
                            if (contains_delta(*t.atom)) return true;
                          return false;
                        },
                        [](const auto&) { return false; },
                    },
                    a.v);
}

}  // namespace gaborwf
