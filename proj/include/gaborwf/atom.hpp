#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "gaborwf/grid.hpp"

namespace gaborwf {

struct Atom;
using AtomPtr = std::shared_ptr<const Atom>;

struct Delta {
  double x0 = 0.0;
};

/// t -> e^{2 pi i xi0 t}
struct PlaneWave {
  double xi0 = 0.0;
};

/// t -> e^{pi i c t^2}, c != 0
struct Chirp {
  double c = 1.0;
};

/// t -> e^{-pi (t - x0)^2 / sigma^2}
struct Gaussian {
  double x0 = 0.0;
  double sigma = 1.0;
};

/// Time-frequency shift: (pi(z0) f)(t) = e^{2 pi i xi0 t} f(t - x0).
struct Shifted {
  AtomPtr inner;
  PhasePoint z0;
};

struct Sum {
  struct Term {
    cdouble weight;
    AtomPtr atom;
  };
  std::vector<Term> terms;
};

struct Atom {
  std::variant<Delta, PlaneWave, Chirp, Gaussian, Shifted, Sum> v;
};

// Validating constructors; each throws DomainError on a broken invariant.
AtomPtr make_delta(double x0);
AtomPtr make_planewave(double xi0);
AtomPtr make_chirp(double c);
AtomPtr make_gaussian(double x0, double sigma);
AtomPtr make_shifted(AtomPtr inner, PhasePoint z0);
AtomPtr make_sum(std::vector<Sum::Term> terms);

/// Pointwise samples. Delta becomes an impulse of height 1/step at the nearest grid point.
SampledSignal eval_atom(const Atom& a, const Grid1D& g);

/// True if the atom contains a Delta anywhere in its tree.
bool contains_delta(const Atom& a);

}  // namespace gaborwf
