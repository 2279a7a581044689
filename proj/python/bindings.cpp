#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "gaborwf/gaborwf.hpp"

namespace py = pybind11;
using namespace gaborwf;

namespace {

using CArray = py::array_t<cdouble, py::array::c_style | py::array::forcecast>;

CArray to_array(std::span<const cdouble> v) { return CArray(static_cast<py::ssize_t>(v.size()), v.data()); }

CArray to_array(const std::vector<cdouble>& v, py::ssize_t rows, py::ssize_t cols) {
  CArray a({rows, cols});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

SampledSignal to_signal(const Grid1D& g, const CArray& values) {
  if (values.ndim() != 1) throw DomainError("samples must be one-dimensional");
  return SampledSignal(g, std::vector<cdouble>(values.data(), values.data() + values.size()));
}

HamiltonianTag parse_tag(const std::string& s) {
  if (s == "free") return HamiltonianTag::Free;
  if (s == "harmonic") return HamiltonianTag::Harmonic;
  throw DomainError("hamiltonian must be 'free' or 'harmonic', got '" + s + "'");
}

Statistic make_statistic(double p, double s) {
  if (std::isnan(p)) return SupStat{};
  return LpStat{p, s};
}

StftEvaluator evaluator(const py::object& u, const Window& w, const py::object& grid) {
  if (py::isinstance<py::str>(u)) return StftEvaluator(parse_atom(u.cast<std::string>()), w);
  if (grid.is_none()) throw DomainError("sampled input needs a grid");
  return StftEvaluator(to_signal(grid.cast<Grid1D>(), u.cast<CArray>()), w);
}

}  // namespace

PYBIND11_MODULE(_gaborwf, m) {
  m.doc() = "Gabor analysis of time-frequency singularities";

  // Each library error maps to the Python class named by its code; all derive from Error.
  static py::handle module = m.inc_ref();
  const py::exception<Error> base(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(module.attr(e.code().c_str()).ptr(), e.what());
    }
  });
  for (const char* name : {"DomainError", "GridMismatch", "UnsupportedAtom", "NotAFrame", "BadPartition",
                           "DegenerateFit", "NotSymplectic", "NearSingularTime", "NoConvergence",
                           "InsufficientLattice"})
    py::exception<Error>(m, name, base);

  py::class_<Grid1D>(m, "Grid")
      .def(py::init<double, double, std::size_t>(), py::arg("start"), py::arg("step"), py::arg("count"))
      .def_static("symmetric", &Grid1D::symmetric, py::arg("half_width"), py::arg("step"))
      .def_property_readonly("start", &Grid1D::start)
      .def_property_readonly("step", &Grid1D::step)
      .def_property_readonly("count", &Grid1D::count)
      .def("points", [](const Grid1D& g) {
        py::array_t<double> a(static_cast<py::ssize_t>(g.count()));
        for (std::size_t k = 0; k < g.count(); ++k) a.mutable_at(k) = g.at(k);
        return a;
      })
      .def("__len__", &Grid1D::count)
      .def("__repr__", [](const Grid1D& g) {
        return "Grid(start=" + format_double(g.start()) + ", step=" + format_double(g.step()) +
               ", count=" + std::to_string(g.count()) + ")";
      });

  py::class_<Window>(m, "Window")
      .def_static("standard", &Window::standard_gaussian)
      .def_static("gaussian", &Window::sampled_gaussian, py::arg("sigma"), py::arg("step"))
      .def_static(
          "custom", [](const Grid1D& g, const CArray& v) { return Window::custom(to_signal(g, v)); },
          py::arg("grid"), py::arg("values"))
      .def_property_readonly("tag", &Window::tag)
      .def("__call__", &Window::value, py::arg("t"));

  m.def(
      "sample", [](const std::string& atom, const Grid1D& g) { return to_array(eval_atom(*parse_atom(atom), g).values()); },
      py::arg("atom"), py::arg("grid"), "Samples an atom given in the CLI atom syntax.");
  m.def(
      "normalize_atom", [](const std::string& atom) { return format_atom(*parse_atom(atom)); }, py::arg("atom"));

  m.def(
      "stft",
      [](const py::object& u, const Grid1D& x, const Grid1D& xi, const Window& w, const py::object& grid) {
        const PhaseField f = evaluator(u, w, grid).evaluate(PhaseGrid{x, xi});
        return to_array(f.values, static_cast<py::ssize_t>(x.count()), static_cast<py::ssize_t>(xi.count()));
      },
      py::arg("u"), py::arg("x"), py::arg("xi"), py::arg("window") = Window::standard_gaussian(),
      py::arg("grid") = py::none(), "V u on the product grid x * xi; u is an atom string or samples on `grid`.");

  py::class_<LatticeSpec>(m, "Lattice")
      .def(py::init([](double alpha, double beta, int kx, int kxi) {
             LatticeSpec L{alpha, beta, kx, kxi};
             L.validate();
             return L;
           }),
           py::arg("alpha") = 0.5, py::arg("beta") = 0.5, py::arg("kx") = 40, py::arg("kxi") = 40)
      .def_readonly("alpha", &LatticeSpec::alpha)
      .def_readonly("beta", &LatticeSpec::beta)
      .def_readonly("kx", &LatticeSpec::kx)
      .def_readonly("kxi", &LatticeSpec::kxi);

  m.def(
      "gabor_coefficients",
      [](const py::object& u, const LatticeSpec& L, const Window& w, const py::object& grid) {
        const GaborCoefficients c = gabor_coefficients(evaluator(u, w, grid), L);
        return to_array(c.values, 2 * L.kx + 1, 2 * L.kxi + 1);
      },
      py::arg("u"), py::arg("lattice") = LatticeSpec{}, py::arg("window") = Window::standard_gaussian(),
      py::arg("grid") = py::none(), "Coefficients c[k + kx, m + kxi] = V u(alpha k, beta m).");

  m.def(
      "frame_bounds",
      [](const LatticeSpec& L, const Window& w) {
        const FrameReport r = frame_bounds(w, L);
        py::dict d;
        d["A"] = r.A;
        d["B"] = r.B;
        d["iterations"] = r.iterations;
        d["residual"] = r.residual;
        return d;
      },
      py::arg("lattice") = LatticeSpec{}, py::arg("window") = Window::standard_gaussian());

  m.def(
      "dual_window",
      [](const LatticeSpec& L, const Window& w, double tol) {
        const DualWindow d = dual_window(w, L, tol);
        return py::make_tuple(d.window.grid(), to_array(d.window.values()), d.iterations, d.residual);
      },
      py::arg("lattice") = LatticeSpec{}, py::arg("window") = Window::standard_gaussian(), py::arg("tol") = 1e-8,
      "Returns (grid, values, iterations, residual).");

  py::enum_<DecayKind>(m, "DecayKind")
      .value("RAPID", DecayKind::Rapid)
      .value("POLYNOMIAL", DecayKind::Polynomial)
      .value("NONDECAYING", DecayKind::NonDecaying);

  py::class_<DecayClass>(m, "DecayClass")
      .def_readonly("kind", &DecayClass::kind)
      .def_readonly("order", &DecayClass::order)
      .def_readonly("order_stderr", &DecayClass::order_stderr)
      .def_property_readonly("flagged", &DecayClass::flagged);

  py::class_<WaveFrontEstimate>(m, "WaveFrontEstimate")
      .def_readonly("K", &WaveFrontEstimate::K)
      .def_readonly("classes", &WaveFrontEstimate::classes)
      .def_readonly("flagged", &WaveFrontEstimate::flagged)
      .def_property_readonly("center", [](const WaveFrontEstimate& e) { return py::make_tuple(e.center.x, e.center.xi); })
      .def_property_readonly("flagged_angles", &WaveFrontEstimate::flagged_angles)
      .def("transport", &transport_estimate, py::arg("S"))
      .def(
          "check_rays",
          [](const WaveFrontEstimate& e, const std::vector<double>& rays) {
            const RayCheck r = check_against_rays(e, rays);
            return py::make_tuple(r.pass, r.false_positives, r.missed_rays);
          },
          py::arg("rays"), "Returns (pass, false_positive_sectors, missed_rays).");

  m.def(
      "estimate_wavefront",
      [](const py::object& u, const LatticeSpec& L, const Window& w, const py::object& grid, int sectors, double r_min,
         double r_max, int shells, double p, double s, double n_max, bool recenter) {
        EstimatorConfig cfg;
        cfg.sectors = sectors;
        cfg.r_min = r_min;
        cfg.r_max = r_max;
        cfg.shells = shells;
        cfg.statistic = make_statistic(p, s);
        cfg.n_max = n_max;
        cfg.recenter = recenter;
        return estimate_wavefront(evaluator(u, w, grid), L, cfg);
      },
      py::arg("u"), py::arg("lattice") = LatticeSpec{}, py::arg("window") = Window::standard_gaussian(),
      py::arg("grid") = py::none(), py::arg("sectors") = 72, py::arg("r_min") = 4.0, py::arg("r_max") = 20.0,
      py::arg("shells") = 8, py::arg("p") = std::nan(""), py::arg("s") = 0.0,
      py::arg("n_max") = EstimatorConfig{}.n_max, py::arg("recenter") = true,
      "Sector classification; p = nan uses the sup statistic, otherwise the weighted L^p statistic.");

  m.def(
      "classical_flow", [](const std::string& h, double t) { return classical_flow(hamiltonian_for(parse_tag(h)), t); },
      py::arg("hamiltonian"), py::arg("t"));
  m.def(
      "propagate",
      [](const std::string& h, const Grid1D& g, const CArray& u0, double t) {
        return to_array(propagate(parse_tag(h), to_signal(g, u0), t).values());
      },
      py::arg("hamiltonian"), py::arg("grid"), py::arg("u0"), py::arg("t"));
  m.def("default_propagation_grid", &default_propagation_grid);
  m.def(
      "verify_propagation",
      [](const std::string& atom, const std::string& h, double t) {
        const PropagationReport r = verify_propagation(parse_atom(atom), parse_tag(h), t);
        py::dict d;
        d["predicted"] = r.predicted;
        d["observed"] = r.observed;
        d["max_mismatch"] = r.max_mismatch;
        d["pass"] = r.pass;
        return d;
      },
      py::arg("atom"), py::arg("hamiltonian"), py::arg("t"));
}
