// gaborwf command-line front end: stft | wavefront | propagate | frame-info

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "gaborwf/gaborwf.hpp"

using namespace gaborwf;

namespace {

struct CommonOpts {
  std::string out;
  bool json = false;
  std::string config;
  std::uint64_t seed = 0x5eed;
};

struct Exit {
  int code;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--out", o.out, "Output path (CSV; JSON goes to <out>.json)");
  sub->add_flag("--json", o.json, "Print the JSON document on stdout");
  sub->add_option("--config", o.config, "Flat key=value file with the same keys as the long options");
  sub->add_option("--seed", o.seed, "Seed for randomized checks");
}

void emit_error(const std::string& code, const std::string& message) {
  std::cerr << Json{{"code", code}, {"message", message}}.dump() << '\n';
}

int exit_code_for(const Error& e) {
  const std::string& c = e.code();
  if (c == "NotAFrame" || c == "NoConvergence" || c == "DegenerateFit" || c == "InsufficientLattice") return 3;
  return 2;
}

Window parse_window(const std::string& spec, double step) {
  if (spec == "standard") return Window::standard_gaussian();
  if (spec.rfind("gaussian:", 0) == 0) {
    double sigma = 0.0;
    try {
      std::size_t used = 0;
      sigma = std::stod(spec.substr(9), &used);
      if (used != spec.size() - 9) throw std::invalid_argument(spec);
    } catch (const std::exception&) {
      throw DomainError("bad window spec '" + spec + "'");
    }
    return Window::sampled_gaussian(sigma, step);
  }
  throw DomainError("window must be 'standard' or 'gaussian:<sigma>'");
}

void write_outputs(const CommonOpts& o, const Json& doc, const std::function<void(std::ostream&)>& csv) {
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw DomainError("cannot open '" + o.out + "' for writing");
    csv(f);
    std::ofstream j(o.out + ".json", std::ios::binary);
    if (!j) throw DomainError("cannot open '" + o.out + ".json' for writing");
    j << doc.dump(2) << '\n';
  }
  if (o.json) std::cout << doc.dump(2) << '\n';
}

std::string degrees(const std::vector<double>& rad) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < rad.size(); ++i) os << (i ? ", " : "") << std::lround(rad[i] * 180.0 / kPi);
  os << '}';
  return os.str();
}

struct EstimatorOpts {
  double alpha = 0.5, beta = 0.5;
  int lattice_k = 40;
  int sectors = 72;
  double r_min = 4.0, r_max = 20.0;
  int shells = 8;
  std::string stat = "sup";
  double p = 2.0, s = 0.0;
  double n_max = EstimatorConfig{}.n_max;
  double floor = 1e-12;
  bool no_recenter = false;
};

void add_estimator(CLI::App* sub, EstimatorOpts& e) {
  sub->add_option("--alpha", e.alpha, "Lattice step in x");
  sub->add_option("--beta", e.beta, "Lattice step in xi");
  sub->add_option("--lattice-k", e.lattice_k, "Lattice half-range in steps");
  sub->add_option("--sectors", e.sectors, "Number of conic sectors (even, >= 8)");
  sub->add_option("--rmin", e.r_min, "Inner annulus radius");
  sub->add_option("--rmax", e.r_max, "Outer annulus radius");
  sub->add_option("--shells", e.shells, "Radial shells");
  sub->add_option("--stat", e.stat, "sup | lp")->check(CLI::IsMember({"sup", "lp"}));
  sub->add_option("--p", e.p, "Exponent for --stat lp (inf allowed)");
  sub->add_option("--s", e.s, "Weight order for --stat lp");
  sub->add_option("--nmax", e.n_max, "Order above which decay counts as rapid");
  sub->add_option("--floor", e.floor, "Statistic floor");
  sub->add_flag("--no-recenter", e.no_recenter, "Analyse around the origin instead of the coefficient centroid");
}

EstimatorConfig make_config(const EstimatorOpts& e) {
  EstimatorConfig c;
  c.sectors = e.sectors;
  c.r_min = e.r_min;
  c.r_max = e.r_max;
  c.shells = e.shells;
  if (e.stat == "lp")
    c.statistic = LpStat{e.p, e.s};
  else
    c.statistic = SupStat{};
  c.n_max = e.n_max;
  c.floor = e.floor;
  c.recenter = !e.no_recenter;
  return c;
}

LatticeSpec make_lattice(double alpha, double beta, int k) {
  LatticeSpec L{alpha, beta, k, k};
  L.validate();
  return L;
}

// Folds key=value pairs from --config into argv for keys not given on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") path = args[i + 1];
  for (const auto& a : args)
    if (a.rfind("--config=", 0) == 0) path = a.substr(9);
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config '" + path + "'");
  std::set<std::string> given;
  for (const auto& a : args)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  std::vector<std::string> out = args;
  for (const auto& [key, value] : parse_config(in)) {
    if (given.count(key) || key == "config") continue;
    if (key == "json" || key == "no-recenter" || key == "numeric") {
      if (value == "true" || value == "1") out.push_back("--" + key);
      continue;
    }
    out.push_back("--" + key);
    out.push_back(value);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gabor transforms, wave front set estimation and propagation checks"};
  app.require_subcommand(1);

  CommonOpts common;

  // stft
  auto* stft = app.add_subcommand("stft", "STFT magnitude grid of an atom");
  std::string atom_spec;
  std::string window_spec = "standard";
  double xmin = -8, xmax = 8, ximin = -8, ximax = 8, pstep = 0.125;
  bool numeric = false;
  stft->add_option("--atom", atom_spec, "Atom spec, e.g. chirp:1")->required();
  stft->add_option("--window", window_spec, "standard | gaussian:<sigma>");
  stft->add_option("--xmin", xmin);
  stft->add_option("--xmax", xmax);
  stft->add_option("--ximin", ximin);
  stft->add_option("--ximax", ximax);
  stft->add_option("--step", pstep, "Phase grid step");
  stft->add_flag("--numeric", numeric, "Use the sampled path (step 1/64 on [-16,16])");
  add_common(stft, common);

  // wavefront
  auto* wf = app.add_subcommand("wavefront", "Estimate the Gabor wave front set of an atom");
  EstimatorOpts est;
  wf->add_option("--atom", atom_spec, "Atom spec")->required();
  wf->add_option("--window", window_spec, "standard | gaussian:<sigma>");
  add_estimator(wf, est);
  add_common(wf, common);

  // propagate
  auto* prop = app.add_subcommand("propagate", "Check transport of the wave front set under a quadratic flow");
  std::string ham = "free";
  double t = 0.0;
  prop->add_option("--ham", ham, "free | harmonic")->check(CLI::IsMember({"free", "harmonic"}));
  prop->add_option("--atom", atom_spec, "Initial atom")->required();
  prop->add_option("--t", t, "Time")->required();
  add_estimator(prop, est);
  add_common(prop, common);

  // frame-info
  auto* fi = app.add_subcommand("frame-info", "Frame bounds, dual window and reconstruction residuals");
  double falpha = 0.5, fbeta = 0.5, tol = 1e-8;
  int fk = 40, samples = 20;
  std::vector<std::string> signals;
  fi->add_option("--alpha", falpha);
  fi->add_option("--beta", fbeta);
  fi->add_option("--lattice-k", fk);
  fi->add_option("--tol", tol, "Dual window tolerance");
  fi->add_option("--atom", signals, "Test signal atom[@envelope_sigma]; repeatable");
  fi->add_option("--samples", samples, "Random signals for the frame inequality check");
  add_common(fi, common);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("UsageError", e.what());
    return 2;
  } catch (const Error& e) {
    emit_error(e.code(), e.what());
    return exit_code_for(e);
  }

  try {
    if (stft->parsed()) {
      const AtomPtr atom = parse_atom(atom_spec);
      if (!(pstep > 0) || !(xmax > xmin) || !(ximax > ximin)) throw DomainError("bad phase grid");
      const auto count = [&](double lo, double hi) { return static_cast<std::size_t>(std::floor((hi - lo) / pstep + 1e-9)) + 1; };
      const PhaseGrid pg{Grid1D(xmin, pstep, count(xmin, xmax)), Grid1D(ximin, pstep, count(ximin, ximax))};
      const Grid1D sg = Grid1D::symmetric(16.0, 1.0 / 64.0);
      const Window w = parse_window(window_spec, sg.step());
      PhaseField f = (numeric || !w.is_standard()) ? stft_numeric(eval_atom(*atom, sg), w, pg)
                                                   : stft_analytic(*atom, pg);
      Json doc{{"command", "stft"},
               {"atom", format_atom(*atom)},
               {"window", w.tag()},
               {"path", (numeric || !w.is_standard()) ? "numeric" : "analytic"},
               {"field", phase_field_json(f)}};
      write_outputs(common, doc, [&](std::ostream& os) { write_phase_field_csv(os, f); });
      if (!common.json) {
        double peak = 0.0;
        for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
        std::cout << "stft " << format_atom(*atom) << ": " << pg.size() << " points, peak |V| = " << format_double(peak)
                  << '\n';
      }
    } else if (wf->parsed()) {
      const AtomPtr atom = parse_atom(atom_spec);
      const Window w = parse_window(window_spec, kDefaultSampleStep);
      const LatticeSpec L = make_lattice(est.alpha, est.beta, est.lattice_k);
      const WaveFrontEstimate e = estimate_wavefront(StftEvaluator(atom, w), L, make_config(est));
      Json doc = wavefront_json(e);
      doc["atom"] = format_atom(*atom);
      doc["window"] = w.tag();
      write_outputs(common, doc, [&](std::ostream& os) { write_wavefront_csv(os, e); });
      if (!common.json) std::cout << "flagged sector centres (deg): " << degrees(e.flagged_angles()) << '\n';
    } else if (prop->parsed()) {
      const AtomPtr atom = parse_atom(atom_spec);
      const HamiltonianTag tag = ham == "free" ? HamiltonianTag::Free : HamiltonianTag::Harmonic;
      const LatticeSpec L = make_lattice(est.alpha, est.beta, est.lattice_k);
      const PropagationReport r = verify_propagation(atom, tag, t, make_config(est), L);
      Json doc = propagation_report_json(r);
      write_outputs(common, doc, [&](std::ostream& os) {
        os << "kind,theta_deg\n";
        for (double a : r.predicted) os << "predicted," << format_double(a * 180.0 / kPi) << '\n';
        for (double a : r.observed) os << "observed," << format_double(a * 180.0 / kPi) << '\n';
      });
      if (!common.json)
        std::cout << "predicted " << degrees(r.predicted) << " observed " << degrees(r.observed) << " mismatch "
                  << format_double(r.max_mismatch * 180.0 / kPi) << " deg pass=" << (r.pass ? "true" : "false")
                  << '\n';
    } else if (fi->parsed()) {
      if (signals.empty()) signals = {"gaussian:0,1", "chirp:1@3"};
      if (samples < 0) throw DomainError("samples must be non-negative");
      const LatticeSpec L = make_lattice(falpha, fbeta, fk);
      const Window w = Window::standard_gaussian();
      const Grid1D grid = default_frame_grid();
      const FrameReport rep = frame_bounds(w, L, grid);
      const DualWindow dual = dual_window(w, L, tol, grid);

      Json recon = Json::array();
      std::ostringstream csv;
      csv << "signal,relative_error\n";
      for (const auto& spec : signals) {
        const auto at = spec.find('@');
        const AtomPtr atom = parse_atom(spec.substr(0, at));
        SampledSignal u = eval_atom(*atom, grid);
        if (at != std::string::npos) {
          double sigma = 0.0;
          try {
            sigma = std::stod(spec.substr(at + 1));
          } catch (const std::exception&) {
            throw DomainError("bad envelope in '" + spec + "'");
          }
          u = multiply(u, eval_atom(*make_gaussian(0.0, sigma), grid));
        }
        const auto coeffs = gabor_coefficients(u, w, L);
        const double err = relative_l2_error(reconstruct(coeffs, dual.window), u);
        recon.push_back(Json{{"signal", spec}, {"relative_error", err}});
        csv << spec << ',' << format_double(err) << '\n';
      }

      std::mt19937_64 rng(common.seed);
      std::normal_distribution<double> nd;
      double lo = INFINITY, hi = 0.0;
      for (int i = 0; i < samples; ++i) {
        std::vector<cdouble> v(grid.count());
        for (auto& z : v) z = cdouble(nd(rng), nd(rng));
        SampledSignal f(grid, std::move(v));
        const double q = inner_product(frame_operator_apply(f, w, L), f).real() / std::pow(f.l2_norm(), 2);
        lo = std::min(lo, q);
        hi = std::max(hi, q);
      }
      Json doc = frame_report_json(rep);
      doc["dual_iterations"] = dual.iterations;
      doc["dual_residual"] = dual.residual;
      doc["reconstruction"] = recon;
      Json ineq{{"samples", samples}, {"seed", common.seed}};
      if (samples > 0) {
        ineq["min_ratio"] = lo;
        ineq["max_ratio"] = hi;
        ineq["holds"] = lo >= rep.A * (1 - 1e-6) && hi <= rep.B * (1 + 1e-6);
      }
      doc["frame_inequality"] = ineq;
      write_outputs(common, doc, [&](std::ostream& os) { os << csv.str(); });
      if (!common.json) {
        std::cout << "A = " << format_double(rep.A) << ", B = " << format_double(rep.B)
                  << ", dual iterations = " << dual.iterations << '\n';
        for (const auto& r : recon)
          std::cout << "  " << r["signal"].get<std::string>() << ": relative error "
                    << format_double(r["relative_error"].get<double>()) << '\n';
      }
    }
  } catch (const Error& e) {
    emit_error(e.code(), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    emit_error("InternalError", e.what());
    return 1;
  }
  return 0;
}
