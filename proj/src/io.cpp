#include "gaborwf/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "gaborwf/error.hpp"

namespace gaborwf {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_number(const std::string& raw, const std::string& context) {
  const std::string s = trim(raw);
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw DomainError("bad number '" + s + "' in " + context);
  return v;
}

std::pair<double, double> parse_pair(const std::string& s, const std::string& context) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw DomainError(context + " expects two comma-separated numbers");
  return {parse_number(s.substr(0, comma), context), parse_number(s.substr(comma + 1), context)};
}

// '+' separators at bracket depth 0 that are not part of an exponent like 1e+3
std::vector<std::string> split_terms(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth < 0) throw DomainError("unbalanced brackets in sum");
    if (c == '+' && depth == 0) {
      const bool exponent = i >= 2 && (s[i - 1] == 'e' || s[i - 1] == 'E') &&
                            (std::isdigit(static_cast<unsigned char>(s[i - 2])) || s[i - 2] == '.');
      if (exponent) continue;
      out.push_back(s.substr(begin, i - begin));
      begin = i + 1;
    }
  }
  if (depth != 0) throw DomainError("unbalanced brackets in sum");
  out.push_back(s.substr(begin));
  return out;
}

Sum::Term parse_term(const std::string& raw) {
  std::string s = trim(raw);
  if (s.empty()) throw DomainError("empty sum term");
  cdouble w = 1.0;
  if (s[0] == '(') {
    const auto close = s.find(')');
    if (close == std::string::npos || close + 1 >= s.size() || s[close + 1] != '*')
      throw DomainError("complex weight must look like (re,im)*atom");
    auto [re, im] = parse_pair(s.substr(1, close - 1), "complex weight");
    w = cdouble(re, im);
    s = s.substr(close + 2);
  } else {
    const auto star = s.find('*');
    const auto bracket = s.find('[');
    if (star != std::string::npos && (bracket == std::string::npos || star < bracket)) {
      w = parse_number(s.substr(0, star), "sum weight");
      s = s.substr(star + 1);
    }
  }
  s = trim(s);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw DomainError("unterminated '[' in sum term");
    s = s.substr(1, s.size() - 2);
  }
  return {w, parse_atom(s)};
}

std::string format_weight(cdouble w) {
  if (w.imag() != 0.0) return "(" + format_double(w.real()) + "," + format_double(w.imag()) + ")*";
  if (w.real() == 1.0) return "";
  return format_double(w.real()) + "*";
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json complex_array(const std::vector<cdouble>& v) {
  Json arr = Json::array();
  for (const auto& c : v) arr.push_back(Json::array({c.real(), c.imag()}));
  return arr;
}

}  // namespace

AtomPtr parse_atom(const std::string& raw) {
  const std::string spec = trim(raw);
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw DomainError("atom spec '" + spec + "' lacks a ':'");
  std::string kind = spec.substr(0, colon);
  for (auto& ch : kind) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  const std::string rest = spec.substr(colon + 1);
  if (kind == "delta") return make_delta(parse_number(rest, "delta"));
  if (kind == "planewave") return make_planewave(parse_number(rest, "planewave"));
  if (kind == "chirp") return make_chirp(parse_number(rest, "chirp"));
  if (kind == "gaussian") {
    auto [x0, sigma] = parse_pair(rest, "gaussian");
    return make_gaussian(x0, sigma);
  }
  if (kind == "shift") {
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos) throw DomainError("shift expects shift:<x0>,<xi0>:<atom>");
    auto [x0, xi0] = parse_pair(rest.substr(0, c2), "shift");
    return make_shifted(parse_atom(rest.substr(c2 + 1)), {x0, xi0});
  }
  if (kind == "sum") {
    std::vector<Sum::Term> terms;
    for (const auto& t : split_terms(rest)) terms.push_back(parse_term(t));
    return make_sum(std::move(terms));
  }
  throw DomainError("unknown atom kind '" + kind + "'");
}

std::string format_atom(const Atom& a) {
  return std::visit(
      overloaded{
          [](const Delta& d) { return "delta:" + format_double(d.x0); },
          [](const PlaneWave& p) { return "planewave:" + format_double(p.xi0); },
          [](const Chirp& c) { return "chirp:" + format_double(c.c); },
          [](const Gaussian& g) { return "gaussian:" + format_double(g.x0) + "," + format_double(g.sigma); },
          [](const Shifted& s) {
            return "shift:" + format_double(s.z0.x) + "," + format_double(s.z0.xi) + ":" + format_atom(*s.inner);
          },
          [](const Sum& s) {
            std::string out = "sum:";
            for (std::size_t i = 0; i < s.terms.size(); ++i) {
              if (i) out += "+";
              std::string inner = format_atom(*s.terms[i].atom);
              const bool bracket = std::holds_alternative<Sum>(s.terms[i].atom->v) ||
                                   std::holds_alternative<Shifted>(s.terms[i].atom->v);
              out += format_weight(s.terms[i].weight) + (bracket ? "[" + inner + "]" : inner);
            }
            return out;
          },
      },
      a.v);
}

std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(lineno) + " lacks '='");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_signal_csv(std::ostream& os, const SampledSignal& s) {
  os << "index,t,re,im\n";
  for (std::size_t k = 0; k < s.size(); ++k)
    os << k << ',' << format_double(s.grid().at(k)) << ',' << format_double(s[k].real()) << ','
       << format_double(s[k].imag()) << '\n';
}

void write_phase_field_csv(std::ostream& os, const PhaseField& f) {
  os << "ix,ixi,x,xi,re,im,abs\n";
  for (std::size_t i = 0; i < f.grid.x.count(); ++i)
    for (std::size_t m = 0; m < f.grid.xi.count(); ++m) {
      const cdouble v = f.at(i, m);
      os << i << ',' << m << ',' << format_double(f.grid.x.at(i)) << ',' << format_double(f.grid.xi.at(m)) << ','
         << format_double(v.real()) << ',' << format_double(v.imag()) << ',' << format_double(std::abs(v)) << '\n';
    }
}

void write_coefficients_csv(std::ostream& os, const GaborCoefficients& c) {
  os << "k,m,lambda_x,lambda_xi,re,im\n";
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    const PhasePoint z = c.lattice.point(i);
    os << c.lattice.k_of(i) << ',' << c.lattice.m_of(i) << ',' << format_double(z.x) << ',' << format_double(z.xi)
       << ',' << format_double(c.values[i].real()) << ',' << format_double(c.values[i].imag()) << '\n';
  }
}

void write_wavefront_csv(std::ostream& os, const WaveFrontEstimate& e) {
  os << "theta_deg,class_code,order\n";
  for (std::size_t j = 0; j < e.sectors.size(); ++j) {
    const double order = e.classes[j].order;
    os << format_double(e.sectors[j].theta * 180.0 / kPi) << ',' << class_code(e.classes[j].kind) << ','
       << (std::isfinite(order) ? format_double(order) : std::string("inf")) << '\n';
  }
}

Json grid_json(const Grid1D& g) { return Json{{"start", g.start()}, {"step", g.step()}, {"count", g.count()}}; }

Json phase_field_json(const PhaseField& f) {
  return Json{{"x_grid", grid_json(f.grid.x)},
              {"xi_grid", grid_json(f.grid.xi)},
              {"order", "x-major"},
              {"values", complex_array(f.values)}};
}

Json coefficients_json(const GaborCoefficients& c) {
  return Json{{"alpha", c.lattice.alpha},
              {"beta", c.lattice.beta},
              {"kx", c.lattice.kx},
              {"kxi", c.lattice.kxi},
              {"window", c.window_tag},
              {"offset", Json::array({c.offset.x, c.offset.xi})},
              {"values", complex_array(c.values)}};
}

Json wavefront_json(const WaveFrontEstimate& e) {
  Json sectors = Json::array();
  for (std::size_t j = 0; j < e.sectors.size(); ++j)
    sectors.push_back(Json{{"theta", e.sectors[j].theta},
                           {"class", to_string(e.classes[j].kind)},
                           {"order", number_or_null(e.classes[j].order)},
                           {"stderr", number_or_null(e.classes[j].order_stderr)}});
  return Json{{"K", e.K},
              {"center", Json::array({e.center.x, e.center.xi})},
              {"sectors", sectors},
              {"flagged", e.flagged}};
}

Json frame_report_json(const FrameReport& r) {
  return Json{{"A", r.A}, {"B", r.B}, {"iterations", r.iterations}, {"residual", r.residual}};
}

Json propagation_report_json(const PropagationReport& r) {
  return Json{{"hamiltonian", to_string(r.hamiltonian)},
              {"t", r.t},
              {"predicted", r.predicted},
              {"observed", r.observed},
              {"max_mismatch", r.max_mismatch},
              {"pass", r.pass}};
}

}  // namespace gaborwf
