#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "gaborwf/atom.hpp"
#include "gaborwf/frames.hpp"
#include "gaborwf/quadflow.hpp"
#include "gaborwf/wavefront.hpp"

#include "json.hpp"

namespace gaborwf {

using Json = nlohmann::ordered_json;

/// Atom spec grammar:
///   delta:<x0> | planewave:<xi0> | chirp:<c> | gaussian:<x0>,<sigma>
///   shift:<x0>,<xi0>:<atom>
///   sum:<term>+<term>+...   term = [<coef>*]<atom>, coef = <real> | (<re>,<im>)
/// Nested sums are written in brackets: sum:delta:0+[sum:chirp:1+chirp:-1].
AtomPtr parse_atom(const std::string& spec);
std::string format_atom(const Atom& a);

/// Flat key=value file; '#' starts a comment, blank lines are skipped.
std::map<std::string, std::string> parse_config(std::istream& in);

/// Shortest decimal that round-trips the double.
std::string format_double(double v);

// CSV writers: header row, comma separated, LF endings.
void write_signal_csv(std::ostream& os, const SampledSignal& s);
void write_phase_field_csv(std::ostream& os, const PhaseField& f);  // x, xi, re, im, abs
void write_coefficients_csv(std::ostream& os, const GaborCoefficients& c);
void write_wavefront_csv(std::ostream& os, const WaveFrontEstimate& e);  // theta_deg, class_code, order

Json grid_json(const Grid1D& g);
Json phase_field_json(const PhaseField& f);
Json coefficients_json(const GaborCoefficients& c);
Json wavefront_json(const WaveFrontEstimate& e);
Json frame_report_json(const FrameReport& r);
Json propagation_report_json(const PropagationReport& r);

}  // namespace gaborwf
