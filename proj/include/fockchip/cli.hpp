// Copyright 2026 The fockchip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end: gate, sweep, hom, calibrate and simulate.
//
// Exit codes: 0 success, 1 computation error, 2 usage or I/O error.
// Angles are degrees unless suffixed with "rad" ("90", "90deg", "1.57rad").

#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fockchip/chip.hpp"
#include "fockchip/errors.hpp"
#include "fockchip/experiment.hpp"
#include "fockchip/gate.hpp"
#include "fockchip/hom.hpp"
#include "fockchip/io.hpp"

namespace fockchip::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Angle in degrees from "x", "xdeg" or "xrad".
inline double parse_angle_deg(std::string s) {
  auto ends_with = [&](std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  try {
    if (ends_with("rad")) return parse_double(s.substr(0, s.size() - 3)) * 180.0 / std::numbers::pi;
    if (ends_with("deg")) return parse_double(s.substr(0, s.size() - 3));
    return parse_double(s);
  } catch (const InputError&) {
    throw UsageError("invalid angle '" + s + "'");
  }
}

inline double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  return w == 360.0 ? 0.0 : w;
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

struct RunConfig {
  std::string eta = "design";
  std::string eta_file;
  std::string out;
  std::string format = "json";
  uint64_t seed = 1;
  // gate
  std::string phi = "0";
  std::optional<double> volts;
  std::string calibration_file;
  std::string circuit_file;
  std::string write_circuit;
  // sweep
  int points = 16;
  std::vector<std::string> phis;
  bool mc = false;
  double pairs = 110000.0;
  // source
  double pair_rate = 11000.0;
  double coupling = 0.65;
  double window_ns = 4.0;
  bool measured_singles = false;
  // hom
  std::string coupler = "coupler3";
  std::optional<double> eta_value;
  double source_overlap = 1.0;
  double baseline = 1000.0;
  std::string shape = "gaussian";
  std::string fit_shape;
  double range_mm = 1.0;
  int scan_points = 81;
  double seconds = 10.0;
  std::string scan_out;
  // calibrate
  std::string samples_file;
  // simulate
  std::string input = "00";
  std::string ports;
  std::string stream_out;
  std::string stream_in;
  double accidental_delay_ns = 100.0;
};

namespace detail {

inline ChipReflectivities resolve_reflectivities(const RunConfig& cfg) {
  if (cfg.eta == "design" || cfg.eta == "measured") {
    if (!cfg.eta_file.empty()) throw UsageError("--eta-file requires --eta custom");
    return cfg.eta == "design" ? ChipReflectivities::design() : ChipReflectivities::measured();
  }
  if (cfg.eta == "custom") {
    if (cfg.eta_file.empty()) throw UsageError("--eta custom requires --eta-file");
    return reflectivities_from_json(parse_json(read_file(cfg.eta_file), cfg.eta_file));
  }
  throw UsageError("--eta must be design, measured or custom");
}

inline SourceModel resolve_source(const RunConfig& cfg) {
  SourceModel src;
  src.pair_rate = cfg.pair_rate;
  src.coupling_efficiency = cfg.coupling;
  src.coincidence_window = cfg.window_ns * 1e-9;
  if (cfg.measured_singles) src = src.with_measured_singles();
  try {
    src.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return src;
}

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_file(cfg.out, text);
  }
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json table_json_rows(const ProbTable& t) { return table_to_json(t)["p"]; }

inline int logical_from_label(const std::string& s) {
  if (s == "00") return 0;
  if (s == "01") return 1;
  if (s == "10") return 2;
  if (s == "11") return 3;
  throw UsageError("logical input must be 00, 01, 10 or 11");
}

}  // namespace detail

inline int cmd_gate(const RunConfig& cfg, std::ostream& out) {
  const ChipReflectivities r = detail::resolve_reflectivities(cfg);
  json report;
  double phi_deg = 0.0;
  if (cfg.volts) {
    // Without a calibration file the nominal 0-7 V full-turn relation applies.
    const PhaseCalibration cal = cfg.calibration_file.empty()
                                     ? PhaseCalibration{}
                                     : calibration_from_json(parse_json(read_file(cfg.calibration_file), "calibration"));
    double phi = 0.0;
    try {
      phi = phase_from_voltage(cal, *cfg.volts);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    phi_deg = phi * 180.0 / std::numbers::pi;
    report["voltage"] = {{"volts", *cfg.volts}, {"phase_deg", phi_deg}};
  } else {
    phi_deg = parse_angle_deg(cfg.phi);
  }
  phi_deg = wrap_degrees(phi_deg);
  const double phi = deg_to_rad(phi_deg);

  CircuitSpec spec = standard_chip(r, phi);
  if (!cfg.circuit_file.empty()) spec = circuit_from_json(parse_json(read_file(cfg.circuit_file), cfg.circuit_file));
  if (!cfg.write_circuit.empty()) write_file(cfg.write_circuit, detail::dump(circuit_to_json(spec)));

  const ModeUnitary u = compose(spec);
  const LogicalEncoding enc = LogicalEncoding::standard();
  const GateMatrix extracted = extract_logical_gate(u, enc);
  const GateMatrix ideal = ideal_gate(phi);
  const bool match = extracted.prefactor > 0.0 &&
                     equal_up_to_global_phase(ComplexMatrix(extracted.normalized()), ComplexMatrix(ideal.entries), 1e-9);
  json success = json::array();
  for (int in = 0; in < 4; ++in) success.push_back(success_probability(u, enc, in));
  const ProbTable ideal_table = prob_table(ideal);
  const ProbTable chip_table = prob_table(extracted);

  report["phi_deg"] = phi_deg;
  if (cfg.circuit_file.empty()) report["reflectivities"] = r.values();
  report["extracted"] = gate_to_json(extracted);
  report["ideal"] = gate_to_json(ideal);
  report["match_up_to_global_phase"] = match;
  report["success_probability"] = success;
  report["chip_table"] = detail::table_json_rows(chip_table);
  report["ideal_table"] = detail::table_json_rows(ideal_table);
  report["similarity"] = similarity(ideal_table, chip_table);
  detail::emit(cfg, out, detail::dump(report));
  return kExitOk;
}

inline std::vector<double> sweep_grid_deg(const RunConfig& cfg) {
  std::vector<double> grid;
  if (!cfg.phis.empty()) {
    for (const auto& p : cfg.phis) {
      if (!p.empty()) grid.push_back(parse_angle_deg(p));
    }
  } else {
    for (int k = 0; k < cfg.points; ++k) grid.push_back(360.0 * k / cfg.points);
  }
  if (grid.empty()) throw UsageError("sweep grid is empty");
  return grid;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
  const ChipReflectivities r = detail::resolve_reflectivities(cfg);
  const std::vector<double> grid = sweep_grid_deg(cfg);
  std::vector<double> phis;
  for (double d : grid) phis.push_back(deg_to_rad(d));

  std::vector<SweepPoint> mc;
  if (cfg.mc) {
    if (!(cfg.pairs > 0.0)) throw UsageError("--pairs must be positive");
    mc = run_phase_sweep_experiment(detail::resolve_source(cfg), r, phis, cfg.pairs, cfg.seed);
  }

  std::vector<SweepCsvRow> rows;
  std::vector<SweepCsvRow> mc_rows;
  json points = json::array();
  double mean_theory = 0.0, mean_mc = 0.0;
  for (size_t k = 0; k < phis.size(); ++k) {
    const ProbTable ideal = prob_table(ideal_gate(phis[k]));
    const ProbTable theory = prob_table(compose(standard_chip(r, phis[k])), LogicalEncoding::standard());
    const double s_theory = similarity(ideal, theory);
    mean_theory += s_theory;
    for (auto& row : sweep_rows(grid[k], theory, "theory")) rows.push_back(std::move(row));
    json pt = {{"phi_deg", grid[k]},
               {"theory", detail::table_json_rows(theory)},
               {"similarity_theory", s_theory}};
    if (cfg.mc) {
      const SweepPoint& m = mc[k];
      const double s_mc = similarity(ideal, m.table);
      mean_mc += s_mc;
      for (auto& row : sweep_rows(grid[k], m.table, "mc")) mc_rows.push_back(std::move(row));
      pt["mc"] = detail::table_json_rows(m.table);
      pt["mc_counts"] = m.counts;
      pt["mc_degenerate"] = m.degenerate;
      pt["similarity_mc"] = s_mc;
    }
    points.push_back(pt);
  }
  rows.insert(rows.end(), mc_rows.begin(), mc_rows.end());

  if (cfg.format == "csv") {
    detail::emit(cfg, out, write_sweep_csv(rows));
  } else {
    json report = {{"reflectivities", r.values()}, {"points", points},
                   {"mean_similarity_theory", mean_theory / static_cast<double>(phis.size())}};
    if (cfg.mc) {
      report["mean_similarity_mc"] = mean_mc / static_cast<double>(phis.size());
      report["seed"] = cfg.seed;
      report["pairs_per_point"] = cfg.pairs;
    }
    detail::emit(cfg, out, detail::dump(report));
  }
  return kExitOk;
}

inline int cmd_hom(const RunConfig& cfg, std::ostream& out) {
  const ChipReflectivities r = detail::resolve_reflectivities(cfg);
  WavepacketModel model;
  model.shape = filter_shape_from_string(cfg.shape);
  const FilterShape fit_shape = cfg.fit_shape.empty() ? model.shape : filter_shape_from_string(cfg.fit_shape);
  if (!(cfg.source_overlap >= 0.0 && cfg.source_overlap <= 1.0)) throw UsageError("--overlap must lie in [0, 1]");
  if (!(cfg.baseline > 0.0)) throw UsageError("--baseline must be positive");
  if (cfg.scan_points < 6) throw UsageError("--points must be at least 6");
  if (!(cfg.range_mm > 0.0)) throw UsageError("--range-mm must be positive");

  std::vector<double> delays;
  for (int k = 0; k < cfg.scan_points; ++k) {
    delays.push_back(1e-3 * cfg.range_mm * (2.0 * k / (cfg.scan_points - 1) - 1.0));
  }

  json report;
  std::vector<double> rates;
  double theory_visibility = 0.0;
  double baseline_factor = 1.0;
  if (cfg.coupler == "chip-path") {
    // Photons enter at C1 and VB and meet at the eta3 coupler.
    const ModeUnitary u = compose(standard_chip(r, 0.0));
    const double classical = two_photon_probability(u, kC1, kVB, kT0, kT1, 0.0);
    const double bare = coincidence_probability(r.eta3, 0.0);
    baseline_factor = classical / bare;
    for (double d : delays) {
      const double x2 = cfg.source_overlap * overlap(model, d / kSpeedOfLight);
      rates.push_back(cfg.baseline * two_photon_probability(u, kC1, kVB, kT0, kT1, x2) / bare);
    }
    theory_visibility = 1.0 - two_photon_probability(u, kC1, kVB, kT0, kT1, cfg.source_overlap) / classical;
    report["coupler"] = "chip-path";
    report["eta"] = r.eta3;
  } else {
    double eta = 0.0;
    if (cfg.coupler == "coupler3") {
      eta = r.eta3;
    } else if (cfg.coupler == "bottom") {
      eta = r.eta5;
    } else if (cfg.coupler == "custom") {
      if (!cfg.eta_value) throw UsageError("--coupler custom requires --eta-value");
      eta = *cfg.eta_value;
    } else {
      throw UsageError("--coupler must be coupler3, bottom, chip-path or custom");
    }
    rates = dip_curve(eta, model, cfg.source_overlap, cfg.baseline, delays);
    theory_visibility = cfg.source_overlap * visibility(eta);
    report["coupler"] = cfg.coupler;
    report["eta"] = eta;
  }

  std::vector<DipSample> samples;
  if (cfg.mc) {
    if (!(cfg.seconds > 0.0)) throw UsageError("--seconds must be positive");
    std::mt19937_64 rng(cfg.seed);
    for (size_t k = 0; k < delays.size(); ++k) {
      std::poisson_distribution<long long> counts(rates[k] * cfg.seconds);
      samples.push_back({delays[k], static_cast<double>(counts(rng)) / cfg.seconds});
    }
  } else {
    for (size_t k = 0; k < delays.size(); ++k) samples.push_back({delays[k], rates[k]});
  }
  if (!cfg.scan_out.empty()) write_file(cfg.scan_out, write_dip_csv(samples));

  const DipFit fit = fit_dip(samples, fit_shape);
  report["source_overlap"] = cfg.source_overlap;
  report["theory_visibility"] = theory_visibility;
  report["baseline_factor"] = baseline_factor;
  report["baseline_cps"] = cfg.baseline * baseline_factor;
  report["coherence_length_m"] = model.coherence_length();
  report["points"] = cfg.scan_points;
  report["monte_carlo"] = cfg.mc;
  if (cfg.mc) {
    report["seconds_per_point"] = cfg.seconds;
    report["seed"] = cfg.seed;
  }
  report["fit"] = dip_fit_to_json(fit);
  detail::emit(cfg, out, detail::dump(report));
  return kExitOk;
}

inline int cmd_calibrate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.samples_file.empty()) throw UsageError("--samples is required");
  const auto samples = parse_calibration_csv(read_file(cfg.samples_file));
  const CalibrationFit fit = fit_calibration(samples);
  detail::emit(cfg, out, detail::dump(calibration_to_json(fit)));
  return kExitOk;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const ChipReflectivities r = detail::resolve_reflectivities(cfg);
  const SourceModel src = detail::resolve_source(cfg);
  const double phi = deg_to_rad(wrap_degrees(parse_angle_deg(cfg.phi)));
  const ModeUnitary u = compose(standard_chip(r, phi));
  const LogicalEncoding enc = LogicalEncoding::standard();

  std::pair<int, int> ports;
  if (!cfg.ports.empty()) {
    const auto f = split(cfg.ports);
    if (f.size() != 2) throw UsageError("--ports expects two comma-separated mode indices");
    try {
      ports = {static_cast<int>(parse_double(f[0])), static_cast<int>(parse_double(f[1]))};
    } catch (const InputError&) {
      throw UsageError("--ports expects two comma-separated mode indices");
    }
  } else {
    const int in = detail::logical_from_label(cfg.input);
    ports = {enc.input_control_mode(in), enc.input_target_mode(in)};
  }

  if (ports.first < 0 || ports.second < 0 || ports.first >= u.dim() || ports.second >= u.dim() ||
      ports.first == ports.second) {
    throw UsageError("--ports must name two distinct modes 0-5");
  }

  TimeTagStream stream;
  if (!cfg.stream_in.empty()) {
    const json side = parse_json(read_file(cfg.stream_in + ".json"), "stream sidecar");
    double duration = 0.0;
    try {
      duration = side.at("duration_s").get<double>();
    } catch (const json::exception& e) {
      throw InputError(cfg.stream_in + ".json: " + e.what());
    }
    stream = parse_stream_csv(read_file(cfg.stream_in), duration);
  } else {
    if (!(cfg.seconds > 0.0)) throw UsageError("--seconds must be positive");
    stream = generate_stream(src, u, ports, cfg.seed, cfg.seconds);
  }
  if (!cfg.stream_out.empty()) {
    write_file(cfg.stream_out, write_stream_csv(stream));
    write_file(cfg.stream_out + ".json", detail::dump(stream_sidecar_json(stream, src, ports, cfg.seed)));
  }

  const CoincidenceReport report = count_coincidences(stream, src.coincidence_window);
  const CoincidenceReport delayed =
      count_coincidences(stream, src.coincidence_window, cfg.accidental_delay_ns * 1e-9);
  const RateEstimate est = estimate_rates(src, u, ports, enc);

  json logical = json::array();
  for (int o = 0; o < 4; ++o) {
    logical.push_back({{"output", logical_label(o)},
                       {"count", report.count(enc.output_control_mode(o), enc.output_target_mode(o))}});
  }
  json predicted = json::array();
  for (const auto& [pair, rate] : est.coincidences) {
    predicted.push_back({{"a", pair.first}, {"b", pair.second}, {"rate_cps", rate}});
  }
  json result = {{"phi_deg", wrap_degrees(parse_angle_deg(cfg.phi))},
                 {"input_ports", {ports.first, ports.second}},
                 {"seed", cfg.seed},
                 {"events", stream.size()},
                 {"coincidences", coincidence_report_to_json(report)},
                 {"accidentals_delayed", coincidence_report_to_json(delayed)},
                 {"accidental_delay_ns", cfg.accidental_delay_ns},
                 {"post_selected", logical},
                 {"predicted_singles_cps", est.singles},
                 {"predicted_coincidences", predicted},
                 {"predicted_logical_rate_cps", est.logical_rate.value_or(0.0)}};
  detail::emit(cfg, out, detail::dump(result));
  return kExitOk;
}

namespace detail {

// Turns {"key": value} from a --config file into "--key value" arguments for
// every key not already given on the command line.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  const json cfg = parse_json(read_file(path), path);
  if (!cfg.is_object()) throw InputError(path + ": config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : args) present = present || a == flag || a.rfind(flag + "=", 0) == 0;
    if (present) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ',';
        joined += v.is_string() ? v.get<std::string>() : v.dump();
      }
      args.push_back(flag);
      args.push_back(joined);
    } else {
      args.push_back(flag);
      args.push_back(value.dump());
    }
  }
  return args;
}

}  // namespace detail

/// Runs the CLI on `args` (without the program name).
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  try {
    args = detail::expand_config(std::move(args));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  RunConfig cfg;
  CLI::App app{"fockchip: reconfigurable two-qubit photonic chip simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fockchip 1.0.0");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--eta", cfg.eta, "Reflectivity set: design, measured or custom")->capture_default_str();
    sub->add_option("--eta-file", cfg.eta_file, "JSON {\"eta\": [eta1..eta5]} for --eta custom");
    sub->add_option("--out", cfg.out, "Write the report to this file instead of stdout");
  };
  auto add_source = [&](CLI::App* sub) {
    sub->add_option("--pair-rate", cfg.pair_rate, "Detected pairs per second at the source")->capture_default_str();
    sub->add_option("--coupling", cfg.coupling, "Through-chip efficiency per photon")->capture_default_str();
    sub->add_option("--window-ns", cfg.window_ns, "Coincidence window half-width, ns")->capture_default_str();
    sub->add_flag("--measured-singles", cfg.measured_singles, "Add unpaired photons up to 80000 singles per detector");
    sub->add_option("--seed", cfg.seed, "Random seed")->envname("FOCKCHIP_SEED")->capture_default_str();
  };

  auto* gate = app.add_subcommand("gate", "Extract the logical gate at one phase setting");
  add_common(gate);
  gate->add_option("--phi", cfg.phi, "Phase (deg, or with rad suffix)")->capture_default_str();
  gate->add_option("--volts", cfg.volts, "Heater voltage, converted with --calibration");
  gate->add_option("--calibration", cfg.calibration_file, "Calibration JSON written by 'calibrate'");
  gate->add_option("--circuit", cfg.circuit_file, "Use this circuit JSON instead of the standard chip");
  gate->add_option("--write-circuit", cfg.write_circuit, "Write the circuit JSON used");

  auto* sweep = app.add_subcommand("sweep", "Probability tables over a phase grid");
  add_common(sweep);
  add_source(sweep);
  sweep->add_option("--points", cfg.points, "Evenly spaced grid size over [0, 360)")->capture_default_str();
  sweep->add_option("--phis", cfg.phis, "Explicit phase list")->delimiter(',');
  sweep->add_flag("--mc", cfg.mc, "Add Monte-Carlo tables");
  sweep->add_option("--pairs", cfg.pairs, "Pairs per phase and input")->capture_default_str();
  sweep->add_option("--format", cfg.format, "json or csv")->capture_default_str();

  auto* hom = app.add_subcommand("hom", "Hong-Ou-Mandel dip scan and fit");
  add_common(hom);
  hom->add_option("--coupler", cfg.coupler, "coupler3, bottom, chip-path or custom")->capture_default_str();
  hom->add_option("--eta-value", cfg.eta_value, "Reflectivity for --coupler custom");
  hom->add_option("--overlap", cfg.source_overlap, "Source mode overlap V0")->capture_default_str();
  hom->add_option("--baseline", cfg.baseline, "Bare-coupler classical coincidence rate, cps")->capture_default_str();
  hom->add_option("--shape", cfg.shape, "gaussian, rect or gaussian_times_rect")->capture_default_str();
  hom->add_option("--fit-shape", cfg.fit_shape, "Dip shape used by the fit (default: --shape)");
  hom->add_option("--range-mm", cfg.range_mm, "Scan half-range of path delay, mm")->capture_default_str();
  hom->add_option("--points", cfg.scan_points, "Scan points")->capture_default_str();
  hom->add_flag("--mc", cfg.mc, "Add Poisson counting noise");
  hom->add_option("--seconds", cfg.seconds, "Counting time per point")->capture_default_str();
  hom->add_option("--seed", cfg.seed, "Random seed")->envname("FOCKCHIP_SEED")->capture_default_str();
  hom->add_option("--scan-out", cfg.scan_out, "Write the scan as CSV");

  auto* calibrate = app.add_subcommand("calibrate", "Fit the phase/voltage relation from a fringe scan");
  calibrate->add_option("--samples", cfg.samples_file, "CSV volts,signal");
  calibrate->add_option("--out", cfg.out, "Write the calibration JSON here");

  auto* simulate = app.add_subcommand("simulate", "Generate a time-tag stream and count coincidences");
  add_common(simulate);
  add_source(simulate);
  simulate->add_option("--phi", cfg.phi, "Phase (deg, or with rad suffix)")->capture_default_str();
  simulate->add_option("--input", cfg.input, "Logical input 00, 01, 10 or 11")->capture_default_str();
  simulate->add_option("--ports", cfg.ports, "Explicit input modes a,b (overrides --input)");
  simulate->add_option("--seconds", cfg.seconds, "Live time")->capture_default_str();
  simulate->add_option("--stream-out", cfg.stream_out, "Write channel,timestamp_ns CSV (+ .json sidecar)");
  simulate->add_option("--stream-in", cfg.stream_in, "Count an existing stream CSV (+ .json sidecar)");
  simulate->add_option("--accidental-delay-ns", cfg.accidental_delay_ns, "Delay for the accidental monitor")
      ->capture_default_str();

  std::vector<const char*> argv{"fockchip"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gate->parsed()) return cmd_gate(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, out);
    if (hom->parsed()) return cmd_hom(cfg, out);
    if (calibrate->parsed()) return cmd_calibrate(cfg, out);
    if (simulate->parsed()) return cmd_simulate(cfg, out);
    err << "usage error: no subcommand\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace fockchip::cli
