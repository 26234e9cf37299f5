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

// JSON and CSV interchange formats.
//
//   CircuitSpec   {"modes": n, "elements": [{"type": "coupler", "a": i, "b": j, "eta": r},
//                                           {"type": "phase", "mode": i, "phi": x}]}
//   GateMatrix    {"entries": 4x4 row-major [re, im], "prefactor": p, "unitary_distance": d}
//   ProbTable     {"p": 4x4 row-major, rows = logical input}
//   sweep CSV     phi_deg,input,p00,p01,p10,p11,source
//   dip scan CSV  delay_m,rate_cps
//   fringe CSV    volts,signal
//   time tags     channel,timestamp_ns (sorted), plus a JSON sidecar

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "fockchip/chip.hpp"
#include "fockchip/errors.hpp"
#include "fockchip/experiment.hpp"
#include "fockchip/gate.hpp"
#include "fockchip/hom.hpp"

namespace fockchip {

using json = nlohmann::ordered_json;

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw InputError("not a number: '" + std::string(s) + "'");
  return x;
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("write failed for '" + path + "'");
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": " + e.what());
  }
}

// --- circuits ---------------------------------------------------------------

inline json circuit_to_json(const CircuitSpec& spec) {
  json elements = json::array();
  for (const auto& e : spec.elements()) {
    if (const auto* c = std::get_if<CouplerElement>(&e)) {
      elements.push_back({{"type", "coupler"}, {"a", c->mode_a}, {"b", c->mode_b}, {"eta", c->eta}});
    } else {
      const auto& p = std::get<PhaseElement>(e);
      elements.push_back({{"type", "phase"}, {"mode", p.mode}, {"phi", p.phi}});
    }
  }
  return {{"modes", spec.mode_count()}, {"elements", elements}};
}

inline CircuitSpec circuit_from_json(const json& j) {
  try {
    CircuitSpec spec(j.at("modes").get<int>());
    for (const auto& e : j.at("elements")) {
      const auto type = e.at("type").get<std::string>();
      if (type == "coupler") {
        spec.add_coupler(e.at("a").get<int>(), e.at("b").get<int>(), e.at("eta").get<double>());
      } else if (type == "phase") {
        spec.add_phase(e.at("mode").get<int>(), e.at("phi").get<double>());
      } else {
        throw InputError("circuit: unknown element type '" + type + "'");
      }
    }
    return spec;
  } catch (const json::exception& e) {
    throw InputError(std::string("circuit: ") + e.what());
  }
}

// --- gate analysis ------------------------------------------------------------

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json gate_to_json(const GateMatrix& g) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(complex_to_json(g.entries(r, c)));
    rows.push_back(row);
  }
  return {{"entries", rows}, {"prefactor", g.prefactor}, {"unitary_distance", g.unitary_distance}};
}

inline GateMatrix gate_from_json(const json& j) {
  try {
    GateMatrix g;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        const auto& z = j.at("entries").at(static_cast<size_t>(r)).at(static_cast<size_t>(c));
        g.entries(r, c) = Complex{z.at(0).get<double>(), z.at(1).get<double>()};
      }
    }
    g.prefactor = j.at("prefactor").get<double>();
    g.unitary_distance = j.value("unitary_distance", 0.0);
    return g;
  } catch (const json::exception& e) {
    throw InputError(std::string("gate: ") + e.what());
  }
}

inline json table_to_json(const ProbTable& t) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(t.p(r, c));
    rows.push_back(row);
  }
  return {{"p", rows}};
}

inline ProbTable table_from_json(const json& j) {
  try {
    ProbTable t;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) t.p(r, c) = j.at("p").at(static_cast<size_t>(r)).at(static_cast<size_t>(c));
    }
    return t;
  } catch (const json::exception& e) {
    throw InputError(std::string("table: ") + e.what());
  }
}

struct SweepCsvRow {
  double phi_deg = 0.0;
  int input = 0;
  std::array<double, 4> p{};
  std::string source;
  friend bool operator==(const SweepCsvRow&, const SweepCsvRow&) = default;
};

inline constexpr std::string_view kSweepCsvHeader = "phi_deg,input,p00,p01,p10,p11,source";

inline std::vector<SweepCsvRow> sweep_rows(double phi_deg, const ProbTable& t, const std::string& source) {
  std::vector<SweepCsvRow> rows;
  for (int in = 0; in < 4; ++in) rows.push_back({phi_deg, in, {t.p(in, 0), t.p(in, 1), t.p(in, 2), t.p(in, 3)}, source});
  return rows;
}

inline std::string write_sweep_csv(const std::vector<SweepCsvRow>& rows) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_double(r.phi_deg) + ',' + logical_label(r.input);
    for (double p : r.p) out += ',' + format_double(p);
    out += ',' + r.source + '\n';
  }
  return out;
}

inline std::vector<SweepCsvRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) throw InputError("sweep CSV: bad header");
  std::vector<SweepCsvRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 7) throw InputError("sweep CSV line " + std::to_string(lineno) + ": expected 7 fields");
    SweepCsvRow r;
    r.phi_deg = parse_double(f[0]);
    if (f[1] == "00") r.input = 0;
    else if (f[1] == "01") r.input = 1;
    else if (f[1] == "10") r.input = 2;
    else if (f[1] == "11") r.input = 3;
    else throw InputError("sweep CSV line " + std::to_string(lineno) + ": bad input label");
    for (size_t k = 0; k < 4; ++k) r.p[k] = parse_double(f[2 + k]);
    r.source = f[6];
    rows.push_back(std::move(r));
  }
  return rows;
}

// --- HOM and calibration ------------------------------------------------------

inline std::string write_dip_csv(const std::vector<DipSample>& samples) {
  std::string out = "delay_m,rate_cps\n";
  for (const auto& s : samples) out += format_double(s.delay_m) + ',' + format_double(s.rate) + '\n';
  return out;
}

namespace detail {

inline std::vector<std::pair<double, double>> parse_two_column_csv(const std::string& text, std::string_view header,
                                                                  const std::string& what) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError(what + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw InputError(what + ": expected header '" + std::string(header) + "'");
  std::vector<std::pair<double, double>> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 2) throw InputError(what + " line " + std::to_string(lineno) + ": expected 2 fields");
    out.emplace_back(parse_double(f[0]), parse_double(f[1]));
  }
  return out;
}

}  // namespace detail

inline std::vector<DipSample> parse_dip_csv(const std::string& text) {
  std::vector<DipSample> out;
  for (const auto& [d, r] : detail::parse_two_column_csv(text, "delay_m,rate_cps", "dip CSV")) out.push_back({d, r});
  return out;
}

inline std::string write_calibration_csv(const std::vector<CalibrationSample>& samples) {
  std::string out = "volts,signal\n";
  for (const auto& s : samples) out += format_double(s.volts) + ',' + format_double(s.signal) + '\n';
  return out;
}

inline std::vector<CalibrationSample> parse_calibration_csv(const std::string& text) {
  std::vector<CalibrationSample> out;
  for (const auto& [v, s] : detail::parse_two_column_csv(text, "volts,signal", "fringe CSV")) out.push_back({v, s});
  return out;
}

inline json dip_fit_to_json(const DipFit& f) {
  return {{"visibility", f.visibility},
          {"visibility_uncertainty", f.visibility_uncertainty},
          {"width_m", f.width},
          {"width_uncertainty_m", std::isfinite(f.width_uncertainty) ? json(f.width_uncertainty) : json(nullptr)},
          {"width_flagged", f.width_flagged},
          {"center_m", f.center},
          {"baseline_rate_cps", f.baseline_rate},
          {"residual", f.residual},
          {"shape", to_string(f.shape)}};
}

inline json calibration_to_json(const CalibrationFit& f) {
  return {{"phi0_rad", f.calibration.phi0},
          {"alpha_rad_per_v2", f.calibration.alpha},
          {"v_max_v", f.calibration.v_max},
          {"offset", f.offset},
          {"amplitude", f.amplitude},
          {"residual_norm", f.residual_norm}};
}

inline PhaseCalibration calibration_from_json(const json& j) {
  try {
    return PhaseCalibration{j.at("phi0_rad").get<double>(), j.at("alpha_rad_per_v2").get<double>(),
                            j.at("v_max_v").get<double>()};
  } catch (const json::exception& e) {
    throw InputError(std::string("calibration: ") + e.what());
  }
}

inline ChipReflectivities reflectivities_from_json(const json& j) {
  try {
    const auto v = j.at("eta").get<std::vector<double>>();
    if (v.size() != 5) throw InputError("reflectivities: expected 5 values in \"eta\"");
    return ChipReflectivities::from_values({v[0], v[1], v[2], v[3], v[4]});
  } catch (const json::exception& e) {
    throw InputError(std::string("reflectivities: ") + e.what());
  }
}

// --- experiment -------------------------------------------------------------

inline json source_to_json(const SourceModel& s) {
  return {{"pair_rate", s.pair_rate},
          {"unpaired_rate", s.unpaired_rate},
          {"multipair_prob", s.multipair_prob},
          {"coupling_efficiency", s.coupling_efficiency},
          {"detector_efficiency", s.detector_efficiency},
          {"channel_efficiency", s.channel_efficiency},
          {"coincidence_window_s", s.coincidence_window},
          {"pulse_on_s", s.pulse_on},
          {"pulse_off_s", s.pulse_off},
          {"dark_count_rate", s.dark_count_rate},
          {"indistinguishability", s.indistinguishability},
          {"timestamp_resolution_s", s.timestamp_resolution}};
}

inline json coincidence_report_to_json(const CoincidenceReport& r) {
  json singles = json::object();
  for (const auto& [ch, n] : r.singles) singles[std::to_string(ch)] = n;
  json counts = json::array();
  for (const auto& [pair, n] : r.counts) counts.push_back({{"a", pair.first}, {"b", pair.second}, {"count", n}});
  return {{"window_s", r.window}, {"live_time_s", r.live_time}, {"singles", singles}, {"counts", counts}};
}

/// Timestamps are written in nanoseconds with three decimals, exact at 1 ps.
inline std::string write_stream_csv(const TimeTagStream& stream) {
  std::string out = "channel,timestamp_ns\n";
  char buf[64];
  for (const auto& e : stream.events()) {
    const long long ns = e.time_ps / 1000;
    const long long frac = e.time_ps % 1000;
    std::snprintf(buf, sizeof buf, "%d,%lld.%03lld\n", e.channel, ns, frac);
    out += buf;
  }
  return out;
}

inline int64_t parse_timestamp_ns(std::string_view s) {
  const size_t dot = s.find('.');
  const std::string_view whole = s.substr(0, dot);
  int64_t ns = 0;
  auto r = std::from_chars(whole.data(), whole.data() + whole.size(), ns);
  if (r.ec != std::errc() || r.ptr != whole.data() + whole.size() || ns < 0) {
    throw InputError("bad timestamp '" + std::string(s) + "'");
  }
  int64_t ps = ns * 1000;
  if (dot != std::string_view::npos) {
    const std::string_view frac = s.substr(dot + 1);
    if (frac.empty() || frac.size() > 3) throw InputError("timestamp finer than 1 ps: '" + std::string(s) + "'");
    int64_t f = 0;
    r = std::from_chars(frac.data(), frac.data() + frac.size(), f);
    if (r.ec != std::errc() || r.ptr != frac.data() + frac.size()) {
      throw InputError("bad timestamp '" + std::string(s) + "'");
    }
    for (size_t k = frac.size(); k < 3; ++k) f *= 10;
    ps += f;
  }
  return ps;
}

inline TimeTagStream parse_stream_csv(const std::string& text, double duration) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "channel,timestamp_ns") throw InputError("time-tag CSV: bad header");
  std::vector<TagEvent> events;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 2) throw InputError("time-tag CSV line " + std::to_string(lineno) + ": expected 2 fields");
    int ch = 0;
    const auto r = std::from_chars(f[0].data(), f[0].data() + f[0].size(), ch);
    if (r.ec != std::errc() || r.ptr != f[0].data() + f[0].size()) {
      throw InputError("time-tag CSV line " + std::to_string(lineno) + ": bad channel");
    }
    events.push_back({ch, parse_timestamp_ns(f[1])});
  }
  return TimeTagStream(std::move(events), duration);
}

inline json stream_sidecar_json(const TimeTagStream& stream, const SourceModel& src, std::pair<int, int> ports,
                                uint64_t seed) {
  return {{"duration_s", stream.duration()},
          {"events", stream.size()},
          {"seed", seed},
          {"input_ports", {ports.first, ports.second}},
          {"source", source_to_json(src)}};
}

}  // namespace fockchip
