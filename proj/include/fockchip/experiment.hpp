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

// Monte-Carlo emulation of the photon-pair experiment: pulsed pair source,
// chip propagation, lossy detection, time tagging and software coincidence
// counting.
//
// Output mode m of the network is wired to time-tagger channel m. Detectors
// report every surviving photon (no dead time), so two photons leaving in
// the same mode give two events on one channel.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "fockchip/chip.hpp"
#include "fockchip/errors.hpp"
#include "fockchip/fock.hpp"
#include "fockchip/gate.hpp"
#include "fockchip/hom.hpp"

namespace fockchip {

inline constexpr int kMaxChannels = 16;

/// Photon-pair source, coupling and detection parameters.
struct SourceModel {
  /// Detected pairs per second at the source reference plane (detector
  /// efficiency folded in, hence detector_efficiency defaults to 1).
  double pair_rate = 11000.0;
  /// Photons per second per input arm that arrive without a partner.
  double unpaired_rate = 0.0;
  /// Chance that a second, independent pair lands in the same window.
  double multipair_prob = 0.005;
  /// Through-chip transmission per photon, input and output facets included.
  double coupling_efficiency = 0.65;
  double detector_efficiency = 1.0;
  /// Relative efficiency per output channel; empty means all 1.
  std::vector<double> channel_efficiency;
  /// Coincidence half-width: clicks count as coincident when |dt| <= window.
  double coincidence_window = 4e-9;
  double pulse_on = 1.0;
  double pulse_off = 5.0;
  double dark_count_rate = 0.0;
  /// Squared overlap |<psi_1|psi_2>|^2 of the two photons of a pair.
  double indistinguishability = 1.0;
  double timestamp_resolution = 100e-12;

  void validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!(pair_rate >= 0.0) || !(unpaired_rate >= 0.0) || !(dark_count_rate >= 0.0)) {
      throw DomainError("SourceModel: rates must be non-negative");
    }
    if (!prob(multipair_prob) || !prob(coupling_efficiency) || !prob(detector_efficiency) ||
        !prob(indistinguishability)) {
      throw DomainError("SourceModel: probabilities and efficiencies must lie in [0, 1]");
    }
    for (double e : channel_efficiency) {
      if (!prob(e)) throw DomainError("SourceModel: channel efficiency outside [0, 1]");
    }
    if (channel_efficiency.size() > kMaxChannels) throw DomainError("SourceModel: more than 16 channels");
    if (!(coincidence_window > 0.0)) throw DomainError("SourceModel: coincidence window must be positive");
    if (!(pulse_on > 0.0) || !(pulse_off >= 0.0)) throw DomainError("SourceModel: invalid duty cycle");
    if (!(timestamp_resolution > 0.0)) throw DomainError("SourceModel: timestamp resolution must be positive");
  }

  /// Detection probability of a photon leaving in output mode `mode`.
  double survival(int mode) const {
    const double ch = static_cast<size_t>(mode) < channel_efficiency.size()
                          ? channel_efficiency[static_cast<size_t>(mode)]
                          : 1.0;
    return coupling_efficiency * detector_efficiency * ch;
  }

  /// Adds the unpaired photons behind the ~80000 singles per detector seen
  /// alongside 11000 coincidences per second with the source wired directly
  /// to the detectors.
  SourceModel with_measured_singles() const {
    SourceModel s = *this;
    s.unpaired_rate = 80000.0 - pair_rate;
    return s;
  }

  /// Pairs only: no unpaired photons, multipairs or dark counts.
  SourceModel without_background() const {
    SourceModel s = *this;
    s.unpaired_rate = 0.0;
    s.multipair_prob = 0.0;
    s.dark_count_rate = 0.0;
    return s;
  }
};

struct TagEvent {
  int channel = 0;
  int64_t time_ps = 0;
  friend bool operator==(const TagEvent&, const TagEvent&) = default;
};

/// Detector clicks ordered by time. `duration` is the live (counting) time in
/// seconds; timestamps are wall-clock and include the off periods of the pulse
/// cycle.
class TimeTagStream {
 public:
  TimeTagStream() = default;

  TimeTagStream(std::vector<TagEvent> events, double duration) : events_(std::move(events)), duration_(duration) {
    if (!(duration >= 0.0)) throw InputError("TimeTagStream: negative duration");
    for (size_t i = 0; i < events_.size(); ++i) {
      if (events_[i].channel < 0 || events_[i].channel >= kMaxChannels) {
        throw InputError("TimeTagStream: channel outside 0..15");
      }
      if (i && events_[i].time_ps < events_[i - 1].time_ps) throw InputError("TimeTagStream: timestamps not sorted");
    }
  }

  const std::vector<TagEvent>& events() const { return events_; }
  double duration() const { return duration_; }
  size_t size() const { return events_.size(); }

  friend bool operator==(const TimeTagStream&, const TimeTagStream&) = default;

 private:
  std::vector<TagEvent> events_;
  double duration_ = 0.0;
};

using ChannelPair = std::pair<int, int>;

struct CoincidenceReport {
  /// Keyed by (a, b) with a < b.
  std::map<ChannelPair, int64_t> counts;
  std::map<int, int64_t> singles;
  double window = 0.0;
  double live_time = 0.0;

  int64_t count(int a, int b) const {
    const auto it = counts.find(a < b ? ChannelPair{a, b} : ChannelPair{b, a});
    return it == counts.end() ? 0 : it->second;
  }
  int64_t single(int ch) const {
    const auto it = singles.find(ch);
    return it == singles.end() ? 0 : it->second;
  }
};

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for an independent sub-run, a pure function of its coordinates.
inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xD1B54A32D192ED03ull));
}

inline int64_t window_ps(double seconds) { return std::llround(seconds * 1e12); }

inline std::array<std::vector<int64_t>, kMaxChannels> split_channels(const TimeTagStream& stream) {
  std::array<std::vector<int64_t>, kMaxChannels> by_channel;
  for (const auto& e : stream.events()) by_channel[static_cast<size_t>(e.channel)].push_back(e.time_ps);
  return by_channel;
}

// Greedy earliest matching of two sorted click lists; b is shifted by `shift`.
inline int64_t match_pairs(const std::vector<int64_t>& a, const std::vector<int64_t>& b, int64_t window,
                           int64_t shift) {
  int64_t n = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const int64_t ta = a[i];
    const int64_t tb = b[j] + shift;
    if (std::abs(ta - tb) <= window) {
      ++n;
      ++i;
      ++j;
    } else if (ta < tb) {
      ++i;
    } else {
      ++j;
    }
  }
  return n;
}

// Uniform variates with 32-bit resolution, two per 64-bit Mersenne Twister draw.
class UniformStream {
 public:
  explicit UniformStream(uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return static_cast<double>(spare_) * 0x1.0p-32;
    }
    const uint64_t bits = engine_();
    spare_ = static_cast<uint32_t>(bits);
    has_spare_ = true;
    return static_cast<double>(bits >> 32) * 0x1.0p-32;
  }

  /// Exponential with the given rate.
  double exponential(double rate) { return -std::log(1.0 - next()) / rate; }

 private:
  std::mt19937_64 engine_;
  uint32_t spare_ = 0;
  bool has_spare_ = false;
};

inline int sample_cdf(const std::vector<double>& cdf, double r) {
  const int last = static_cast<int>(cdf.size()) - 1;
  int k = 0;
  while (k < last && r >= cdf[static_cast<size_t>(k)]) ++k;
  return k;
}

using ChannelClicks = std::array<std::vector<int64_t>, kMaxChannels>;

// Poisson arrival times of the given rate over live time [0, duration),
// mapped onto the wall clock of the pulse cycle; `visit` gets wall seconds.
template <typename Visit>
void poisson_arrivals(const SourceModel& src, double rate, double duration, UniformStream& rng, Visit&& visit) {
  if (!(rate > 0.0)) return;
  const double period = src.pulse_on + src.pulse_off;
  double pulse_start_live = 0.0;
  double pulse_start_wall = 0.0;
  for (double live = rng.exponential(rate); live < duration; live += rng.exponential(rate)) {
    while (live >= pulse_start_live + src.pulse_on) {
      pulse_start_live += src.pulse_on;
      pulse_start_wall += period;
    }
    visit(pulse_start_wall + (live - pulse_start_live));
  }
}

// Per-channel click times (sorted) for one run of generate_stream.
inline ChannelClicks simulate_clicks(const SourceModel& src, const ModeUnitary& u, std::pair<int, int> input_ports,
                                     uint64_t seed, double duration) {
  src.validate();
  if (!(duration > 0.0)) throw DomainError("generate_stream: duration must be positive");
  const int n = u.dim();
  if (n > kMaxChannels) throw DimensionError("generate_stream: more modes than tagger channels");
  const auto [in_a, in_b] = input_ports;
  if (in_a < 0 || in_b < 0 || in_a >= n || in_b >= n || in_a == in_b) {
    throw DimensionError("generate_stream: input ports must be two distinct modes of the network");
  }

  // Bosonic outcomes (pairs of output modes) and single-photon columns.
  std::vector<std::pair<int, int>> bosonic_modes;
  std::vector<double> bosonic_cdf;
  double acc = 0.0;
  for (const auto& [state, p] : output_distribution(u, FockState::from_photon_modes(n, {in_a, in_b}))) {
    if (p <= 0.0) continue;
    const auto modes = state.photon_modes();
    bosonic_modes.emplace_back(modes[0], modes[1]);
    acc += p;
    bosonic_cdf.push_back(acc);
  }
  for (double& c : bosonic_cdf) c /= acc;
  auto column_cdf = [&](int in) {
    std::vector<double> cdf;
    double c = 0.0;
    for (int m = 0; m < n; ++m) {
      c += std::norm(u(m, in));
      cdf.push_back(c);
    }
    for (double& x : cdf) x /= c;
    return cdf;
  };
  const std::vector<double> cdf_a = column_cdf(in_a);
  const std::vector<double> cdf_b = column_cdf(in_b);
  std::array<double, kMaxChannels> survival{};
  for (int m = 0; m < n; ++m) survival[static_cast<size_t>(m)] = src.survival(m);

  UniformStream rng(seed);
  const double res = src.timestamp_resolution;
  const int64_t res_ps = std::max<int64_t>(1, std::llround(res * 1e12));
  const bool mixed = src.indistinguishability > 0.0 && src.indistinguishability < 1.0;
  ChannelClicks clicks;

  // Jitter the arrival onto the resolution grid: slot floor(wall / res + j).
  auto tag = [&](double wall, double jitter) { return static_cast<int64_t>(wall / res + jitter) * res_ps; };
  auto click = [&](int mode, double wall) {
    const double s = survival[static_cast<size_t>(mode)];
    const double r = rng.next();
    if (r >= s) return;
    // Given survival, r / s is again uniform on [0, 1).
    clicks[static_cast<size_t>(mode)].push_back(tag(wall, r / s));
  };
  auto emit_pair = [&](double wall) {
    int ka, kb;
    const bool bosonic = mixed ? rng.next() < src.indistinguishability : src.indistinguishability >= 1.0;
    if (bosonic) {
      std::tie(ka, kb) = bosonic_modes[static_cast<size_t>(sample_cdf(bosonic_cdf, rng.next()))];
    } else {
      ka = sample_cdf(cdf_a, rng.next());
      kb = sample_cdf(cdf_b, rng.next());
    }
    if (ka != kb) {
      click(ka, wall);
      click(kb, wall);
      return;
    }
    // Threshold detector: two photons in one mode give one click if either survives.
    const double s = survival[static_cast<size_t>(ka)];
    const double s2 = s * (2.0 - s);
    const double r = rng.next();
    if (r < s2) clicks[static_cast<size_t>(ka)].push_back(tag(wall, r / s2));
  };

  // Each pair independently carries a second pair with probability
  // multipair_prob; thinning splits the arrivals into two Poisson streams.
  std::array<std::array<size_t, kMaxChannels>, 3> section_end{};
  auto close_section = [&](size_t k) {
    for (int m = 0; m < n; ++m) section_end[k][static_cast<size_t>(m)] = clicks[static_cast<size_t>(m)].size();
  };
  poisson_arrivals(src, src.pair_rate * (1.0 - src.multipair_prob), duration, rng, emit_pair);
  close_section(0);
  poisson_arrivals(src, src.pair_rate * src.multipair_prob, duration, rng, [&](double wall) {
    emit_pair(wall);
    emit_pair(wall + rng.next() * src.coincidence_window);
  });
  close_section(1);

  // Unpaired photons thin into independent Poisson processes per output mode.
  for (int m = 0; m < n; ++m) {
    const double routed = std::norm(u(m, in_a)) + std::norm(u(m, in_b));
    const double rate = src.unpaired_rate * routed * survival[static_cast<size_t>(m)] + src.dark_count_rate;
    auto& out = clicks[static_cast<size_t>(m)];
    poisson_arrivals(src, rate, duration, rng, [&](double wall) { out.push_back(tag(wall, rng.next())); });
  }

  close_section(2);

  // Each section is time ordered up to jitter and multipair offsets.
  for (int m = 0; m < n; ++m) {
    auto& c = clicks[static_cast<size_t>(m)];
    auto begin = c.begin();
    for (size_t k = 0; k < 3; ++k) {
      const auto end = c.begin() + static_cast<std::ptrdiff_t>(section_end[k][static_cast<size_t>(m)]);
      if (!std::is_sorted(begin, end)) std::sort(begin, end);
      if (k) std::inplace_merge(c.begin(), begin, end);
      begin = end;
    }
  }
  return clicks;
}

inline CoincidenceReport count_channel_clicks(const ChannelClicks& by_channel, double window, double delay,
                                              double live_time) {
  CoincidenceReport report;
  report.window = window;
  report.live_time = live_time;
  const int64_t w = window_ps(window);
  const int64_t shift = window_ps(delay);
  for (int a = 0; a < kMaxChannels; ++a) {
    const auto& ta = by_channel[static_cast<size_t>(a)];
    if (ta.empty()) continue;
    report.singles[a] = static_cast<int64_t>(ta.size());
    for (int b = a + 1; b < kMaxChannels; ++b) {
      const auto& tb = by_channel[static_cast<size_t>(b)];
      if (tb.empty()) continue;
      report.counts[{a, b}] = match_pairs(ta, tb, w, shift);
    }
  }
  return report;
}

}  // namespace detail

/// Simulated time tags for photon pairs injected at `input_ports` of `u`
/// during `duration` seconds of live time. Pairs arrive as a Poisson process
/// during pulse-on periods only; each pair is routed by the two-photon output
/// distribution (bosonic with probability `indistinguishability`, otherwise
/// photon by photon), each photon survives with the source's efficiencies
/// (two photons in one mode make one click), and timestamps are jittered onto the resolution grid. Bit-reproducible for
/// a given seed.
inline TimeTagStream generate_stream(const SourceModel& src, const ModeUnitary& u, std::pair<int, int> input_ports,
                                     uint64_t seed, double duration) {
  const auto clicks = detail::simulate_clicks(src, u, input_ports, seed, duration);
  size_t total = 0;
  for (const auto& c : clicks) total += c.size();
  std::vector<TagEvent> events;
  events.reserve(total);
  std::array<size_t, kMaxChannels> head{};
  for (size_t k = 0; k < total; ++k) {
    int best = -1;
    int64_t best_t = 0;
    for (int m = 0; m < kMaxChannels; ++m) {
      const auto& c = clicks[static_cast<size_t>(m)];
      const size_t h = head[static_cast<size_t>(m)];
      if (h < c.size() && (best < 0 || c[h] < best_t)) {
        best = m;
        best_t = c[h];
      }
    }
    ++head[static_cast<size_t>(best)];
    events.push_back({best, best_t});
  }
  return TimeTagStream(std::move(events), duration);
}

/// Counts coincidences between every pair of channels present in the stream.
/// Clicks within `window` seconds (|dt| <= window) pair up greedily, earliest
/// first, and each click joins at most one coincidence per channel pair.
/// `delay` shifts the higher channel of each pair; a delay much larger than
/// the window turns the counter into an accidental-coincidence monitor.
inline CoincidenceReport count_coincidences(const TimeTagStream& stream, double window, double delay = 0.0) {
  if (!(window > 0.0)) throw DomainError("count_coincidences: window must be positive");
  const auto& ev = stream.events();
  for (size_t i = 1; i < ev.size(); ++i) {
    if (ev[i].time_ps < ev[i - 1].time_ps) throw InputError("count_coincidences: stream is not sorted");
  }
  return detail::count_channel_clicks(detail::split_channels(stream), window, delay, stream.duration());
}

/// Analytic expected rates for a two-photon injection.
struct RateEstimate {
  /// Detected photons per second on each output channel. A bunched pair counts
  /// twice here but clicks once in generate_stream.
  std::vector<double> singles;
  /// Pair-correlated coincidences per second, keyed (a, b) with a < b.
  std::map<ChannelPair, double> coincidences;
  /// Uncorrelated coincidences, 2 window S_a S_b.
  std::map<ChannelPair, double> accidentals;
  /// Sum of coincidences over the four post-selected logical outcomes.
  std::optional<double> logical_rate;

  double coincidence(int a, int b) const { return coincidences.at(a < b ? ChannelPair{a, b} : ChannelPair{b, a}); }
};

/// pair_rate x survival_a x survival_b x (probability of the output pair).
/// Multipair overlays are left out; they add below one percent.
inline RateEstimate estimate_rates(const SourceModel& src, const ModeUnitary& u, std::pair<int, int> input_ports,
                                   const std::optional<LogicalEncoding>& encoding = std::nullopt) {
  src.validate();
  const int n = u.dim();
  const auto [in_a, in_b] = input_ports;
  if (in_a < 0 || in_b < 0 || in_a >= n || in_b >= n || in_a == in_b) {
    throw DimensionError("estimate_rates: input ports must be two distinct modes of the network");
  }
  RateEstimate est;
  est.singles.resize(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double routed = std::norm(u(m, in_a)) + std::norm(u(m, in_b));
    est.singles[static_cast<size_t>(m)] =
        (src.pair_rate + src.unpaired_rate) * routed * src.survival(m) + src.dark_count_rate;
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double p = two_photon_probability(u, in_a, in_b, a, b, src.indistinguishability);
      est.coincidences[{a, b}] = src.pair_rate * p * src.survival(a) * src.survival(b);
      est.accidentals[{a, b}] =
          2.0 * src.coincidence_window * est.singles[static_cast<size_t>(a)] * est.singles[static_cast<size_t>(b)];
    }
  }
  if (encoding) {
    encoding->validate(n);
    double r = 0.0;
    for (int out = 0; out < 4; ++out) {
      r += est.coincidence(encoding->output_control_mode(out), encoding->output_target_mode(out));
    }
    est.logical_rate = r;
  }
  return est;
}

struct SweepPoint {
  double phi = 0.0;
  ProbTable table;
  /// Some logical input produced no post-selected coincidences; its row is zero.
  bool degenerate = false;
  /// Post-selected coincidence counts, [input][output].
  std::array<std::array<int64_t, 4>, 4> counts{};
  /// Raw coincidence report per logical input (empty in the analytic limit).
  std::array<CoincidenceReport, 4> reports;
};

/// Simulated gate characterization: for each phase and logical input, run
/// the source for pairs_per_point / pair_rate seconds, count coincidences and
/// build the post-selected table. Every (phase, input) run draws from its own
/// seed, so results do not depend on evaluation order. With `analytic_limit`
/// the tables are the exact theory tables.
inline std::vector<SweepPoint> run_phase_sweep_experiment(const SourceModel& src, const ChipReflectivities& r,
                                                          const std::vector<double>& phis, double pairs_per_point,
                                                          uint64_t seed, bool analytic_limit = false) {
  src.validate();
  if (!(pairs_per_point > 0.0)) throw DomainError("run_phase_sweep_experiment: pairs_per_point must be positive");
  if (!analytic_limit && !(src.pair_rate > 0.0)) throw DomainError("run_phase_sweep_experiment: zero pair rate");
  const LogicalEncoding enc = LogicalEncoding::standard();
  std::vector<SweepPoint> points;
  points.reserve(phis.size());
  for (size_t k = 0; k < phis.size(); ++k) {
    SweepPoint pt;
    pt.phi = phis[k];
    const ModeUnitary u = compose(standard_chip(r, phis[k]));
    if (analytic_limit) {
      pt.table = prob_table(u, enc);
      points.push_back(std::move(pt));
      continue;
    }
    Eigen::Matrix4d raw = Eigen::Matrix4d::Zero();
    for (int in = 0; in < 4; ++in) {
      const std::pair<int, int> ports{enc.input_control_mode(in), enc.input_target_mode(in)};
      const double live = pairs_per_point / src.pair_rate;
      const auto clicks =
          detail::simulate_clicks(src, u, ports, detail::derive_seed(seed, k, static_cast<uint64_t>(in)), live);
      pt.reports[static_cast<size_t>(in)] = detail::count_channel_clicks(clicks, src.coincidence_window, 0.0, live);
      for (int out = 0; out < 4; ++out) {
        const int64_t c = pt.reports[static_cast<size_t>(in)].count(enc.output_control_mode(out),
                                                                   enc.output_target_mode(out));
        pt.counts[static_cast<size_t>(in)][static_cast<size_t>(out)] = c;
        raw(in, out) = static_cast<double>(c);
      }
    }
    pt.table.p = Eigen::Matrix4d::Zero();
    for (int in = 0; in < 4; ++in) {
      const double total = raw.row(in).sum();
      if (total > 0.0) {
        pt.table.p.row(in) = raw.row(in) / total;
      } else {
        pt.degenerate = true;
      }
    }
    points.push_back(std::move(pt));
  }
  return points;
}

}  // namespace fockchip
