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

// Optical element lists, the composed interferometer unitary, and the
// thermal phase shifter's voltage calibration.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "fockchip/errors.hpp"
#include "fockchip/fock.hpp"
#include "fockchip/least_squares.hpp"

namespace fockchip {

/// Waveguide order of the six-mode chip, bottom to top.
enum ChipMode : int { kVA = 0, kC0 = 1, kC1 = 2, kT0 = 3, kT1 = 4, kVB = 5 };
inline constexpr int kChipModes = 6;

inline const char* chip_mode_name(int mode) {
  static constexpr std::array<const char*, kChipModes> names{"VA", "C0", "C1", "T0", "T1", "VB"};
  return (mode >= 0 && mode < kChipModes) ? names[static_cast<size_t>(mode)] : "?";
}

/// Directional coupler with power reflectivity (same-waveguide fraction) eta:
/// [[sqrt(eta), i sqrt(1-eta)], [i sqrt(1-eta), sqrt(eta)]].
inline ModeUnitary coupler_unitary(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("coupler_unitary: reflectivity outside [0, 1]");
  const double r = std::sqrt(eta);
  const double t = std::sqrt(1.0 - eta);
  ComplexMatrix m(2, 2);
  m << Complex{r, 0.0}, Complex{0.0, t}, Complex{0.0, t}, Complex{r, 0.0};
  return ModeUnitary(std::move(m), 1e-12);
}

struct CouplerElement {
  int mode_a = 0;
  int mode_b = 1;
  double eta = 0.5;
  friend bool operator==(const CouplerElement&, const CouplerElement&) = default;
};

/// Phase e^{i phi} on a single mode. phi is kept unwrapped.
struct PhaseElement {
  int mode = 0;
  double phi = 0.0;
  friend bool operator==(const PhaseElement&, const PhaseElement&) = default;
};

using OpticalElement = std::variant<CouplerElement, PhaseElement>;

namespace detail {

inline void validate_element(const OpticalElement& element, int mode_count) {
  auto in_range = [&](int m) { return m >= 0 && m < mode_count; };
  if (const auto* c = std::get_if<CouplerElement>(&element)) {
    if (!in_range(c->mode_a) || !in_range(c->mode_b)) throw DimensionError("coupler mode index out of range");
    if (c->mode_a == c->mode_b) throw DimensionError("coupler must join two distinct modes");
    if (!(c->eta >= 0.0 && c->eta <= 1.0)) throw DomainError("coupler reflectivity outside [0, 1]");
  } else {
    const auto& p = std::get<PhaseElement>(element);
    if (!in_range(p.mode)) throw DimensionError("phase mode index out of range");
    if (!std::isfinite(p.phi)) throw DomainError("phase must be finite");
  }
}

}  // namespace detail

/// Ordered optical elements; the first element is met first by the light.
class CircuitSpec {
 public:
  explicit CircuitSpec(int mode_count, std::vector<OpticalElement> elements = {}) : mode_count_(mode_count) {
    if (mode_count < 1) throw DimensionError("CircuitSpec: need at least one mode");
    for (auto& e : elements) add(std::move(e));
  }

  CircuitSpec& add(OpticalElement element) {
    detail::validate_element(element, mode_count_);
    elements_.push_back(std::move(element));
    return *this;
  }
  CircuitSpec& add_coupler(int a, int b, double eta) { return add(CouplerElement{a, b, eta}); }
  CircuitSpec& add_phase(int mode, double phi) { return add(PhaseElement{mode, phi}); }

  int mode_count() const { return mode_count_; }
  const std::vector<OpticalElement>& elements() const { return elements_; }

  friend bool operator==(const CircuitSpec&, const CircuitSpec&) = default;

 private:
  int mode_count_;
  std::vector<OpticalElement> elements_;
};

/// Full mode_count x mode_count unitary of a single element.
inline ModeUnitary embed(const OpticalElement& element, int mode_count) {
  detail::validate_element(element, mode_count);
  ComplexMatrix m = ComplexMatrix::Identity(mode_count, mode_count);
  if (const auto* c = std::get_if<CouplerElement>(&element)) {
    const ModeUnitary block = coupler_unitary(c->eta);
    const std::array<int, 2> idx{c->mode_a, c->mode_b};
    for (int r = 0; r < 2; ++r) {
      for (int k = 0; k < 2; ++k) m(idx[r], idx[k]) = block(r, k);
    }
  } else {
    const auto& p = std::get<PhaseElement>(element);
    m(p.mode, p.mode) = std::polar(1.0, p.phi);
  }
  return ModeUnitary(std::move(m));
}

/// Product of the embedded elements, first-listed applied first.
inline ModeUnitary compose(const CircuitSpec& spec) {
  const int n = spec.mode_count();
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  for (const auto& element : spec.elements()) {
    if (const auto* c = std::get_if<CouplerElement>(&element)) {
      const ModeUnitary block = coupler_unitary(c->eta);
      const Eigen::RowVectorXcd row_a = u.row(c->mode_a);
      const Eigen::RowVectorXcd row_b = u.row(c->mode_b);
      u.row(c->mode_a) = block(0, 0) * row_a + block(0, 1) * row_b;
      u.row(c->mode_b) = block(1, 0) * row_a + block(1, 1) * row_b;
    } else {
      const auto& p = std::get<PhaseElement>(element);
      u.row(p.mode) *= std::polar(1.0, p.phi);
    }
  }
  return ModeUnitary(std::move(u));
}

/// Coupler reflectivities of the chip, numbered as on the device drawing.
/// eta1: central (C1,T0); eta2, eta3: target couplers (T0,T1);
/// eta4: (T1,VB); eta5: bottom (C0,VA).
struct ChipReflectivities {
  double eta1 = 1.0 / 3.0;
  double eta2 = 0.5;
  double eta3 = 0.5;
  double eta4 = 1.0 / 3.0;
  double eta5 = 1.0 / 3.0;
  /// One-sigma uncertainties, reporting only.
  std::array<double, 5> uncertainty{};

  static ChipReflectivities design() { return {}; }

  static ChipReflectivities measured() {
    return {0.324, 0.435, 0.469, 0.317, 0.298, {0.008, 0.015, 0.009, 0.007, 0.012}};
  }

  std::array<double, 5> values() const { return {eta1, eta2, eta3, eta4, eta5}; }

  static ChipReflectivities from_values(const std::array<double, 5>& v) {
    for (double e : v) {
      if (!(e >= 0.0 && e <= 1.0)) throw DomainError("ChipReflectivities: value outside [0, 1]");
    }
    return {v[0], v[1], v[2], v[3], v[4], {}};
  }
};

/// Mode that carries the tunable phase. With e^{+i phi} on T1 the
/// post-selected gate is U(phi) with the target rails read out swapped.
inline constexpr int kPhaseMode = kT1;

/// The reconfigurable two-qubit chip as an element list over modes
/// (VA, C0, C1, T0, T1, VB).
inline CircuitSpec standard_chip(const ChipReflectivities& r, double phi) {
  CircuitSpec spec(kChipModes);
  spec.add_coupler(kT0, kT1, r.eta2)
      .add_phase(kPhaseMode, phi)
      .add_coupler(kC1, kT0, r.eta1)
      .add_coupler(kC0, kVA, r.eta5)
      .add_coupler(kT1, kVB, r.eta4)
      .add_coupler(kT0, kT1, r.eta3);
  return spec;
}

/// Thermal phase shifter: phi(v) = phi0 + alpha v^2 on [0, v_max].
struct PhaseCalibration {
  double phi0 = 0.0;
  double alpha = 2.0 * std::numbers::pi / 49.0;
  double v_max = 7.0;
};

inline double phase_from_voltage(const PhaseCalibration& c, double volts) {
  if (!(c.v_max > 0.0)) throw DomainError("phase_from_voltage: calibration has no voltage range");
  if (!(volts >= 0.0 && volts <= c.v_max)) throw DomainError("phase_from_voltage: voltage outside [0, v_max]");
  return c.phi0 + c.alpha * volts * volts;
}

struct CalibrationSample {
  double volts = 0.0;
  double signal = 0.0;
};

/// Result of fitting signal = offset + amplitude cos(phi0 + alpha v^2).
struct CalibrationFit {
  PhaseCalibration calibration;
  double offset = 0.0;
  double amplitude = 0.0;
  double residual_norm = 0.0;
};

namespace detail {

struct LinearFringeFit {
  Eigen::Vector3d coef;  // offset, c, s with signal ~ offset + c cos(alpha v^2) + s sin(alpha v^2)
  double sse = 0.0;
};

inline LinearFringeFit linear_fringe_fit(const std::vector<CalibrationSample>& samples, double alpha) {
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = samples[static_cast<size_t>(i)].volts;
    a(i, 0) = 1.0;
    a(i, 1) = std::cos(alpha * v * v);
    a(i, 2) = std::sin(alpha * v * v);
    y(i) = samples[static_cast<size_t>(i)].signal;
  }
  LinearFringeFit fit;
  fit.coef = a.colPivHouseholderQr().solve(y);
  fit.sse = (a * fit.coef - y).squaredNorm();
  return fit;
}

}  // namespace detail

/// Least-squares fit of the phase/voltage relation from a fringe scan.
/// A dense scan over alpha (up to the sampling limit) seeds Levenberg-Marquardt
/// over (offset, amplitude, phi0, alpha). The result has amplitude > 0,
/// alpha >= 0 and phi0 in (-pi, pi].
inline CalibrationFit fit_calibration(std::vector<CalibrationSample> samples) {
  using std::numbers::pi;
  if (samples.size() < 4) throw FitError("fit_calibration: need at least 4 samples");
  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.volts < b.volts; });
  for (const auto& s : samples) {
    if (!std::isfinite(s.volts) || !std::isfinite(s.signal) || s.volts < 0.0) {
      throw FitError("fit_calibration: samples must be finite with non-negative voltage");
    }
  }
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                            [](const auto& a, const auto& b) { return a.signal < b.signal; });
  const double span = hi->signal - lo->signal;
  double scale = 0.0;
  for (const auto& s : samples) scale = std::max(scale, std::abs(s.signal));
  if (!(span > 1e-9 * std::max(scale, 1.0))) throw FitError("fit_calibration: constant signal, no fringe");

  double max_gap = 0.0;
  for (size_t i = 1; i < samples.size(); ++i) {
    max_gap = std::max(max_gap, samples[i].volts * samples[i].volts - samples[i - 1].volts * samples[i - 1].volts);
  }
  const double v_max = samples.back().volts;
  if (!(max_gap > 0.0)) throw FitError("fit_calibration: samples do not span a voltage range");

  // Phase advance between neighbouring samples must stay below pi.
  const double alpha_max = pi / max_gap;
  constexpr int kGrid = 4000;
  double best_alpha = 0.0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kGrid; ++k) {
    const double alpha = alpha_max * k / kGrid;
    const double sse = detail::linear_fringe_fit(samples, alpha).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_alpha = alpha;
    }
  }
  const auto seed = detail::linear_fringe_fit(samples, best_alpha);
  Eigen::VectorXd x(4);
  x << seed.coef(0), std::hypot(seed.coef(1), seed.coef(2)), std::atan2(-seed.coef(2), seed.coef(1)), best_alpha;
  if (!(x(1) > 0.0)) throw FitError("fit_calibration: no fringe amplitude");

  const int n = static_cast<int>(samples.size());
  auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    for (int i = 0; i < n; ++i) {
      const double v = samples[static_cast<size_t>(i)].volts;
      r(i) = p(0) + p(1) * std::cos(p(2) + p(3) * v * v) - samples[static_cast<size_t>(i)].signal;
    }
  };
  auto jacobian = [&](const Eigen::VectorXd& p, Eigen::MatrixXd& j) {
    for (int i = 0; i < n; ++i) {
      const double v = samples[static_cast<size_t>(i)].volts;
      const double arg = p(2) + p(3) * v * v;
      j(i, 0) = 1.0;
      j(i, 1) = std::cos(arg);
      j(i, 2) = -p(1) * std::sin(arg);
      j(i, 3) = -p(1) * std::sin(arg) * v * v;
    }
  };
  auto lm = detail::least_squares(n, x, residual, jacobian);
  if (!lm.converged) throw FitError("fit_calibration: Levenberg-Marquardt did not converge");

  double offset = lm.params(0), amplitude = lm.params(1), phi0 = lm.params(2), alpha = lm.params(3);
  if (amplitude < 0.0) {
    amplitude = -amplitude;
    phi0 += pi;
  }
  if (alpha < 0.0) {
    alpha = -alpha;
    phi0 = -phi0;
  }
  // (-pi, pi] keeps a zero offset from flipping to 2 pi on a rounding error.
  phi0 = std::remainder(phi0, 2.0 * pi);
  if (phi0 == -pi) phi0 = pi;
  if (!std::isfinite(alpha) || !(amplitude > 0.0)) throw FitError("fit_calibration: degenerate fit");

  return CalibrationFit{PhaseCalibration{phi0, alpha, v_max}, offset, amplitude, lm.residual_norm};
}

}  // namespace fockchip
