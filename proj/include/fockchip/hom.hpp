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

// Hong-Ou-Mandel interference: the visibility law, partially distinguishable
// two-photon coincidences, filtered-wavepacket dip shapes and dip fitting.
//
// Distinguishability is a single overlap x in [0, 1]; x^2 = |<psi_1|psi_2>|^2
// weighs the bosonic (indistinguishable) term against the classical one.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fockchip/errors.hpp"
#include "fockchip/fock.hpp"
#include "fockchip/least_squares.hpp"

namespace fockchip {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Dip visibility of a coupler with reflectivity eta: 1 - (2eta-1)^2 / (eta^2 + (1-eta)^2).
inline double visibility(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("visibility: reflectivity outside [0, 1]");
  if (eta == 0.0 || eta == 1.0) throw DegenerateError("visibility: photons never meet at eta = 0 or 1");
  const double d = 2.0 * eta - 1.0;
  return 1.0 - d * d / (eta * eta + (eta - 1.0) * (eta - 1.0));
}

/// Probability of one photon in each output of a coupler fed one photon per input.
inline double coincidence_probability(double eta, double overlap) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("coincidence_probability: reflectivity outside [0, 1]");
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw DomainError("coincidence_probability: overlap outside [0, 1]");
  const double x2 = overlap * overlap;
  const double d = 2.0 * eta - 1.0;
  return (1.0 - x2) * (eta * eta + (1.0 - eta) * (1.0 - eta)) + x2 * d * d;
}

/// Joint detection probability for photons entering modes in_a != in_b and
/// leaving in out_a, out_b (equal outputs allowed) of a multimode network,
/// with squared overlap `indistinguishability`.
inline double two_photon_probability(const ModeUnitary& u, int in_a, int in_b, int out_a, int out_b,
                                     double indistinguishability) {
  if (!(indistinguishability >= 0.0 && indistinguishability <= 1.0)) {
    throw DomainError("two_photon_probability: indistinguishability outside [0, 1]");
  }
  if (in_a == in_b) throw DomainError("two_photon_probability: inputs must be distinct modes");
  const int n = u.dim();
  for (int m : {in_a, in_b, out_a, out_b}) {
    if (m < 0 || m >= n) throw DimensionError("two_photon_probability: mode out of range");
  }
  const FockState in = FockState::from_photon_modes(n, {in_a, in_b});
  const FockState out = FockState::from_photon_modes(n, {out_a, out_b});
  const double bosonic = std::norm(transition_amplitude(u, in, out));
  double classical = std::norm(u(out_a, in_a) * u(out_b, in_b));
  if (out_a != out_b) classical += std::norm(u(out_a, in_b) * u(out_b, in_a));
  return indistinguishability * bosonic + (1.0 - indistinguishability) * classical;
}

enum class FilterShape { gaussian, rect, gaussian_times_rect };

inline const char* to_string(FilterShape s) {
  switch (s) {
    case FilterShape::gaussian:
      return "gaussian";
    case FilterShape::rect:
      return "rect";
    default:
      return "gaussian_times_rect";
  }
}

inline FilterShape filter_shape_from_string(const std::string& s) {
  if (s == "gaussian") return FilterShape::gaussian;
  if (s == "rect") return FilterShape::rect;
  if (s == "gaussian_times_rect") return FilterShape::gaussian_times_rect;
  throw InputError("unknown filter shape '" + s + "'");
}

/// Photon wavepacket set by an interference filter.
struct WavepacketModel {
  double center_wavelength = 810e-9;
  double filter_fwhm = 2e-9;
  FilterShape shape = FilterShape::gaussian;

  void validate() const {
    if (!(center_wavelength > 0.0) || !(filter_fwhm > 0.0)) {
      throw DomainError("WavepacketModel: wavelength and bandwidth must be positive");
    }
  }
  double bandwidth_hz() const { return kSpeedOfLight * filter_fwhm / (center_wavelength * center_wavelength); }
  /// 1 / bandwidth.
  double coherence_time() const { return 1.0 / bandwidth_hz(); }
  /// lambda^2 / delta_lambda, the path-length scale of the dip.
  double coherence_length() const { return center_wavelength * center_wavelength / filter_fwhm; }
};

namespace detail {

// Gaussian spectrum with FWHM 1: |FT|^2 = exp(-pi^2 u^2 / (2 ln 2)).
inline constexpr double kGaussK = std::numbers::pi * std::numbers::pi / (2.0 * std::numbers::ln2);

inline double sinc_pi(double u) {
  const double a = std::numbers::pi * u;
  return std::abs(a) < 1e-8 ? 1.0 - a * a / 6.0 : std::sin(a) / a;
}

inline double sinc_pi_derivative(double u) {
  const double a = std::numbers::pi * u;
  if (std::abs(a) < 1e-6) return -std::numbers::pi * a / 3.0;
  return (a * std::cos(a) - std::sin(a)) / (std::numbers::pi * u * u);
}

}  // namespace detail

/// Dip profile g(u) for delay u in units of the coherence time; g(0) = 1.
inline double dip_shape(FilterShape shape, double u) {
  const double gauss = std::exp(-detail::kGaussK * u * u);
  const double s = detail::sinc_pi(u);
  switch (shape) {
    case FilterShape::gaussian:
      return gauss;
    case FilterShape::rect:
      return s * s;
    default:
      return gauss * s * s;
  }
}

inline double dip_shape_derivative(FilterShape shape, double u) {
  const double gauss = std::exp(-detail::kGaussK * u * u);
  const double dgauss = -2.0 * detail::kGaussK * u * gauss;
  const double s = detail::sinc_pi(u);
  const double ds = detail::sinc_pi_derivative(u);
  switch (shape) {
    case FilterShape::gaussian:
      return dgauss;
    case FilterShape::rect:
      return 2.0 * s * ds;
    default:
      return dgauss * s * s + gauss * 2.0 * s * ds;
  }
}

/// Squared overlap of a wavepacket with its copy delayed by tau seconds.
inline double overlap(const WavepacketModel& model, double tau) {
  model.validate();
  return dip_shape(model.shape, tau / model.coherence_time());
}

/// Coincidence rate across a coupler versus path delay (meters):
/// R0 * P(eta, sqrt(V0 overlap)) / P(eta, 0).
inline std::vector<double> dip_curve(double eta, const WavepacketModel& model, double source_overlap,
                                     double baseline, const std::vector<double>& delays_m) {
  if (!(source_overlap >= 0.0 && source_overlap <= 1.0)) throw DomainError("dip_curve: V0 outside [0, 1]");
  if (!(baseline > 0.0)) throw DomainError("dip_curve: baseline must be positive");
  const double classical = coincidence_probability(eta, 0.0);
  if (!(classical > 0.0)) throw DegenerateError("dip_curve: no coincidence baseline");
  std::vector<double> rates;
  rates.reserve(delays_m.size());
  for (double d : delays_m) {
    const double x = std::sqrt(source_overlap * overlap(model, d / kSpeedOfLight));
    rates.push_back(baseline * coincidence_probability(eta, std::min(x, 1.0)) / classical);
  }
  return rates;
}

struct DipSample {
  double delay_m = 0.0;
  double rate = 0.0;
};

struct DipFit {
  double visibility = 0.0;
  /// Coherence length of the fitted profile, meters of path delay.
  double width = 0.0;
  double center = 0.0;
  double baseline_rate = 0.0;
  double residual = 0.0;
  double visibility_uncertainty = 0.0;
  double width_uncertainty = 0.0;
  /// Set when the data do not pin down the width (flat or nearly flat scans).
  bool width_flagged = false;
  FilterShape shape = FilterShape::gaussian;
};

/// Least-squares fit of R0 (1 - V g((d - c) / w)) over (R0, V, w, c).
inline DipFit fit_dip(std::vector<DipSample> samples, FilterShape shape = FilterShape::gaussian) {
  if (samples.size() < 6) throw FitError("fit_dip: need at least 6 samples");
  for (const auto& s : samples) {
    if (!std::isfinite(s.delay_m) || !std::isfinite(s.rate)) throw FitError("fit_dip: non-finite sample");
  }
  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.delay_m < b.delay_m; });
  const size_t n = samples.size();
  const double scan = samples.back().delay_m - samples.front().delay_m;
  if (!(scan > 0.0)) throw FitError("fit_dip: samples do not span a delay range");

  // Baseline from the outer fifth of the scan on each side.
  const size_t edge = std::max<size_t>(1, n / 5);
  double r0 = 0.0;
  for (size_t i = 0; i < edge; ++i) r0 += samples[i].rate + samples[n - 1 - i].rate;
  r0 /= static_cast<double>(2 * edge);
  const auto min_it =
      std::min_element(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.rate < b.rate; });
  double mean = 0.0;
  for (const auto& s : samples) mean += s.rate;
  mean /= static_cast<double>(n);

  DipFit fit;
  fit.shape = shape;
  const double spacing = scan / static_cast<double>(n - 1);
  const double v0 = r0 > 0.0 ? 1.0 - min_it->rate / r0 : 0.0;
  if (!(v0 > 1e-12)) {
    fit.baseline_rate = mean;
    fit.center = min_it->delay_m;
    fit.width = spacing;
    double ss = 0.0;
    for (const auto& s : samples) ss += (s.rate - mean) * (s.rate - mean);
    fit.residual = std::sqrt(ss);
    fit.width_uncertainty = std::numeric_limits<double>::infinity();
    fit.width_flagged = true;
    return fit;
  }

  // Width seed from the half-depth crossing.
  const double half = r0 * (1.0 - v0 / 2.0);
  double lo = min_it->delay_m, hi = min_it->delay_m;
  for (const auto& s : samples) {
    if (s.rate <= half) {
      lo = std::min(lo, s.delay_m);
      hi = std::max(hi, s.delay_m);
    }
  }
  const double half_width_u = shape == FilterShape::rect ? 0.4429 : 0.3120;
  const double w0 = std::max(hi - lo + spacing, spacing) / (2.0 * half_width_u);

  Eigen::VectorXd x(4);
  x << r0, v0, w0, min_it->delay_m;
  const int m = static_cast<int>(n);
  auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    for (int i = 0; i < m; ++i) {
      const double u = (samples[static_cast<size_t>(i)].delay_m - p(3)) / p(2);
      r(i) = p(0) * (1.0 - p(1) * dip_shape(shape, u)) - samples[static_cast<size_t>(i)].rate;
    }
  };
  auto jacobian = [&](const Eigen::VectorXd& p, Eigen::MatrixXd& j) {
    for (int i = 0; i < m; ++i) {
      const double u = (samples[static_cast<size_t>(i)].delay_m - p(3)) / p(2);
      const double g = dip_shape(shape, u);
      const double dg = dip_shape_derivative(shape, u);
      j(i, 0) = 1.0 - p(1) * g;
      j(i, 1) = -p(0) * g;
      j(i, 2) = p(0) * p(1) * dg * u / p(2);
      j(i, 3) = p(0) * p(1) * dg / p(2);
    }
  };
  auto lm = detail::least_squares(m, x, residual, jacobian, 4000);
  if (!lm.converged) {
    throw FitError("fit_dip: no convergence after " + std::to_string(lm.evaluations) +
                   " evaluations (status " + std::to_string(static_cast<int>(lm.status)) +
                   ", residual " + std::to_string(lm.residual_norm) + ")");
  }
  fit.baseline_rate = lm.params(0);
  fit.visibility = lm.params(1);
  fit.width = std::abs(lm.params(2));
  fit.center = lm.params(3);
  fit.residual = lm.residual_norm;

  Eigen::MatrixXd jac(m, 4);
  jacobian(lm.params, jac);
  const Eigen::Matrix4d jtj = jac.transpose() * jac;
  const double dof = std::max(1, m - 4);
  const double s2 = lm.residual_norm * lm.residual_norm / dof;
  Eigen::FullPivLU<Eigen::Matrix4d> lu(jtj);
  if (lu.isInvertible() && lu.rcond() > 1e-14) {
    const Eigen::Matrix4d cov = s2 * lu.inverse();
    fit.visibility_uncertainty = std::sqrt(std::max(0.0, cov(1, 1)));
    fit.width_uncertainty = std::sqrt(std::max(0.0, cov(2, 2)));
  } else {
    fit.visibility_uncertainty = std::numeric_limits<double>::infinity();
    fit.width_uncertainty = std::numeric_limits<double>::infinity();
  }
  fit.width_flagged = !(fit.width_uncertainty <= 0.5 * fit.width) || fit.width > 10.0 * scan;
  if (!(fit.visibility >= 0.0 && fit.visibility <= 1.0)) {
    fit.width_flagged = true;
    fit.visibility = std::clamp(fit.visibility, 0.0, 1.0);
  }
  return fit;
}

}  // namespace fockchip
