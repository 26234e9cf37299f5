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

// Post-selected two-qubit gate analysis over the dual-rail logical subspace.
//
// Logical basis order is (|00>, |01>, |10>, |11>) with the control qubit as
// the left factor; index = 2 * control + target. GateMatrix entries are
// indexed (output, input), matching the ModeUnitary convention.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "fockchip/chip.hpp"
#include "fockchip/errors.hpp"
#include "fockchip/fock.hpp"

namespace fockchip {

using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

/// Dual-rail mapping of the control and target qubits onto waveguides.
/// When target_swapped is set the detected target rails are read with their
/// labels exchanged (the sigma_x rail permutation of the CNOT-style layout).
struct LogicalEncoding {
  std::array<int, 2> control_modes{kC0, kC1};
  std::array<int, 2> target_modes{kT0, kT1};
  bool target_swapped = true;

  static LogicalEncoding standard() { return {}; }

  /// Modes 0..3 as C0, C1, T0, T1 with no rail permutation.
  static LogicalEncoding trivial() { return {{0, 1}, {2, 3}, false}; }

  void validate(int mode_count) const {
    const std::array<int, 4> m{control_modes[0], control_modes[1], target_modes[0], target_modes[1]};
    std::set<int> distinct(m.begin(), m.end());
    if (distinct.size() != 4) throw DimensionError("LogicalEncoding: mode indices must be distinct");
    for (int k : m) {
      if (k < 0 || k >= mode_count) throw DimensionError("LogicalEncoding: mode index outside the unitary");
    }
  }

  int input_control_mode(int logical) const { return control_modes[static_cast<size_t>(logical >> 1)]; }
  int input_target_mode(int logical) const { return target_modes[static_cast<size_t>(logical & 1)]; }
  int output_control_mode(int logical) const { return input_control_mode(logical); }
  int output_target_mode(int logical) const {
    const int t = logical & 1;
    return target_modes[static_cast<size_t>(target_swapped ? 1 - t : t)];
  }

  FockState input_state(int logical, int mode_count) const {
    return FockState::from_photon_modes(mode_count, {input_control_mode(logical), input_target_mode(logical)});
  }
  FockState output_state(int logical, int mode_count) const {
    return FockState::from_photon_modes(mode_count, {output_control_mode(logical), output_target_mode(logical)});
  }
};

inline const char* logical_label(int logical) {
  static constexpr std::array<const char*, 4> labels{"00", "01", "10", "11"};
  return labels.at(static_cast<size_t>(logical));
}

struct GateMatrix {
  Matrix4c entries = Matrix4c::Identity();
  /// Amplitude scale: entries / prefactor is as close to unitary as possible.
  double prefactor = 1.0;
  /// Max-entry distance of entries / prefactor from its closest unitary.
  double unitary_distance = 0.0;

  Matrix4c normalized() const { return entries / prefactor; }
};

/// Closest-unitary scale and distance via the polar decomposition.
inline GateMatrix make_gate_matrix(const Matrix4c& entries) {
  Eigen::JacobiSVD<Matrix4c> svd(entries, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector4d s = svd.singularValues();
  GateMatrix g;
  g.entries = entries;
  if (s.sum() <= 0.0) {
    g.prefactor = 0.0;
    g.unitary_distance = std::numeric_limits<double>::infinity();
    return g;
  }
  // argmin_p || entries / p - W ||_F for the polar factor W.
  g.prefactor = s.squaredNorm() / s.sum();
  const Matrix4c polar = svd.matrixU() * svd.matrixV().adjoint();
  g.unitary_distance = (entries / g.prefactor - polar).cwiseAbs().maxCoeff();
  return g;
}

/// The ideal tunable gate U(phi), prefactor 1.
inline GateMatrix ideal_gate(double phi) {
  const double c = std::cos(phi / 2.0);
  const double s = std::sin(phi / 2.0);
  const Complex i{0.0, 1.0};
  Matrix4c m;
  m << i * c, i * s, 0.0, 0.0,
       -i * s, i * c, 0.0, 0.0,
       0.0, 0.0, -s, c,
       0.0, 0.0, -c, -s;
  return GateMatrix{m, 1.0, 0.0};
}

/// Logical block of a multimode unitary: entry (out, in) is the two-photon
/// amplitude between the corresponding Fock states.
inline GateMatrix extract_logical_gate(const ModeUnitary& u, const LogicalEncoding& enc) {
  enc.validate(u.dim());
  Matrix4c m;
  for (int in = 0; in < 4; ++in) {
    const FockState s_in = enc.input_state(in, u.dim());
    for (int out = 0; out < 4; ++out) {
      m(out, in) = transition_amplitude(u, s_in, enc.output_state(out, u.dim()));
    }
  }
  return make_gate_matrix(m);
}

/// Probability that a logical input ends in the post-selected subspace.
inline double success_probability(const ModeUnitary& u, const LogicalEncoding& enc, int logical_input) {
  if (logical_input < 0 || logical_input > 3) throw DomainError("success_probability: logical input out of range");
  enc.validate(u.dim());
  const FockState s_in = enc.input_state(logical_input, u.dim());
  double p = 0.0;
  for (int out = 0; out < 4; ++out) p += std::norm(transition_amplitude(u, s_in, enc.output_state(out, u.dim())));
  return p;
}

/// Conditional output probabilities p(input, output).
struct ProbTable {
  Eigen::Matrix4d p = Eigen::Matrix4d::Identity();

  double operator()(int input, int output) const { return p(input, output); }
  friend bool operator==(const ProbTable&, const ProbTable&) = default;
};

/// |G(out, in)|^2 without renormalization.
inline Eigen::Matrix4d raw_probabilities(const Matrix4c& entries) {
  return entries.cwiseAbs2().transpose();
}

/// Normalizes each input row to one; throws if a row is empty.
inline ProbTable normalize_rows(const Eigen::Matrix4d& raw) {
  ProbTable t;
  for (int in = 0; in < 4; ++in) {
    const double total = raw.row(in).sum();
    if (!(total > 0.0)) {
      throw DegenerateError(std::string("prob_table: zero post-selected probability for input |") +
                            logical_label(in) + ">");
    }
    t.p.row(in) = raw.row(in) / total;
  }
  return t;
}

inline ProbTable prob_table(const GateMatrix& g) { return normalize_rows(raw_probabilities(g.entries)); }

inline ProbTable prob_table(const ModeUnitary& u, const LogicalEncoding& enc) {
  return prob_table(extract_logical_gate(u, enc));
}

/// (sum_kl sqrt(I_kl M_kl))^2 / 16.
inline double similarity(const ProbTable& ideal, const ProbTable& measured) {
  if ((ideal.p.array() < 0.0).any() || (measured.p.array() < 0.0).any()) {
    throw DomainError("similarity: negative probability");
  }
  const double s = (ideal.p.array() * measured.p.array()).sqrt().sum();
  return s * s / 16.0;
}

/// True iff max |a - e^{i theta} b| <= tol, with theta taken from the ratio of
/// the entries where b is largest.
inline bool equal_up_to_global_phase(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("equal_up_to_global_phase: shape mismatch");
  if (a.size() == 0) return true;
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  Complex phase{1.0, 0.0};
  if (std::abs(b(r, c)) > 0.0 && std::abs(a(r, c)) > 0.0) {
    phase = a(r, c) / b(r, c);
    phase /= std::abs(phase);
  }
  return (a - phase * b).cwiseAbs().maxCoeff() <= tol;
}

inline bool equal_up_to_global_phase(const GateMatrix& a, const GateMatrix& b, double tol) {
  return equal_up_to_global_phase(ComplexMatrix(a.entries), ComplexMatrix(b.entries), tol);
}

/// Concurrence |<psi*| sigma_y (x) sigma_y |psi>| of the normalized output of
/// gate / prefactor acting on a normalized input.
inline double entanglement_of_output(const GateMatrix& gate, const Vector4c& input) {
  if (std::abs(input.norm() - 1.0) > 1e-9) throw DomainError("entanglement_of_output: input is not normalized");
  Vector4c psi = gate.normalized() * input;
  const double n = psi.norm();
  if (!(n > 0.0)) throw DomainError("entanglement_of_output: gate annihilates the input");
  psi /= n;
  Eigen::Matrix2cd sy;
  sy << 0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0;
  Matrix4c yy;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) yy.block<2, 2>(2 * a, 2 * b) = sy(a, b) * sy;
  }
  // <psi*| is the transpose of |psi>, not its adjoint.
  return std::abs((psi.transpose() * yy * psi)(0, 0));
}

/// Product state (a|0> + b|1>) (x) (c|0> + d|1>) in the logical basis.
inline Vector4c product_state(Complex a, Complex b, Complex c, Complex d) {
  return Vector4c{a * c, a * d, b * c, b * d};
}

}  // namespace fockchip
