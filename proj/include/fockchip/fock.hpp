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

// Fock-state bookkeeping and multi-photon transition amplitudes.
//
// Amplitude convention used everywhere in fockchip: a ModeUnitary U maps input
// creation operators to output ones as a_in^dag -> sum_out U(out, in) a_out^dag.
// Columns index input modes, rows index output modes.

#include <bit>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fockchip/errors.hpp"

namespace fockchip {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Photon occupation numbers over a fixed set of modes.
class FockState {
 public:
  FockState() = default;

  explicit FockState(std::vector<int> occupations) : occupations_(std::move(occupations)) {
    for (int n : occupations_) {
      if (n < 0) throw DomainError("FockState: negative occupation");
    }
  }

  FockState(std::initializer_list<int> occupations) : FockState(std::vector<int>(occupations)) {}

  /// One photon in each listed mode (repeats allowed) over `mode_count` modes.
  static FockState from_photon_modes(int mode_count, std::initializer_list<int> photon_modes) {
    std::vector<int> occ(static_cast<size_t>(mode_count), 0);
    for (int m : photon_modes) {
      if (m < 0 || m >= mode_count) throw DimensionError("FockState: photon mode out of range");
      ++occ[static_cast<size_t>(m)];
    }
    return FockState(std::move(occ));
  }

  int modes() const { return static_cast<int>(occupations_.size()); }
  int total_photons() const { return std::accumulate(occupations_.begin(), occupations_.end(), 0); }
  int operator[](int mode) const { return occupations_.at(static_cast<size_t>(mode)); }
  const std::vector<int>& occupations() const { return occupations_; }

  /// Mode index of every photon, ascending, with multiplicity.
  std::vector<int> photon_modes() const {
    std::vector<int> out;
    for (int m = 0; m < modes(); ++m) {
      for (int k = 0; k < occupations_[static_cast<size_t>(m)]; ++k) out.push_back(m);
    }
    return out;
  }

  std::string to_string() const {
    std::string s = "(";
    for (size_t i = 0; i < occupations_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(occupations_[i]);
    }
    return s + ")";
  }

  friend bool operator==(const FockState&, const FockState&) = default;
  friend auto operator<=>(const FockState&, const FockState&) = default;

 private:
  std::vector<int> occupations_;
};

/// Square unitary over optical modes. Construction checks U^dag U = I.
class ModeUnitary {
 public:
  static constexpr double kUnitarityTolerance = 1e-10;

  explicit ModeUnitary(ComplexMatrix m, double tolerance = kUnitarityTolerance) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DimensionError("ModeUnitary: matrix is not square");
    const double dev = unitarity_deviation(m_);
    if (!(dev <= tolerance)) {
      throw DomainError("ModeUnitary: matrix is not unitary (max deviation " + std::to_string(dev) + ")");
    }
  }

  static ModeUnitary identity(int dim) { return ModeUnitary(ComplexMatrix::Identity(dim, dim)); }

  /// Max-entry deviation of m^dag m from the identity.
  static double unitarity_deviation(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    return (m.adjoint() * m - ComplexMatrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  Complex operator()(int out, int in) const { return m_(out, in); }
  const ComplexMatrix& matrix() const { return m_; }

  /// `a * b` applies b first, then a.
  friend ModeUnitary operator*(const ModeUnitary& a, const ModeUnitary& b) {
    if (a.dim() != b.dim()) throw DimensionError("ModeUnitary: dimension mismatch in product");
    return ModeUnitary(a.m_ * b.m_, 1e-9);
  }

 private:
  ComplexMatrix m_;
};

namespace detail {

inline Complex permanent_small(const ComplexMatrix& m) {
  switch (m.rows()) {
    case 0:
      return 1.0;
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) + m(0, 1) * m(1, 0);
    default:
      return m(0, 0) * (m(1, 1) * m(2, 2) + m(1, 2) * m(2, 1)) +
             m(0, 1) * (m(1, 0) * m(2, 2) + m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) + m(1, 1) * m(2, 0));
  }
}

// Ryser inclusion-exclusion with Gray-code column updates, O(2^n n).
inline Complex permanent_ryser(const ComplexMatrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<Complex> row_sums(static_cast<size_t>(n), Complex{0.0, 0.0});
  Complex total{0.0, 0.0};
  uint64_t prev_gray = 0;
  const uint64_t subsets = uint64_t{1} << n;
  for (uint64_t k = 1; k < subsets; ++k) {
    const uint64_t gray = k ^ (k >> 1);
    const int col = std::countr_zero(gray ^ prev_gray);
    const bool added = (gray >> col) & 1u;
    for (int i = 0; i < n; ++i) {
      if (added) {
        row_sums[static_cast<size_t>(i)] += m(i, col);
      } else {
        row_sums[static_cast<size_t>(i)] -= m(i, col);
      }
    }
    Complex prod{1.0, 0.0};
    for (const Complex& r : row_sums) prod *= r;
    total += (std::popcount(gray) % 2 == 1) ? -prod : prod;
    prev_gray = gray;
  }
  return (n % 2 == 1) ? -total : total;
}

}  // namespace detail

/// Matrix permanent. Closed forms up to 3x3, Ryser/Gray-code beyond.
inline Complex permanent(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("permanent: matrix is not square");
  if (m.rows() > 30) throw DimensionError("permanent: matrix too large");
  if (m.rows() <= 3) return detail::permanent_small(m);
  return detail::permanent_ryser(m);
}

/// All occupation vectors with `photons` photons over `modes` modes, in
/// descending lexicographic order: (2,0), (1,1), (0,2).
inline std::vector<FockState> enumerate_fock_states(int modes, int photons) {
  if (modes < 1) throw DomainError("enumerate_fock_states: need at least one mode");
  if (photons < 0) throw DomainError("enumerate_fock_states: negative photon number");
  std::vector<FockState> out;
  std::vector<int> occ(static_cast<size_t>(modes), 0);
  auto recurse = [&](auto&& self, int mode, int remaining) -> void {
    if (mode == modes - 1) {
      occ[static_cast<size_t>(mode)] = remaining;
      out.emplace_back(occ);
      return;
    }
    for (int n = remaining; n >= 0; --n) {
      occ[static_cast<size_t>(mode)] = n;
      self(self, mode + 1, remaining - n);
    }
  };
  recurse(recurse, 0, photons);
  return out;
}

namespace detail {

inline uint64_t factorial_product(const FockState& s) {
  uint64_t p = 1;
  for (int n : s.occupations()) {
    for (int k = 2; k <= n; ++k) p *= static_cast<uint64_t>(k);
  }
  return p;
}

}  // namespace detail

/// <output| U |input> for Fock states: Per(U_sub) / sqrt(prod in_i! prod out_j!),
/// where U_sub repeats column i of U in_i times and row j out_j times.
inline Complex transition_amplitude(const ModeUnitary& u, const FockState& input, const FockState& output) {
  if (input.modes() != u.dim() || output.modes() != u.dim()) {
    throw InvalidTransitionError("transition_amplitude: state mode count differs from unitary dimension");
  }
  if (input.total_photons() != output.total_photons()) {
    throw InvalidTransitionError("transition_amplitude: photon number is not conserved");
  }
  const std::vector<int> cols = input.photon_modes();
  const std::vector<int> rows = output.photon_modes();
  const int n = static_cast<int>(cols.size());
  ComplexMatrix sub(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) sub(r, c) = u(rows[static_cast<size_t>(r)], cols[static_cast<size_t>(c)]);
  }
  const double norm =
      std::sqrt(static_cast<double>(detail::factorial_product(input) * detail::factorial_product(output)));
  return permanent(sub) / norm;
}

/// Output probability for every Fock state, in enumerate_fock_states order.
using OutputDistribution = std::vector<std::pair<FockState, double>>;

inline constexpr int kMaxDistributionPhotons = 4;

inline OutputDistribution output_distribution(const ModeUnitary& u, const FockState& input) {
  if (input.modes() != u.dim()) {
    throw InvalidTransitionError("output_distribution: input mode count differs from unitary dimension");
  }
  if (input.total_photons() > kMaxDistributionPhotons) {
    throw DomainError("output_distribution: at most 4 photons supported");
  }
  OutputDistribution dist;
  for (auto& out : enumerate_fock_states(u.dim(), input.total_photons())) {
    const double p = std::norm(transition_amplitude(u, input, out));
    dist.emplace_back(std::move(out), p);
  }
  return dist;
}

}  // namespace fockchip
