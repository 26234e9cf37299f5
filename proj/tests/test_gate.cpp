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

#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fockchip/chip.hpp"
#include "fockchip/gate.hpp"
#include "oracles.hpp"

using namespace fockchip;
using std::numbers::pi;

namespace {

GateMatrix chip_gate(const ChipReflectivities& r, double phi) {
  return extract_logical_gate(compose(standard_chip(r, phi)), LogicalEncoding::standard());
}

// Post-selected table from the full two-photon output state, found by the
// ladder-operator oracle. Output target rails are read swapped.
Eigen::Matrix4d brute_force_table(const ModeUnitary& u) {
  const int control[2] = {kC0, kC1};
  const int target_in[2] = {kT0, kT1};
  const int target_out[2] = {kT1, kT0};
  Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
  for (int in = 0; in < 4; ++in) {
    oracle::Occupation occ(6, 0);
    occ[static_cast<size_t>(control[in >> 1])] += 1;
    occ[static_cast<size_t>(target_in[in & 1])] += 1;
    const auto state = oracle::evolve(u.matrix(), occ);
    EXPECT_EQ(state.size(), 21u);
    for (int out = 0; out < 4; ++out) {
      oracle::Occupation o(6, 0);
      o[static_cast<size_t>(control[out >> 1])] += 1;
      o[static_cast<size_t>(target_out[out & 1])] += 1;
      t(in, out) = std::norm(state.at(o));
    }
    t.row(in) /= t.row(in).sum();
  }
  return t;
}

}  // namespace

TEST(IdealGate, UnitaryOnGrid) {
  for (int k = 0; k < 64; ++k) {
    const auto g = ideal_gate(2 * pi * k / 64).entries;
    EXPECT_LT((g.adjoint() * g - Matrix4c::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(IdealGate, AgreesWithProductForm) {
  for (int k = 0; k < 64; ++k) {
    const double phi = 2 * pi * k / 64;
    EXPECT_LT(oracle::phase_distance(ideal_gate(phi).entries, oracle::gate_product_form(phi)), 1e-12);
    EXPECT_LT(oracle::phase_distance(ideal_gate(phi).entries, oracle::gate_table_form(phi)), 1e-15);
  }
}

TEST(IdealGate, SpecialAngles) {
  const Complex i{0, 1};
  const auto pi_gate = ideal_gate(pi).entries;
  EXPECT_LT(std::abs(pi_gate(0, 1) - i), 1e-15);
  EXPECT_LT(std::abs(pi_gate(1, 0) + i), 1e-15);
  EXPECT_LT(std::abs(pi_gate(2, 2) + 1.0), 1e-15);
  EXPECT_LT(std::abs(pi_gate(3, 3) + 1.0), 1e-15);
  EXPECT_LT(std::abs(pi_gate(0, 0)), 1e-15);
  const auto quarter = ideal_gate(pi / 2).entries;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const double mag = std::abs(quarter(r, c));
      EXPECT_TRUE(mag < 1e-15 || std::abs(mag - std::sqrt(0.5)) < 1e-15);
    }
  }
}

TEST(ExtractGate, DesignChipMatchesIdealOverGrid) {
  for (int k = 0; k < 64; ++k) {
    const double phi = 2 * pi * k / 64;
    const auto g = chip_gate(ChipReflectivities::design(), phi);
    EXPECT_LT(oracle::phase_distance(g.entries, ideal_gate(phi).entries / 3.0), 1e-9) << k;
    EXPECT_NEAR(g.prefactor, 1.0 / 3.0, 1e-12);
    EXPECT_LT(g.unitary_distance, 1e-12);
    EXPECT_TRUE(equal_up_to_global_phase(ComplexMatrix(g.normalized()), ComplexMatrix(ideal_gate(phi).entries), 1e-9));
  }
}

TEST(ExtractGate, IdentityTrivialEncoding) {
  const auto g = extract_logical_gate(ModeUnitary::identity(4), LogicalEncoding::trivial());
  EXPECT_LT((g.entries - Matrix4c::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(g.prefactor, 1.0, 1e-15);
}

TEST(ExtractGate, MeasuredChipStillCloseToCnot) {
  const auto g = chip_gate(ChipReflectivities::measured(), 0.0);
  EXPECT_GT(g.unitary_distance, 1e-4);
  const double s = similarity(prob_table(ideal_gate(0.0)), prob_table(g));
  EXPECT_GE(s, 0.95);
  EXPECT_LE(s, 1.0);
  EXPECT_NEAR(s, 0.9937201106801972, 1e-12);
}

TEST(Encoding, Validation) {
  const LogicalEncoding overlapping{{0, 1}, {1, 2}, false};
  EXPECT_THROW(overlapping.validate(4), DimensionError);
  EXPECT_THROW(LogicalEncoding::standard().validate(4), DimensionError);
  EXPECT_NO_THROW(LogicalEncoding::standard().validate(6));
}

TEST(SuccessProbability, DesignIsOneNinth) {
  const auto u = compose(standard_chip(ChipReflectivities::design(), 0.9));
  for (int in = 0; in < 4; ++in) EXPECT_NEAR(success_probability(u, LogicalEncoding::standard(), in), 1.0 / 9, 1e-10);
  EXPECT_NEAR(success_probability(ModeUnitary::identity(4), LogicalEncoding::trivial(), 2), 1.0, 1e-15);
}

TEST(ProbTable, KnownRows) {
  const auto u0 = compose(standard_chip(ChipReflectivities::design(), 0.0));
  const auto t0 = prob_table(u0, LogicalEncoding::standard());
  EXPECT_NEAR(t0(2, 3), 1.0, 1e-12);
  EXPECT_NEAR(t0(0, 0), 1.0, 1e-12);
  const auto t90 = prob_table(compose(standard_chip(ChipReflectivities::design(), pi / 2)), LogicalEncoding::standard());
  EXPECT_NEAR(t90(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(t90(0, 1), 0.5, 1e-12);
  EXPECT_NEAR(t90(0, 2), 0.0, 1e-12);
}

TEST(ProbTable, MatchesBruteForceEnumeration) {
  for (auto r : {ChipReflectivities::design(), ChipReflectivities::measured()}) {
    for (int k = 0; k < 16; ++k) {
      const auto u = compose(standard_chip(r, 2 * pi * k / 16));
      EXPECT_LT((prob_table(u, LogicalEncoding::standard()).p - brute_force_table(u)).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(ProbTable, RowsAreSquaredIdealColumns) {
  for (int k = 0; k < 16; ++k) {
    const double phi = 2 * pi * k / 16;
    const auto t = prob_table(ideal_gate(phi));
    const auto g = oracle::gate_table_form(phi);
    for (int in = 0; in < 4; ++in) {
      for (int out = 0; out < 4; ++out) EXPECT_NEAR(t(in, out), std::norm(g(out, in)), 1e-15);
    }
  }
}

TEST(ProbTable, DegenerateRowThrows) {
  Eigen::Matrix4d raw = Eigen::Matrix4d::Identity();
  raw(2, 2) = 0.0;
  EXPECT_THROW(normalize_rows(raw), DegenerateError);
}

TEST(Similarity, Properties) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(0.01, 1.0);
  auto random_table = [&] {
    Eigen::Matrix4d m;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) m(r, c) = uni(rng);
    }
    return normalize_rows(m);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_table();
    const auto b = random_table();
    const double s = similarity(a, b);
    EXPECT_NEAR(s, similarity(b, a), 1e-15);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_LT(s, 1.0);
    EXPECT_NEAR(similarity(a, a), 1.0, 1e-12);
  }
  const ProbTable id{Eigen::Matrix4d::Identity()};
  EXPECT_NEAR(similarity(id, id), 1.0, 1e-15);
  Eigen::Matrix4d shifted = Eigen::Matrix4d::Zero();
  for (int r = 0; r < 4; ++r) shifted(r, (r + 1) % 4) = 1.0;
  EXPECT_EQ(similarity(id, ProbTable{shifted}), 0.0);
  Eigen::Matrix4d neg = Eigen::Matrix4d::Identity();
  neg(0, 1) = -0.1;
  EXPECT_THROW(similarity(id, ProbTable{neg}), DomainError);
}

TEST(Similarity, MeasuredReflectivityGap) {
  double total = 0.0;
  for (int k = 0; k < 16; ++k) {
    const double phi = 2 * pi * k / 16;
    total += similarity(prob_table(chip_gate(ChipReflectivities::design(), phi)),
                        prob_table(chip_gate(ChipReflectivities::measured(), phi)));
  }
  EXPECT_NEAR(total / 16, 0.9990801916707075, 1e-12);
}

TEST(GlobalPhase, Equivalences) {
  const ComplexMatrix m = ideal_gate(0.0).entries;
  EXPECT_TRUE(equal_up_to_global_phase(m, m, 1e-9));
  EXPECT_TRUE(equal_up_to_global_phase(m, ComplexMatrix(-m), 1e-9));
  EXPECT_TRUE(equal_up_to_global_phase(m, ComplexMatrix(Complex(0, 1) * m), 1e-9));
  EXPECT_FALSE(equal_up_to_global_phase(m, ComplexMatrix(ideal_gate(0.3).entries), 1e-9));
  EXPECT_FALSE(equal_up_to_global_phase(m, ComplexMatrix(0.5 * m), 1e-9));
}

TEST(Entanglement, KnownStates) {
  const double h = std::sqrt(0.5);
  const Complex i{0, 1};
  EXPECT_NEAR(entanglement_of_output(GateMatrix{Matrix4c::Identity(), 1.0, 0.0}, product_state(1, 0, 1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(entanglement_of_output(ideal_gate(0.0), product_state(h, i * h, 1, 0)), 1.0, 1e-12);
  EXPECT_NEAR(entanglement_of_output(ideal_gate(pi), product_state(h, -i * h, 1, 0)), 1.0, 1e-12);
  EXPECT_THROW(entanglement_of_output(ideal_gate(0.0), Vector4c(1, 1, 0, 0)), DomainError);
}

TEST(Entanglement, AgreesWithPurityOracle) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector2cd q1(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
    Eigen::Vector2cd q2(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
    q1.normalize();
    q2.normalize();
    const Vector4c in = product_state(q1(0), q1(1), q2(0), q2(1));
    const double phi = 2 * pi * trial / 100;
    const Vector4c out = ideal_gate(phi).entries * in;
    EXPECT_NEAR(entanglement_of_output(ideal_gate(phi), in), oracle::concurrence_from_purity(out), 1e-9);
  }
}

TEST(Entanglement, ContinuousInPhase) {
  const double h = std::sqrt(0.5);
  const Vector4c in = product_state(h, Complex(0, h), 1, 0);
  double prev = entanglement_of_output(ideal_gate(0.0), in);
  for (int k = 1; k <= 720; ++k) {
    const double c = entanglement_of_output(ideal_gate(2 * pi * k / 720), in);
    EXPECT_LT(std::abs(c - prev), 0.02);
    prev = c;
  }
}
