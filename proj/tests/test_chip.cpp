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

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Normalized fringe 0.5 + 0.5 cos(phi0 + alpha v^2) sampled every 50 mV up
// to 7 V; `noise` is the Gaussian sigma as a fraction of the fringe amplitude.
std::vector<CalibrationSample> fringe(double phi0, double alpha, double noise, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.5 * noise);
  std::vector<CalibrationSample> out;
  for (int k = 0; k <= 140; ++k) {
    const double v = 0.05 * k;
    out.push_back({v, 0.5 + 0.5 * std::cos(phi0 + alpha * v * v) + (noise > 0.0 ? g(rng) : 0.0)});
  }
  return out;
}

}  // namespace

TEST(Coupler, Endpoints) {
  EXPECT_LT(max_diff(coupler_unitary(1.0).matrix(), ComplexMatrix::Identity(2, 2)), 1e-15);
  const auto cross = coupler_unitary(0.0).matrix();
  EXPECT_LT(std::abs(cross(0, 1) - Complex(0, 1)), 1e-15);
  EXPECT_LT(std::abs(cross(1, 0) - Complex(0, 1)), 1e-15);
  EXPECT_LT(std::abs(cross(0, 0)), 1e-15);
  const double h = std::sqrt(0.5);
  ComplexMatrix half(2, 2);
  half << h, Complex(0, h), Complex(0, h), h;
  EXPECT_LT(max_diff(coupler_unitary(0.5).matrix(), half), 1e-15);
}

TEST(Coupler, DomainChecked) {
  EXPECT_THROW(coupler_unitary(-0.01), DomainError);
  EXPECT_THROW(coupler_unitary(1.01), DomainError);
  EXPECT_THROW(coupler_unitary(std::nan("")), DomainError);
}

TEST(Coupler, UnitaryAcrossRange) {
  for (int k = 0; k <= 1000; ++k) {
    EXPECT_LT(ModeUnitary::unitarity_deviation(coupler_unitary(k / 1000.0).matrix()), 1e-12);
  }
}

TEST(Embed, Placement) {
  EXPECT_LT(max_diff(embed(CouplerElement{0, 1, 1.0}, 6).matrix(), ComplexMatrix::Identity(6, 6)), 1e-15);
  const auto p = embed(PhaseElement{2, pi}, 3).matrix();
  ComplexMatrix want = ComplexMatrix::Identity(3, 3);
  want(2, 2) = -1.0;
  EXPECT_LT(max_diff(p, want), 1e-15);
  const auto c = embed(CouplerElement{1, 3, 0.5}, 4).matrix();
  const auto half = coupler_unitary(0.5).matrix();
  EXPECT_EQ(c(1, 1), half(0, 0));
  EXPECT_EQ(c(1, 3), half(0, 1));
  EXPECT_EQ(c(3, 1), half(1, 0));
  EXPECT_EQ(c(3, 3), half(1, 1));
  EXPECT_EQ(c(0, 0), Complex(1.0));
  EXPECT_EQ(c(2, 2), Complex(1.0));
  EXPECT_EQ(c(0, 1), Complex(0.0));
}

TEST(Embed, BadElements) {
  EXPECT_THROW(CircuitSpec(3).add_coupler(0, 3, 0.5), DimensionError);
  EXPECT_THROW(CircuitSpec(3).add_coupler(1, 1, 0.5), DimensionError);
  EXPECT_THROW(CircuitSpec(3).add_coupler(0, 1, 2.0), DomainError);
  EXPECT_THROW(CircuitSpec(3).add_phase(-1, 0.0), DimensionError);
}

TEST(Compose, EmptyIsIdentity) {
  EXPECT_LT(max_diff(compose(CircuitSpec(4)).matrix(), ComplexMatrix::Identity(4, 4)), 1e-15);
}

TEST(Compose, PhasesAdd) {
  const auto two = compose(CircuitSpec(3).add_phase(1, 0.4).add_phase(1, 1.1));
  const auto one = compose(CircuitSpec(3).add_phase(1, 1.5));
  EXPECT_LT(max_diff(two.matrix(), one.matrix()), 1e-15);
}

TEST(Compose, FirstElementActsFirst) {
  CircuitSpec spec(3);
  spec.add_coupler(0, 1, 0.3).add_phase(1, 0.8).add_coupler(1, 2, 0.6);
  ComplexMatrix want = ComplexMatrix::Identity(3, 3);
  for (const auto& e : spec.elements()) want = embed(e, 3).matrix() * want;
  EXPECT_LT(max_diff(compose(spec).matrix(), want), 1e-14);
}

TEST(Compose, RandomSpecsStayUnitary) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> mode(0, 5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    CircuitSpec spec(6);
    for (int k = 0; k < 20; ++k) {
      const int a = mode(rng);
      int b = mode(rng);
      if (b == a) b = (a + 1) % 6;
      if (uni(rng) < 0.5) {
        spec.add_coupler(a, b, uni(rng));
      } else {
        spec.add_phase(a, 2 * pi * uni(rng));
      }
    }
    EXPECT_LT(ModeUnitary::unitarity_deviation(compose(spec).matrix()), 1e-10);
  }
}

TEST(Compose, CommutingElementsReorder) {
  CircuitSpec a(6), b(6);
  a.add_coupler(0, 1, 0.3).add_coupler(2, 3, 0.7).add_phase(4, 1.2).add_coupler(4, 5, 0.1);
  b.add_phase(4, 1.2).add_coupler(2, 3, 0.7).add_coupler(4, 5, 0.1).add_coupler(0, 1, 0.3);
  EXPECT_LT(max_diff(compose(a).matrix(), compose(b).matrix()), 1e-12);
}

TEST(StandardChip, PeriodicInPhase) {
  for (auto r : {ChipReflectivities::design(), ChipReflectivities::measured()}) {
    for (int k = 0; k < 16; ++k) {
      const double phi = 2 * pi * k / 16;
      EXPECT_LT(max_diff(compose(standard_chip(r, phi + 2 * pi)).matrix(), compose(standard_chip(r, phi)).matrix()),
                1e-12);
    }
  }
}

TEST(StandardChip, PhaseOnlyTouchesOneMode) {
  const auto spec = standard_chip(ChipReflectivities::design(), 0.5);
  int phases = 0;
  for (const auto& e : spec.elements()) {
    if (const auto* p = std::get_if<PhaseElement>(&e)) {
      ++phases;
      EXPECT_EQ(p->mode, kPhaseMode);
      EXPECT_EQ(p->phi, 0.5);
    }
  }
  EXPECT_EQ(phases, 1);
  EXPECT_EQ(spec.elements().size(), 6u);
}

TEST(StandardChip, BottomCouplerCarriesEta5) {
  ChipReflectivities r = ChipReflectivities::measured();
  bool found = false;
  for (const auto& e : standard_chip(r, 0).elements()) {
    if (const auto* c = std::get_if<CouplerElement>(&e)) {
      if ((c->mode_a == kC0 && c->mode_b == kVA) || (c->mode_a == kVA && c->mode_b == kC0)) {
        EXPECT_EQ(c->eta, r.eta5);
        found = true;
      }
    }
  }
  EXPECT_TRUE(found);
}

TEST(StandardChip, DesignGivesCnotLikeGateAtZero) {
  const auto g = extract_logical_gate(compose(standard_chip(ChipReflectivities::design(), 0.0)),
                                      LogicalEncoding::standard());
  EXPECT_LT(oracle::phase_distance(g.entries, oracle::gate_table_form(0.0) / 3.0), 1e-9);
}

TEST(Reflectivities, RoundTripValues) {
  const auto m = ChipReflectivities::measured();
  const auto back = ChipReflectivities::from_values(m.values());
  EXPECT_EQ(back.values(), m.values());
  EXPECT_EQ(m.eta5, 0.298);
  EXPECT_EQ(m.eta3, 0.469);
  EXPECT_THROW(ChipReflectivities::from_values({0.1, 0.2, 1.3, 0.4, 0.5}), DomainError);
}

TEST(Calibration, VoltageToPhase) {
  const PhaseCalibration c;
  EXPECT_EQ(phase_from_voltage(c, 0.0), 0.0);
  EXPECT_NEAR(phase_from_voltage(c, 7.0), 2 * pi, 1e-12);
  EXPECT_NEAR(phase_from_voltage(c, 7.0 / std::sqrt(2.0)), pi, 1e-12);
  EXPECT_THROW(phase_from_voltage(c, 7.5), DomainError);
  EXPECT_THROW(phase_from_voltage(c, -0.1), DomainError);
}

TEST(Calibration, NoiselessRoundTrip) {
  const auto fit = fit_calibration(fringe(0.3, 0.13, 0.0, 1));
  EXPECT_NEAR(fit.calibration.phi0, 0.3, 1e-6);
  EXPECT_NEAR(fit.calibration.alpha, 0.13, 1e-6);
  EXPECT_NEAR(fit.offset, 0.5, 1e-6);
  EXPECT_NEAR(fit.amplitude, 0.5, 1e-6);
}

TEST(Calibration, NominalRelationRoundTrip) {
  const auto fit = fit_calibration(fringe(0.0, 2 * pi / 49, 0.0, 1));
  EXPECT_NEAR(phase_from_voltage(fit.calibration, 7.0), 2 * pi, 1e-6);
}

TEST(Calibration, OnePercentNoise) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const auto fit = fit_calibration(fringe(0.3, 0.13, 0.01, seed));
    EXPECT_NEAR(fit.calibration.phi0, 0.3, 0.05 * 0.3) << seed;
    EXPECT_NEAR(fit.calibration.alpha, 0.13, 0.05 * 0.13) << seed;
  }
}

TEST(Calibration, DegenerateInputs) {
  std::vector<CalibrationSample> flat;
  for (int k = 0; k < 20; ++k) flat.push_back({0.3 * k, 1.0});
  EXPECT_THROW(fit_calibration(flat), FitError);
  EXPECT_THROW(fit_calibration({{0.0, 1.0}, {1.0, 0.0}}), FitError);
  EXPECT_THROW(fit_calibration({{1.0, 1.0}, {1.0, 0.0}, {1.0, 0.5}, {1.0, 0.2}}), FitError);
}
