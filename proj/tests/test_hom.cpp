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

#include <random>

#include <gtest/gtest.h>

#include "fockchip/chip.hpp"
#include "fockchip/hom.hpp"

using namespace fockchip;

namespace {

std::vector<double> scan_delays(double half_range_m, int points) {
  std::vector<double> d;
  for (int k = 0; k < points; ++k) d.push_back(half_range_m * (2.0 * k / (points - 1) - 1.0));
  return d;
}

std::vector<DipSample> samples_of(const std::vector<double>& delays, const std::vector<double>& rates) {
  std::vector<DipSample> s;
  for (size_t k = 0; k < delays.size(); ++k) s.push_back({delays[k], rates[k]});
  return s;
}

}  // namespace

TEST(Visibility, Values) {
  EXPECT_EQ(visibility(0.5), 1.0);
  EXPECT_NEAR(visibility(0.298), 0.719, 1e-3);
  EXPECT_NEAR(visibility(0.469), 0.992, 1e-3);
  EXPECT_THROW(visibility(0.0), DegenerateError);
  EXPECT_THROW(visibility(1.0), DegenerateError);
  EXPECT_THROW(visibility(1.2), DomainError);
}

TEST(Visibility, SymmetricInEta) {
  for (int k = 1; k < 1000; ++k) {
    const double eta = k / 1000.0;
    EXPECT_NEAR(visibility(eta), visibility(1.0 - eta), 1e-12);
  }
}

TEST(CoincidenceProbability, KnownValues) {
  EXPECT_EQ(coincidence_probability(0.5, 1.0), 0.0);
  EXPECT_EQ(coincidence_probability(0.5, 0.0), 0.5);
  EXPECT_NEAR(coincidence_probability(0.298, 1.0), 0.163216, 1e-6);
  EXPECT_NEAR(coincidence_probability(0.298, 0.0), 0.581608, 1e-6);
  EXPECT_THROW(coincidence_probability(0.5, 1.5), DomainError);
}

TEST(CoincidenceProbability, ConsistentWithVisibility) {
  for (int k = 1; k < 100; ++k) {
    const double eta = k / 100.0;
    EXPECT_NEAR(1.0 - coincidence_probability(eta, 1.0) / coincidence_probability(eta, 0.0), visibility(eta), 1e-12);
  }
}

TEST(CoincidenceProbability, MonotoneNearHalf) {
  for (double eta : {0.3, 0.45, 0.5, 0.55, 0.7}) {
    double prev = coincidence_probability(eta, 0.0);
    for (int k = 1; k <= 100; ++k) {
      const double p = coincidence_probability(eta, k / 100.0);
      EXPECT_LE(p, prev + 1e-15);
      prev = p;
    }
  }
}

TEST(CoincidenceProbability, MatchesPermanentRoute) {
  for (int k = 0; k <= 20; ++k) {
    const double eta = k / 20.0;
    const auto u = coupler_unitary(eta);
    for (double x : {0.0, 0.3, 0.8, 1.0}) {
      EXPECT_NEAR(two_photon_probability(u, 0, 1, 0, 1, x * x), coincidence_probability(eta, x), 1e-12);
    }
  }
}

TEST(ChipPath, FourNinthsBaseline) {
  const auto u = compose(standard_chip(ChipReflectivities::design(), 0.0));
  const double chip = two_photon_probability(u, kC1, kVB, kT0, kT1, 0.0);
  EXPECT_NEAR(chip / coincidence_probability(0.5, 0.0), 4.0 / 9.0, 1e-10);
  EXPECT_NEAR(two_photon_probability(u, kC1, kVB, kT0, kT1, 1.0), 0.0, 1e-12);
}

TEST(Wavepacket, OverlapShape) {
  for (auto shape : {FilterShape::gaussian, FilterShape::rect, FilterShape::gaussian_times_rect}) {
    WavepacketModel m;
    m.shape = shape;
    EXPECT_EQ(overlap(m, 0.0), 1.0);
    for (int k = -200; k <= 200; ++k) {
      const double o = overlap(m, k * 0.05 * m.coherence_time());
      EXPECT_GE(o, 0.0);
      EXPECT_LE(o, 1.0);
    }
    EXPECT_LT(overlap(m, 1000 * m.coherence_time()), 1e-5);
  }
  WavepacketModel g;
  EXPECT_LT(overlap(g, 4 * g.coherence_time()), 1e-3);
  EXPECT_NEAR(g.coherence_length(), 0.328e-3, 1e-6);
  g.filter_fwhm = 0.0;
  EXPECT_THROW(g.validate(), DomainError);
}

TEST(Wavepacket, ShapeNames) {
  for (auto shape : {FilterShape::gaussian, FilterShape::rect, FilterShape::gaussian_times_rect}) {
    EXPECT_EQ(filter_shape_from_string(to_string(shape)), shape);
  }
  EXPECT_THROW(filter_shape_from_string("lorentzian"), InputError);
}

TEST(Wavepacket, DerivativeMatchesFiniteDifference) {
  for (auto shape : {FilterShape::gaussian, FilterShape::rect, FilterShape::gaussian_times_rect}) {
    for (double u : {-1.3, -0.4, -1e-4, 0.0, 0.2, 0.77, 2.1}) {
      const double h = 1e-6;
      const double fd = (dip_shape(shape, u + h) - dip_shape(shape, u - h)) / (2 * h);
      EXPECT_NEAR(dip_shape_derivative(shape, u), fd, 1e-6);
    }
  }
}

TEST(DipCurve, LimitsAndSymmetry) {
  WavepacketModel m;
  const auto far = dip_curve(0.469, m, 0.9, 1000.0, {-1.0, 1.0});
  EXPECT_NEAR(far[0], 1000.0, 1e-9);
  EXPECT_NEAR(far[1], 1000.0, 1e-9);
  EXPECT_NEAR(dip_curve(0.5, m, 1.0, 1000.0, {0.0})[0], 0.0, 1e-12);
  EXPECT_NEAR(dip_curve(0.469, m, 1.0, 1000.0, {0.0})[0], 1000.0 * (1 - visibility(0.469)), 1e-9);
  EXPECT_NEAR(dip_curve(0.469, m, 1.0, 1000.0, {0.0})[0], 8.0, 0.5);
  EXPECT_NEAR(1.0 - dip_curve(0.469, m, 0.966, 1000.0, {0.0})[0] / 1000.0, 0.958, 1e-3);
  const auto d = scan_delays(1e-3, 41);
  const auto r = dip_curve(0.4, m, 0.8, 500.0, d);
  for (size_t k = 0; k < d.size(); ++k) EXPECT_NEAR(r[k], r[d.size() - 1 - k], 1e-9);
  EXPECT_THROW(dip_curve(0.4, m, 1.1, 500.0, d), DomainError);
  EXPECT_THROW(dip_curve(0.4, m, 0.5, 0.0, d), DomainError);
}

TEST(FitDip, NoiselessRoundTrip) {
  for (auto shape : {FilterShape::gaussian, FilterShape::rect, FilterShape::gaussian_times_rect}) {
    for (double v0 : {1.0, 0.966, 0.5}) {
      WavepacketModel m;
      m.shape = shape;
      const auto d = scan_delays(1e-3, 81);
      const auto fit = fit_dip(samples_of(d, dip_curve(0.469, m, v0, 1000.0, d)), shape);
      EXPECT_NEAR(fit.visibility, v0 * visibility(0.469), 1e-6) << to_string(shape);
      EXPECT_NEAR(fit.width, m.coherence_length(), 1e-6 * m.coherence_length()) << to_string(shape);
      EXPECT_NEAR(fit.baseline_rate, 1000.0, 1e-6);
      EXPECT_NEAR(fit.center, 0.0, 1e-9);
      EXPECT_FALSE(fit.width_flagged);
    }
  }
}

TEST(FitDip, ShiftedCenter) {
  WavepacketModel m;
  auto d = scan_delays(1e-3, 81);
  std::vector<double> shifted;
  for (double x : d) shifted.push_back(x - 0.1e-3);
  const auto r = dip_curve(0.469, m, 0.9, 700.0, shifted);
  const auto fit = fit_dip(samples_of(d, r));
  EXPECT_NEAR(fit.center, 0.1e-3, 1e-9);
  EXPECT_NEAR(fit.visibility, 0.9 * visibility(0.469), 1e-6);
}

TEST(FitDip, PoissonNoise) {
  WavepacketModel m;
  const auto d = scan_delays(1e-3, 81);
  const auto rates = dip_curve(0.469, m, 0.966, 1000.0, d);
  const double truth = 0.966 * visibility(0.469);
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<DipSample> s;
    for (size_t k = 0; k < d.size(); ++k) {
      std::poisson_distribution<long long> p(rates[k] * 10.0);
      s.push_back({d[k], p(rng) / 10.0});
    }
    const auto fit = fit_dip(s);
    EXPECT_NEAR(fit.visibility, truth, 0.02) << seed;
    EXPECT_GT(fit.visibility_uncertainty, 0.0);
  }
}

TEST(FitDip, FlatDataFlagged) {
  std::vector<DipSample> s;
  for (int k = 0; k < 30; ++k) s.push_back({1e-5 * k, 500.0});
  const auto fit = fit_dip(s);
  EXPECT_NEAR(fit.visibility, 0.0, 1e-9);
  EXPECT_TRUE(fit.width_flagged);
  EXPECT_GT(fit.width_uncertainty, 10 * fit.width);
}

TEST(FitDip, TooFewSamples) {
  EXPECT_THROW(fit_dip({{0, 1}, {1, 1}, {2, 1}}), FitError);
  std::vector<DipSample> same(10, DipSample{0.0, 1.0});
  EXPECT_THROW(fit_dip(same), FitError);
}
