// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The irsloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "irsloc/channel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

namespace irsloc {
namespace {

// |sum_l exp(j pi l delta)| by explicit summation.
double phasor_sum(double delta, int l) {
  std::complex<double> acc = 0.0;
  for (int i = 0; i < l; ++i) acc += std::polar(1.0, std::numbers::pi * i * delta);
  return std::abs(acc);
}

TEST(SubarrayCounts, ExactSquare) {
  EXPECT_EQ(subarray_counts(40, 40, {0.0, 0.2}, {0.0, 0.0}).q_x, 2);
}

TEST(SubarrayCounts, ZeroWidthIsOne) {
  const auto c = subarray_counts(40, 40, {0.1, 0.1}, {0.3, 0.3});
  EXPECT_EQ(c.q_x, 1);
  EXPECT_EQ(c.q_y, 1);
}

TEST(SubarrayCounts, RoundsUp) {
  // sqrt(40 * 0.3 / 2) = 2.449
  EXPECT_EQ(subarray_counts(40, 40, {0.1, 0.4}, {0.0, 0.0}).q_x, 3);
}

TEST(FlattenedGain, BroadsideIsElementCount) {
  EXPECT_DOUBLE_EQ(flattened_gain(0.0, 0.0, 8, 8), 64.0);
}

TEST(FlattenedGain, FirstNull) {
  EXPECT_NEAR(flattened_gain(2.0 / 8, 0.0, 8, 8), 0.0, 1e-12);
}

TEST(FlattenedGain, MatchesPhasorSum) {
  const double g = flattened_gain(1.0 / 8, 0.0, 8, 8);
  EXPECT_NEAR(std::abs(g), phasor_sum(1.0 / 8, 8) * 8.0, 1e-12);
  for (double d : {0.013, 0.07, 0.31, 0.9}) {
    EXPECT_NEAR(std::abs(flattened_gain(d, d / 2, 10, 6)), phasor_sum(d, 10) * phasor_sum(d / 2, 6),
                1e-10);
  }
}

TEST(SubarrayDirections, SingleCentre) {
  const auto c = subarray_directions(0.1, 0.5, 1, 40);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_DOUBLE_EQ(c[0], 0.3);
}

TEST(SubarrayDirections, TwoCentres) {
  const auto c = subarray_directions(0.0, 0.2, 2, 20);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(c[0], 0.05, 1e-15);
  EXPECT_NEAR(c[1], 0.15, 1e-15);
}

TEST(SubarrayDirections, CoverTheSpan) {
  const int lx = 40;
  const Span span{-0.12, 0.18};
  const auto counts = subarray_counts(lx, lx, span, span);
  const int l_sub = lx / counts.q_x;
  const auto centres = subarray_directions(span.lo, span.hi, counts.q_x, l_sub);
  for (int i = 0; i <= 3600; ++i) {
    const double v = span.lo + span.width() * i / 3600.0;
    double best = 1e9;
    for (double c : centres) best = std::min(best, std::abs(v - c));
    EXPECT_LE(best, 1.0 / l_sub + 1e-12) << "sample " << v;
  }
}

TEST(BaselineSnr, ReferenceValue) {
  RadioParams r;
  r.beta0 = 1e-3;
  r.sigma_s2 = 1e-8;
  r.p_tx = 1.0;
  r.delta_T = 0.1;
  r.delta_t = 1e-6;
  // 1 * 1e-6 * 0.1 * 1600^2 / (1 * 1e-6 * 1e4 * 1e-8)
  const double expected = 1.0 * 1e-6 * 0.1 * 2560000.0 / (1e-6 * 1e4 * 1e-8);
  EXPECT_NEAR(baseline_snr(r, 1600, 10.0, 1), expected, 1e-6 * expected);
  EXPECT_NEAR(expected, 2.56e9, 1.0);
}

TEST(BaselineSnr, FourthPowerLaw) {
  const RadioParams r;
  EXPECT_NEAR(baseline_snr(r, 1600, 20.0, 1), baseline_snr(r, 1600, 10.0, 1) / 16.0,
              1e-9 * baseline_snr(r, 1600, 20.0, 1));
}

TEST(LinkBudget, LevelHeightsKeepFullSnr) {
  const Scenario s({{60, 0}, {-300, -300}}, {{0, 0}}, 2.0, 2.0, 0.0, IrsSize{40, 40}, RadioParams{});
  const auto b = link_budget(s, 0, 0);
  EXPECT_DOUBLE_EQ(b.gamma_tilde, b.gamma_bar);
  EXPECT_EQ(b.q, 1);
}

TEST(LinkBudget, ElevationScalesByCosineSquared) {
  const Scenario s({{30, 40}, {-300, -300}}, {{0, 0}}, 5.0, 1.0, 2.0, IrsSize{40, 40}, RadioParams{});
  const auto b = link_budget(s, 0, 0);
  const double c = std::cos(b.geometry.elevation);
  EXPECT_NEAR(b.gamma_tilde, b.gamma_bar * c * c, 1e-12 * b.gamma_bar);
  EXPECT_EQ(b.q, b.q_x * b.q_y);
  EXPECT_NEAR(b.gamma_bar, baseline_snr(s.radio(), 1600, b.geometry.distance, b.q),
              1e-12 * b.gamma_bar);
}

TEST(MeasurementVariance, Values) {
  EXPECT_DOUBLE_EQ(measurement_variance(1e3, 0.1), 1e-4);
  EXPECT_DOUBLE_EQ(measurement_variance(0.5 * 2.0, 0.1), 0.1);
  EXPECT_LT(measurement_variance(1e300, 0.1), 1e-299);
}

TEST(BudgetTable, SelectTargetsKeepsOrder) {
  const Scenario s({{0, 0}, {100, 0}}, {{50, 50}, {20, 70}, {80, 30}}, 5.0, 1.0, 1.0,
                   IrsSize{20, 20}, RadioParams{});
  const BudgetTable t(s);
  const auto sub = t.select_targets({2, 0});
  ASSERT_EQ(sub.num_targets(), 2u);
  EXPECT_EQ(sub.num_bs(), 2u);
  EXPECT_DOUBLE_EQ(sub.at(0, 1).gamma_tilde, t.at(2, 1).gamma_tilde);
  EXPECT_DOUBLE_EQ(sub.at(1, 0).gamma_tilde, t.at(0, 0).gamma_tilde);
}

}  // namespace
}  // namespace irsloc
