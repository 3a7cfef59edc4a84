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

#include "irsloc/estimator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "irsloc/association.hpp"
#include "irsloc/errors.hpp"
#include "irsloc/scenario_io.hpp"

namespace irsloc {
namespace {

Scenario three_bs() {
  return Scenario({{0, 0}, {120, 10}, {40, 110}}, {{50, 40}}, 5.0, 1.0, 5.0, IrsSize{40, 40},
                  RadioParams{});
}

TEST(SampleMeasurements, ZeroNoiseLimit) {
  const Scenario s = three_bs();
  const RangeLinks links{{0, 1, 2}, {1e-30, 1e-30, 1e-30}};
  std::mt19937_64 rng(1);
  const auto m = sample_measurements_at(s, {52, 41}, links, rng);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto p = s.bs_positions()[links.bs[i]];
    const double d = std::sqrt((p.x - 52) * (p.x - 52) + (p.y - 41) * (p.y - 41) + 16.0);
    EXPECT_NEAR(m.measured[i], d, 1e-12);
  }
}

TEST(SampleMeasurements, NoiseMeanAndVariance) {
  const Scenario s = three_bs();
  const double var = 0.04;
  const RangeLinks links{{1}, {var}};
  std::mt19937_64 rng(2024);
  const Point2 truth{50, 40};
  const double d = std::sqrt(70.0 * 70 + 30.0 * 30 + 16.0);
  const int n = 100000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = sample_measurements_at(s, truth, links, rng).measured[0] - d;
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double sample_var = sq / n - mean * mean;
  EXPECT_LT(std::abs(mean), 4 * std::sqrt(var) / std::sqrt(static_cast<double>(n)));
  // chi-square with 1e5 dof: relative sd of the variance is sqrt(2/n) ~ 0.45%.
  EXPECT_NEAR(sample_var, var, 0.05 * var);
}

TEST(SampleMeasurements, TruthInsideDisk) {
  const Scenario s = three_bs();
  const RangeLinks links{{0, 2}, {1e-4, 1e-4}};
  std::mt19937_64 rng(3);
  double max_r = 0.0;
  int inner = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto m = sample_measurements(s, 0, links, rng);
    const double r = std::hypot(m.truth.x - 50, m.truth.y - 40);
    max_r = std::max(max_r, r);
    if (r < 2.5) ++inner;
  }
  EXPECT_LE(max_r, 5.0);
  // Uniform over the disk: P(r < R/2) = 1/4.
  EXPECT_NEAR(static_cast<double>(inner) / n, 0.25, 0.015);
}

TEST(SampleMeasurements, RangesStayPositive) {
  const Scenario s = three_bs();
  const RangeLinks links{{0, 1}, {1e4, 1e4}};
  std::mt19937_64 rng(4);
  for (int i = 0; i < 2000; ++i)
    for (double r : sample_measurements(s, 0, links, rng).measured) EXPECT_GT(r, 0.0);
}

TEST(MleLocate, ZeroNoiseWithinOneCell) {
  const Scenario s = three_bs();
  const RangeLinks links{{0, 1, 2}, {1e-30, 1e-30, 1e-30}};
  std::mt19937_64 rng(5);
  const Point2 truth{51.234, 37.891};
  const auto m = sample_measurements_at(s, truth, links, rng);
  MleOptions o;
  o.fine_resolution = 0.01;
  const auto e = mle_locate(m, s, {{50, 40}, 5.5}, o);
  EXPECT_LE(std::abs(e.position.x - truth.x), 0.01);
  EXPECT_LE(std::abs(e.position.y - truth.y), 0.01);
}

TEST(MleLocate, TranslationEquivariant) {
  const Scenario s = three_bs();
  const double c = 37.5;
  std::vector<Point2> moved;
  for (auto p : s.bs_positions()) moved.push_back({p.x + c, p.y + c});
  const Scenario t = s.with_bs(moved).with_targets({{50 + c, 40 + c}});
  MeasurementSample m;
  m.truth = {51, 41};
  m.bs = {0, 1, 2};
  m.variance = {0.01, 0.02, 0.015};
  m.measured = {64.2, 72.9, 71.3};
  MeasurementSample mt = m;
  mt.truth = {51 + c, 41 + c};
  const auto a = mle_locate(m, s, {{50, 40}, 6.0});
  const auto b = mle_locate(mt, t, {{50 + c, 40 + c}, 6.0});
  EXPECT_NEAR(b.position.x - a.position.x, c, 1e-6);
  EXPECT_NEAR(b.position.y - a.position.y, c, 1e-6);
}

TEST(MleLocate, MatchesDenseGrid) {
  const Scenario s = three_bs();
  const RangeLinks links{{0, 1, 2}, {0.3, 0.5, 0.4}};
  const SearchRegion region{{50, 40}, 6.0};
  MleOptions o;
  o.fine_resolution = 0.01;
  for (std::uint64_t seed : {6u, 7u, 8u}) {
    std::mt19937_64 rng(seed);
    const auto m = sample_measurements(s, 0, links, rng);
    const auto e = mle_locate(m, s, region, o);

    // Single-stage 2000 x 2000 grid over the bounding square, inside the disk.
    const int n = 2000;
    const double h = 2 * region.radius / (n - 1);
    double best = INFINITY;
    Point2 arg;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Point2 p{region.center.x - region.radius + i * h,
                       region.center.y - region.radius + j * h};
        if (std::hypot(p.x - region.center.x, p.y - region.center.y) > region.radius) continue;
        const double v = mle_cost(m, s, p);
        if (v < best) {
          best = v;
          arg = p;
        }
      }
    EXPECT_NEAR(e.position.x, arg.x, o.fine_resolution) << seed;
    EXPECT_NEAR(e.position.y, arg.y, o.fine_resolution) << seed;
    EXPECT_NEAR(e.cost, best, 1e-3) << seed;
  }
}

TEST(MleLocate, RejectsSingleRange) {
  MeasurementSample m;
  m.bs = {0};
  m.measured = {10};
  m.variance = {1};
  EXPECT_THROW(mle_locate(m, three_bs(), {{50, 40}, 5}), ValidationError);
}

TEST(TrialSeed, DistinctAndStable) {
  EXPECT_EQ(trial_seed(1, 0), trial_seed(1, 0));
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
  EXPECT_NE(trial_seed(1, 0), trial_seed(2, 0));
}

class MonteCarloTest : public ::testing::Test {
 protected:
  Scenario scenario = default_scenario().with_targets({{60, 80}, {140, 60}});
  SchemeResult scheme = run_scheme(scenario, Scheme::proposed);
};

TEST_F(MonteCarloTest, DeterministicAcrossThreads) {
  MonteCarloOptions o;
  o.trials = 60;
  o.seed = 99;
  o.threads = 1;
  const auto a = monte_carlo(scenario, scheme.plan, scheme.allocation, o);
  const auto b = monte_carlo(scenario, scheme.plan, scheme.allocation, o);
  o.threads = 3;
  const auto c = monte_carlo(scenario, scheme.plan, scheme.allocation, o);
  EXPECT_EQ(a.mse, b.mse);
  EXPECT_EQ(a.mse, c.mse);
  EXPECT_EQ(a.trials, 60u);
}

TEST_F(MonteCarloTest, HighPowerIsEfficient) {
  MonteCarloOptions o;
  o.trials = 500;
  o.seed = 7;
  const auto r = monte_carlo(scenario, scheme.plan, scheme.allocation, o);
  // Lower bound holds up to sampling noise; the estimator is near-efficient.
  EXPECT_GE(r.mse, r.crlb - 3 * r.std_error);
  EXPECT_LE(r.mse / r.crlb, 1.5);
  double mean = 0.0;
  for (double c : scheme.crlb) mean += c / static_cast<double>(scheme.crlb.size());
  EXPECT_NEAR(r.crlb, mean, 1e-12 * mean);
}

TEST_F(MonteCarloTest, ConsistentBetween500And1000Trials) {
  MonteCarloOptions o;
  o.seed = 3;
  o.trials = 500;
  const auto a = monte_carlo(scenario, scheme.plan, scheme.allocation, o);
  o.trials = 1000;
  const auto b = monte_carlo(scenario, scheme.plan, scheme.allocation, o);
  // Trials share substreams, so 1000 extends 500.
  EXPECT_LT(std::abs(b.mse - a.mse), 4 * a.std_error);
}

}  // namespace
}  // namespace irsloc
