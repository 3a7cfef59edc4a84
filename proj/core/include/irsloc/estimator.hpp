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

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "irsloc/allocation.hpp"
#include "irsloc/channel.hpp"
#include "irsloc/plan.hpp"
#include "irsloc/scenario.hpp"

namespace irsloc {

/// Range links of one target: which BSs measure it and with what variance.
struct RangeLinks {
  std::vector<std::size_t> bs;
  std::vector<double> variance;  ///< m^2, finite and > 0
};

/// Links of target k under a plan and slot allocation: BS m contributes
/// when its accumulated share s is positive, with variance c0 / (s gamma_bar).
RangeLinks range_links(const AssociationPlan& plan, const TimeAllocation& eta,
                       const BudgetTable& budgets, std::size_t k, double c0);

struct MeasurementSample {
  Point2 truth;                   ///< true target position
  std::vector<std::size_t> bs;
  std::vector<double> measured;   ///< noisy 3D ranges, all > 0
  std::vector<double> variance;
};

/// Draws the true position uniformly over target k's uncertainty disk and a
/// Gaussian range per link; non-positive ranges are redrawn.
MeasurementSample sample_measurements(const Scenario& scenario, std::size_t k,
                                      const RangeLinks& links, std::mt19937_64& rng);

/// Noisy ranges for a known position.
MeasurementSample sample_measurements_at(const Scenario& scenario, Point2 truth,
                                         const RangeLinks& links, std::mt19937_64& rng);

struct SearchRegion {
  Point2 center;
  double radius = 0.0;
};

/// Target k's uncertainty disk inflated by three times the largest range
/// standard deviation.
SearchRegion default_search_region(const Scenario& scenario, std::size_t k,
                                   const RangeLinks& links);

struct MleOptions {
  double fine_resolution = 0.01;     ///< final grid cell [m]
  std::size_t coarse_cells = 100;    ///< cells across the region diameter, at most
  double ambiguity_tolerance = 1.0;  ///< cost gap below which two separated minima tie
};

struct MleEstimate {
  Point2 position;
  double cost = 0.0;       ///< sum (d~ - d)^2 / sigma^2 at the estimate
  bool ambiguous = false;  ///< a separated local minimum has nearly the same cost
};

/// Weighted least-squares range cost of a candidate position.
double mle_cost(const MeasurementSample& sample, const Scenario& scenario, Point2 p);

/// Grid-search maximum-likelihood position. A coarse grid covers the square
/// around the region disk (cells outside the disk are skipped); the best
/// candidate and the best candidate at least two coarse cells away are both
/// refined in steps of 10x until the cell is at most fine_resolution.
MleEstimate mle_locate(const MeasurementSample& sample, const Scenario& scenario,
                       const SearchRegion& region, const MleOptions& options = {});

struct MonteCarloResult {
  double mse = 0.0;        ///< mean squared position error [m^2], averaged over targets
  double crlb = 0.0;       ///< mean per-target CRLB [m^2]
  double std_error = 0.0;  ///< standard error of mse
  std::size_t trials = 0;
  double power = 0.0;      ///< transmit power [W]
  std::uint64_t seed = 0;
  std::size_t ambiguous = 0;
};

struct MonteCarloOptions {
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  /// Final MLE grid cell; 0 picks min(0.01, sqrt(min CRLB) / 20).
  double fine_resolution = 0.0;
  std::size_t threads = 0;  ///< 0: hardware concurrency
};

/// Seed of trial `index`'s private generator.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index);

/// Independent trials of sampling and MLE for every target of the plan.
/// Deterministic for a given seed regardless of thread count.
MonteCarloResult monte_carlo(const Scenario& scenario, const AssociationPlan& plan,
                             const TimeAllocation& eta, const MonteCarloOptions& options = {});

}  // namespace irsloc
