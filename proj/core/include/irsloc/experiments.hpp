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
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "irsloc/association.hpp"
#include "irsloc/estimator.hpp"
#include "irsloc/polyblock.hpp"
#include "irsloc/scenario.hpp"

namespace irsloc {

// ---------------------------------------------------------------------------
// Scenario generators

/// Target at the origin with M BSs evenly spaced on the circle where the 3D
/// distance equals radio.d_min; zero uncertainty radius.
Scenario symmetric_ring_scenario(std::size_t num_bs, const Scenario& base);

struct RandomLayout {
  std::size_t num_bs = 4;
  std::size_t num_targets = 1;
  double side = 200.0;       ///< BSs uniform in [0, side]^2
  double target_margin = 20.0;  ///< targets uniform in [margin, side - margin]^2
  double clearance = 5.0;    ///< extra xy distance kept between a BS and a disk edge
};

/// Random placement; BSs closer than r_e + clearance to a target prior are
/// redrawn. Radio, heights and IRS size come from `base`.
Scenario random_scenario(const Scenario& base, const RandomLayout& layout, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Single-target optimisation

struct SingleTargetRow {
  std::size_t target = 0;
  double crlb = 0.0;
  std::vector<double> eta;  ///< one per BS
  std::size_t active = 0;   ///< entries above kActiveShareThreshold
  double min_active_eta = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

SingleTargetRow optimize_single(const BudgetTable& budgets, std::size_t k, double c0,
                                const SolverConfig& config = {});

struct StatsBin {
  std::size_t active = 0;      ///< number of associated BSs
  std::size_t count = 0;
  double fraction = 0.0;
  double min_eta = 0.0;        ///< smallest active share seen in this bin; NaN when empty
};

struct StatsTable {
  std::size_t scenarios = 0;
  std::size_t num_bs = 0;
  std::vector<StatsBin> bins;  ///< active = 1 .. num_bs
  std::size_t unconverged = 0;
};

/// Histogram of associated-BS counts of the single-target optimum over random
/// placements of `num_bs` BSs around one target.
StatsTable stats_table(const Scenario& base, std::size_t num_bs, std::size_t scenarios,
                       std::uint64_t seed, const SolverConfig& config = {});

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { power, elements, num_bs, num_targets, uncertainty };

std::string_view axis_name(SweepAxis axis);
/// Accepts power, L, M, K, r_e. Throws ValidationError otherwise.
SweepAxis parse_axis(std::string_view name);

/// Scenario with one axis set: power -> p_tx [W]; L -> L_x = L_y = value;
/// M -> first M BSs; K -> first K targets; r_e -> uncertainty radius [m].
Scenario apply_axis(const Scenario& base, SweepAxis axis, double value);

/// Parses "a,b,c" or "lo..hi[:count]" (count points, linear, default 10).
/// Values must be strictly increasing.
std::vector<double> parse_values(std::string_view text);

struct SchemeRow {
  std::string axis;  ///< empty when not part of a sweep
  double value = 0.0;
  Scheme scheme = Scheme::proposed;
  std::size_t num_targets = 0;
  std::size_t num_bs = 0;
  std::size_t num_slots = 0;
  std::size_t associations = 0;
  double max_crlb = 0.0;
  double mean_crlb = 0.0;
  bool converged = true;
  std::optional<MonteCarloResult> mc;
};

SchemeRow evaluate_scheme(const Scenario& scenario, Scheme scheme, const SolverConfig& solver,
                          std::size_t trials, std::uint64_t seed);

/// Every (value, scheme) point; points run on a worker pool, rows come back
/// in sweep order.
std::vector<SchemeRow> run_sweep(const Scenario& base, SweepAxis axis,
                                 const std::vector<double>& values,
                                 const std::vector<Scheme>& schemes, const SolverConfig& solver,
                                 std::size_t trials, std::uint64_t seed, std::size_t threads = 0);

std::string scheme_csv_header();
std::string scheme_csv_row(const SchemeRow& row);

// ---------------------------------------------------------------------------
// Run manifest

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t v);

/// Number formatting shared by every CSV: shortest round-trip form.
std::string format_number(double v);

}  // namespace irsloc
