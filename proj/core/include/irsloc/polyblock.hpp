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
#include <functional>
#include <span>
#include <vector>

#include "irsloc/allocation.hpp"
#include "irsloc/channel.hpp"
#include "irsloc/plan.hpp"

namespace irsloc {

/// Objective over dwell shares. Must be pure and non-increasing in every
/// coordinate on the box [0, 1]^n; +inf marks degenerate points.
using Objective = std::function<double(std::span<const double>)>;

/// Share above which a BS counts as associated in statistics and in the
/// three-BS repair.
inline constexpr double kActiveShareThreshold = 1e-3;

struct SolverConfig {
  double epsilon = 1e-6;        ///< relative optimality gap at termination
  std::size_t max_iter = 10000;
  double min_eta = 0.01;        ///< share forced onto the added BS by solve_single_min_three
  std::size_t monotonicity_probes = 8;
  bool record_history = false;
  /// Search stops (unconverged) once the vertex set grows past this.
  std::size_t max_vertices = 5000;
  /// Local descent from each new incumbent; improves the returned point when
  /// a cap stops the search early. The lower bound is unaffected.
  bool polish = true;
  /// Tighten each new vertex against the incumbent level before storing it.
  /// Costs 24 evaluations per coordinate per vertex; pays off only in 2-3 dims.
  bool reduce = false;
};

struct BoundRecord {
  double lower = 0.0;  ///< certified lower bound on the minimum
  double upper = 0.0;  ///< best feasible objective so far
};

struct SolveResult {
  TimeAllocation allocation;
  double value = 0.0;        ///< objective at `allocation`
  double lower_bound = 0.0;  ///< no feasible point is below this
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  std::size_t max_vertices = 0;
  /// False when a cap stopped the search; `allocation` is then the best point found.
  bool converged = false;
  std::vector<BoundRecord> history{};
};

/// Global minimisation of a coordinate-wise non-increasing objective over the
/// probability simplex by polyblock outer approximation.
///
/// The feasible region is treated as the normal set {eta in [0,1]^n :
/// sum(eta) <= 1}; the optimum of a non-increasing objective lies on its
/// simplex face. Each iteration takes the vertex with the smallest objective
/// (a lower bound), projects it radially onto the simplex to get a feasible
/// point, and cuts the polyblock at that point. Vertices that cannot improve
/// the incumbent by more than a factor (1 + epsilon) are discarded.
///
/// Throws NonMonotoneObjective when a random probe finds the objective
/// increasing along a coordinate.
SolveResult solve_single(const Objective& objective, std::size_t dim,
                         const SolverConfig& config = {});

/// As solve_single, but when the optimum uses only two BSs a third BS is
/// added with share config.min_eta, choosing the one that gives the lowest
/// objective; the original pair is scaled by (1 - min_eta).
SolveResult solve_single_min_three(const Objective& objective, std::size_t dim,
                                   const SolverConfig& config = {});

/// Objective max_k CRLB_k(eta) over the slot shares of a fixed plan.
Objective minmax_objective(const AssociationPlan& plan, const BudgetTable& budgets, double c0);

/// Min-max CRLB over slot shares for a fixed association plan. Throws
/// InfeasiblePlan when a target has fewer than two associated BSs.
SolveResult solve_minmax(const AssociationPlan& plan, const BudgetTable& budgets, double c0,
                         const SolverConfig& config = {});

inline constexpr std::size_t kDefaultGridResolution = 200;
inline constexpr double kMaxGridPoints = 2e7;

struct GridResult {
  std::vector<double> point;
  double value = 0.0;
};

/// Exhaustive minimum over the simplex lattice {i / resolution : sum i =
/// resolution}. Throws DimensionTooLarge when the lattice exceeds
/// kMaxGridPoints points.
GridResult grid_oracle(const Objective& objective, std::size_t dim,
                       std::size_t resolution = kDefaultGridResolution);

}  // namespace irsloc
