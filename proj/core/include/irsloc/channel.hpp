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
#include <vector>

#include "irsloc/geometry.hpp"
#include "irsloc/scenario.hpp"

namespace irsloc {

/// Beam-flattening subarray partition and echo SNR of one (target, BS) link.
struct LinkBudget {
  int q_x = 1;
  int q_y = 1;
  int q = 1;                ///< q_x * q_y
  int l_x_sub = 1;          ///< elements per subarray along x, floor(L_x / q_x)
  int l_y_sub = 1;
  double gamma_bar = 0.0;   ///< echo SNR per unit dwell fraction
  double gamma_tilde = 0.0; ///< gamma_bar * cos^2(elevation)
  LinkGeometry geometry;
};

struct SubarrayCounts {
  int q_x = 1;
  int q_y = 1;
};

/// Smallest integer partition whose flattened beam covers the spans:
/// q = max(1, ceil(sqrt(L * width / 2))) per axis, capped at L.
SubarrayCounts subarray_counts(int l_x, int l_y, Span phi_span, Span omega_span);

/// Dirichlet-kernel gain of one subarray at spatial-frequency offsets from its
/// beam centre; removable singularities are replaced by their limits.
double flattened_gain(double delta_phi, double delta_omega, int l_x_sub, int l_y_sub);

/// Beam centres of q subarrays with l_sub elements covering [lo, hi].
std::vector<double> subarray_directions(double lo, double hi, int q, int l_sub);

LinkBudget link_budget(const Scenario& scenario, std::size_t k, std::size_t m);

/// Echo SNR for a link with total array size `elements`, distance and Q.
double baseline_snr(const RadioParams& radio, int elements, double distance, int q);

/// Range variance c0 / gamma. Throws InfiniteVariance when gamma == 0.
double measurement_variance(double gamma, double c0);

/// Every link budget of a scenario, indexed [target][bs].
class BudgetTable {
 public:
  BudgetTable() = default;
  explicit BudgetTable(const Scenario& scenario);

  std::size_t num_targets() const { return rows_; }
  std::size_t num_bs() const { return cols_; }
  const LinkBudget& at(std::size_t k, std::size_t m) const { return cells_.at(k * cols_ + m); }

  /// Restrict to a subset of targets, keeping their order.
  BudgetTable select_targets(const std::vector<std::size_t>& targets) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<LinkBudget> cells_;
};

}  // namespace irsloc
