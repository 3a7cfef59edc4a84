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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "irsloc/errors.hpp"

namespace irsloc {
namespace {

int count_for_axis(int elements, double width) {
  // Slack keeps exact squares such as sqrt(40 * 0.2 / 2) == 2 from rounding up.
  const double raw = std::sqrt(elements * std::max(width, 0.0) / 2.0);
  const int q = static_cast<int>(std::ceil(raw - 1e-9));
  return std::clamp(q, 1, elements);
}

// sin(pi L d / 2) / sin(pi d / 2), continuous at the zeros of the denominator.
double dirichlet(double delta, int l) {
  const double den = std::sin(std::numbers::pi * delta / 2.0);
  if (std::abs(den) < 1e-15) {
    const double j = std::round(delta / 2.0);
    const bool odd = std::fmod(std::abs(j * (l - 1)), 2.0) == 1.0;
    return odd ? -static_cast<double>(l) : static_cast<double>(l);
  }
  return std::sin(std::numbers::pi * l * delta / 2.0) / den;
}

}  // namespace

SubarrayCounts subarray_counts(int l_x, int l_y, Span phi_span, Span omega_span) {
  return {count_for_axis(l_x, phi_span.width()), count_for_axis(l_y, omega_span.width())};
}

double flattened_gain(double delta_phi, double delta_omega, int l_x_sub, int l_y_sub) {
  return dirichlet(delta_phi, l_x_sub) * dirichlet(delta_omega, l_y_sub);
}

std::vector<double> subarray_directions(double lo, double hi, int q, int l_sub) {
  if (q <= 1) return {0.5 * (lo + hi)};
  std::vector<double> centres(static_cast<std::size_t>(q));
  const double step = 2.0 / l_sub;
  for (int i = 0; i < q; ++i) centres[static_cast<std::size_t>(i)] = lo + step / 2.0 + i * step;
  return centres;
}

double baseline_snr(const RadioParams& radio, int elements, double distance, int q) {
  const double l = static_cast<double>(elements);
  const double d2 = distance * distance;
  return radio.p_tx * radio.beta0 * radio.beta0 * radio.delta_T * l * l /
         (static_cast<double>(q) * q * radio.delta_t * d2 * d2 * radio.sigma_s2);
}

LinkBudget link_budget(const Scenario& scenario, std::size_t k, std::size_t m) {
  LinkBudget b;
  b.geometry = link_geometry(scenario, k, m);
  const auto counts = subarray_counts(scenario.irs().lx, scenario.irs().ly, b.geometry.phi_span,
                                      b.geometry.omega_span);
  b.q_x = counts.q_x;
  b.q_y = counts.q_y;
  b.q = counts.q_x * counts.q_y;
  b.l_x_sub = scenario.irs().lx / counts.q_x;
  b.l_y_sub = scenario.irs().ly / counts.q_y;
  b.gamma_bar = baseline_snr(scenario.radio(), scenario.irs().elements(), b.geometry.distance, b.q);
  const double c = std::cos(b.geometry.elevation);
  b.gamma_tilde = b.gamma_bar * c * c;
  return b;
}

double measurement_variance(double gamma, double c0) {
  if (!(gamma > 0.0)) throw InfiniteVariance("link has zero SNR (no dwell time allocated)");
  if (std::isinf(gamma)) return 0.0;
  return c0 / gamma;
}

BudgetTable::BudgetTable(const Scenario& scenario)
    : rows_(scenario.num_targets()), cols_(scenario.num_bs()) {
  cells_.reserve(rows_ * cols_);
  for (std::size_t k = 0; k < rows_; ++k)
    for (std::size_t m = 0; m < cols_; ++m) cells_.push_back(link_budget(scenario, k, m));
}

BudgetTable BudgetTable::select_targets(const std::vector<std::size_t>& targets) const {
  BudgetTable out;
  out.rows_ = targets.size();
  out.cols_ = cols_;
  out.cells_.reserve(out.rows_ * cols_);
  for (std::size_t k : targets)
    for (std::size_t m = 0; m < cols_; ++m) out.cells_.push_back(at(k, m));
  return out;
}

}  // namespace irsloc
