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
#include <span>
#include <vector>

namespace irsloc {

inline constexpr double kSimplexTolerance = 1e-12;

/// A point on the probability simplex: the share of the dwell window given to
/// each slot (or, for a single target, to each BS).
class TimeAllocation {
 public:
  /// Throws ValidationError unless every entry is in [0, 1] and the entries
  /// sum to one within kSimplexTolerance.
  explicit TimeAllocation(std::vector<double> eta);

  /// Rescales non-negative weights onto the simplex. Throws AllZeroAllocation
  /// if every weight is zero.
  static TimeAllocation normalized(std::span<const double> weights);
  static TimeAllocation uniform(std::size_t n);

  const std::vector<double>& values() const { return eta_; }
  std::size_t size() const { return eta_.size(); }
  double operator[](std::size_t i) const { return eta_[i]; }

  /// Number of entries strictly above `threshold`.
  std::size_t active_count(double threshold) const;
  double simplex_residual() const;

 private:
  std::vector<double> eta_;
};

}  // namespace irsloc
