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

#include "irsloc/allocation.hpp"
#include "irsloc/channel.hpp"
#include "irsloc/plan.hpp"
#include "irsloc/scenario.hpp"

namespace irsloc {

/// Relative threshold below which the Fisher determinant is treated as zero:
/// det(FIM) <= kDegeneracyTolerance * trace(FIM)^2 reports an infinite CRLB.
inline constexpr double kDegeneracyTolerance = 1e-15;

struct RangeMeasurement {
  double azimuth = 0.0;    ///< rad
  double elevation = 0.0;  ///< rad
  double variance = 0.0;   ///< m^2
};

/// Range measurements of one target from the BSs that received dwell time.
class MeasurementSet {
 public:
  /// Requires at least two entries with finite, strictly positive variance.
  explicit MeasurementSet(std::vector<RangeMeasurement> entries);
  const std::vector<RangeMeasurement>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<RangeMeasurement> entries_;
};

/// Symmetric 2x2 matrix.
struct Matrix2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double trace() const { return xx + yy; }
  double determinant() const { return xx * yy - xy * xy; }
};

struct CrlbReport {
  double value = 0.0;  ///< tr(FIM^-1) in m^2, +inf when degenerate
  Matrix2 fim;
  bool degenerate = false;
};

/// J^T Sigma^-1 J with Jacobian rows (cos az cos el, sin az cos el).
Matrix2 fim(const MeasurementSet& ms);

/// Trace of the inverse FIM through the explicit ratio of sums. Collinear
/// geometry is reported in-band as {+inf, degenerate = true}.
CrlbReport crlb_closed_form(const MeasurementSet& ms);

/// CRLB from effective SNRs x_m = eta_m * gamma_tilde_m:
///   c0 * sum x / sum_{j<i} x_j x_i sin^2(az_i - az_j).
/// Entries with x_m == 0 drop out. Fewer than two positive entries, or a
/// vanishing denominator, gives {+inf, degenerate = true}.
CrlbReport crlb_from_snr(std::span<const double> x, std::span<const double> azimuths, double c0);

/// Scalar form of crlb_from_snr with x = eta * gamma_tilde. Throws
/// AllZeroAllocation when every eta is zero; degenerate geometry returns +inf.
double crlb_simplified(std::span<const double> etas, std::span<const double> gamma_tildes,
                       std::span<const double> azimuths, double c0);

/// Per-target CRLB under a slot plan: target k sees x_{k,m} =
/// sum_n b[k][m][n] eta_n gamma_tilde_{k,m}. Targets with fewer than two
/// associations report +inf.
std::vector<CrlbReport> crlb_multitarget(const AssociationPlan& plan,
                                         const TimeAllocation& etas, const BudgetTable& budgets,
                                         double c0);

/// Smallest achievable single-target CRLB when BSs can be placed freely at
/// distance d_min with Q = 1:
///   4 c0 dt d^6 sigma^2 / (p_tx dT beta0^2 L^2 (d^2 - h^2)).
/// Throws InvalidGeometry when d_min <= height_gap.
double analytic_lower_bound(const RadioParams& radio, int elements, double height_gap);

struct TwoBsOptimum {
  double eta1 = 0.5;
  double eta2 = 0.5;
  double crlb = 0.0;
};

/// Optimal split of the window between two BSs with equivalent SNRs g1, g2
/// whose azimuths differ by `azimuth_gap`. Throws DegenerateGeometry when the
/// gap is a multiple of pi.
TwoBsOptimum two_bs_optimal(double gamma1, double gamma2, double azimuth_gap, double c0);

/// Callable CRLB(eta) for one target with fixed per-BS gamma_tilde and
/// azimuths. Pairwise sin^2 terms are tabulated once; evaluation is O(M^2)
/// and allocation-free.
class SingleTargetCrlb {
 public:
  SingleTargetCrlb(std::vector<double> gamma_tildes, std::vector<double> azimuths, double c0);

  double operator()(std::span<const double> eta) const;
  std::size_t size() const { return gamma_.size(); }
  const std::vector<double>& gamma_tildes() const { return gamma_; }
  const std::vector<double>& azimuths() const { return azimuth_; }
  double c0() const { return c0_; }

  /// Objective for target k of a scenario over all of its BSs.
  static SingleTargetCrlb for_target(const BudgetTable& budgets, std::size_t k, double c0);

 private:
  std::vector<double> gamma_;
  std::vector<double> azimuth_;
  std::vector<double> sin2_;  // row-major M x M
  double c0_;
};

}  // namespace irsloc
