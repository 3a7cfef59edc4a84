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

namespace irsloc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Radio and estimator constants, all in linear units.
struct RadioParams {
  double beta0 = 1e-3;     ///< channel power gain at 1 m
  double sigma_s2 = 1e-8;  ///< receiver noise power [W]
  double p_tx = 1.0;       ///< transmit power [W]
  double delta_T = 0.1;    ///< dwell window [s]
  double delta_t = 1e-6;   ///< symbol time [s]
  double c0 = 0.1;         ///< range-variance constant [m^2 per unit SNR]
  double d_min = 10.0;     ///< minimum BS-target distance for the analytic bound [m]

  /// Throws ValidationError("radio.<field>: ...") on the first violation.
  void validate() const;

  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

struct IrsSize {
  int lx = 40;
  int ly = 40;

  int elements() const { return lx * ly; }
  friend bool operator==(const IrsSize&, const IrsSize&) = default;
};

/// Immutable world description: BS sites, target prior centres, uncertainty
/// radius, IRS dimensions and radio constants.
///
/// All base stations share height `h_bs`; all IRSs share height `h_irs`.
/// Equal heights are allowed (every elevation becomes zero) and reported by
/// `level_heights()`.
class Scenario {
 public:
  Scenario(std::vector<Point2> bs_positions, std::vector<Point2> target_priors, double h_bs,
           double h_irs, double r_e, IrsSize irs, RadioParams radio);

  const std::vector<Point2>& bs_positions() const { return bs_; }
  const std::vector<Point2>& target_priors() const { return targets_; }
  std::size_t num_bs() const { return bs_.size(); }
  std::size_t num_targets() const { return targets_.size(); }
  double h_bs() const { return h_bs_; }
  double h_irs() const { return h_irs_; }
  double height_gap() const;
  bool level_heights() const { return h_bs_ == h_irs_; }
  double r_e() const { return r_e_; }
  const IrsSize& irs() const { return irs_; }
  const RadioParams& radio() const { return radio_; }

  // Copies with one ingredient replaced; the result is re-validated.
  Scenario with_radio(RadioParams radio) const;
  Scenario with_uncertainty(double r_e) const;
  Scenario with_irs(IrsSize irs) const;
  Scenario with_bs(std::vector<Point2> bs_positions) const;
  Scenario with_targets(std::vector<Point2> target_priors) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;

 private:
  std::vector<Point2> bs_;
  std::vector<Point2> targets_;
  double h_bs_;
  double h_irs_;
  double r_e_;
  IrsSize irs_;
  RadioParams radio_;
};

}  // namespace irsloc
