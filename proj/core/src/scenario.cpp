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

#include "irsloc/scenario.hpp"

#include <cmath>
#include <sstream>

#include "irsloc/errors.hpp"

namespace irsloc {
namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ValidationError(field + ": " + what);
}

void require_positive(double v, const std::string& field) {
  require(std::isfinite(v) && v > 0.0, field, "must be finite and strictly positive");
}

void validate_points(const std::vector<Point2>& pts, const std::string& field) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::ostringstream path;
    path << field << "[" << i << "]";
    require(std::isfinite(pts[i].x) && std::isfinite(pts[i].y), path.str(),
            "coordinates must be finite");
  }
}

}  // namespace

void RadioParams::validate() const {
  require_positive(beta0, "radio.beta0");
  require_positive(sigma_s2, "radio.sigma_s2");
  require_positive(p_tx, "radio.p_tx");
  require_positive(delta_T, "radio.delta_T");
  require_positive(delta_t, "radio.delta_t");
  require_positive(c0, "radio.c0");
  require_positive(d_min, "radio.d_min");
  require(delta_t <= delta_T, "radio.delta_t", "symbol time must not exceed the dwell window");
}

Scenario::Scenario(std::vector<Point2> bs_positions, std::vector<Point2> target_priors,
                   double h_bs, double h_irs, double r_e, IrsSize irs, RadioParams radio)
    : bs_(std::move(bs_positions)),
      targets_(std::move(target_priors)),
      h_bs_(h_bs),
      h_irs_(h_irs),
      r_e_(r_e),
      irs_(irs),
      radio_(radio) {
  require(bs_.size() >= 2, "bs", "at least two base stations are required");
  require(!targets_.empty(), "targets", "at least one target is required");
  validate_points(bs_, "bs");
  validate_points(targets_, "targets");
  require(std::isfinite(h_bs_), "heights.bs_m", "must be finite");
  require(std::isfinite(h_irs_), "heights.irs_m", "must be finite");
  require(std::isfinite(r_e_) && r_e_ >= 0.0, "r_e_m", "must be finite and non-negative");
  require(irs_.lx >= 1, "irs.L_x", "must be at least 1");
  require(irs_.ly >= 1, "irs.L_y", "must be at least 1");
  radio_.validate();
}

double Scenario::height_gap() const { return std::abs(h_bs_ - h_irs_); }

Scenario Scenario::with_radio(RadioParams radio) const {
  return Scenario(bs_, targets_, h_bs_, h_irs_, r_e_, irs_, radio);
}

Scenario Scenario::with_uncertainty(double r_e) const {
  return Scenario(bs_, targets_, h_bs_, h_irs_, r_e, irs_, radio_);
}

Scenario Scenario::with_irs(IrsSize irs) const {
  return Scenario(bs_, targets_, h_bs_, h_irs_, r_e_, irs, radio_);
}

Scenario Scenario::with_bs(std::vector<Point2> bs_positions) const {
  return Scenario(std::move(bs_positions), targets_, h_bs_, h_irs_, r_e_, irs_, radio_);
}

Scenario Scenario::with_targets(std::vector<Point2> target_priors) const {
  return Scenario(bs_, std::move(target_priors), h_bs_, h_irs_, r_e_, irs_, radio_);
}

}  // namespace irsloc
