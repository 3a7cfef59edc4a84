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

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "irsloc/scenario.hpp"

namespace irsloc {

double db_to_linear(double db);
double linear_to_db(double linear);

/// Scenario file layout:
///
///   {
///     "bs": [[x, y], ...], "targets": [[x, y], ...],
///     "heights": {"bs_m": 5, "irs_m": 1},
///     "irs": {"L_x": 40, "L_y": 40},
///     "radio": {"beta0_db": -30, "sigma_s2_db": -80, "p_tx_w": 1,
///               "delta_T_s": 0.1, "delta_t_s": 1e-6, "c0": 0.1, "d_min_m": 10},
///     "r_e_m": 5
///   }
///
/// "beta0_linear" / "sigma_s2_linear" may replace the dB keys. Missing radio
/// keys take their defaults. Errors name the offending field.
Scenario scenario_from_json(const nlohmann::json& doc);

/// Writes dB keys when the dB value converts back to the identical linear
/// value, and linear keys otherwise, so reading back is exact.
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Throws ParseError for unreadable or malformed files, ValidationError for
/// values that break scenario invariants.
Scenario load_scenario(const std::filesystem::path& path);
void write_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Reference world: L = 40 x 40, beta0 = -30 dB, sigma^2 = -80 dB,
/// P = 1 W, r_e = 5 m, H_BS = 5 m, H_IRS = 1 m, dT = 0.1 s, dt = 1 us, c0 = 0.1,
/// with M = 4 BSs on the corners of a 200 m square and K = 10 targets inside.
Scenario default_scenario();

}  // namespace irsloc
