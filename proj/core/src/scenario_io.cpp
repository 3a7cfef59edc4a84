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

#include "irsloc/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "irsloc/errors.hpp"

namespace irsloc {
namespace {

using nlohmann::json;

double number(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + ": missing");
  if (!it->is_number()) throw ValidationError(path + ": must be a number");
  return it->get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& path,
                 double fallback) {
  return obj.contains(key) ? number(obj, key, path) : fallback;
}

int integer(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + ": missing");
  if (!it->is_number_integer()) throw ValidationError(path + ": must be an integer");
  return it->get<int>();
}

const json& object(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + ": missing");
  if (!it->is_object()) throw ValidationError(path + ": must be an object");
  return *it;
}

std::vector<Point2> points(const json& doc, const std::string& key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ValidationError(key + ": missing");
  if (!it->is_array()) throw ValidationError(key + ": must be an array of [x, y] pairs");
  std::vector<Point2> out;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& p = (*it)[i];
    const std::string path = key + "[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw ValidationError(path + ": must be an [x, y] pair of numbers");
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

// Either "<name>_db" or "<name>_linear"; both at once is rejected.
double db_or_linear(const json& radio, const std::string& name, double fallback) {
  const bool db = radio.contains(name + "_db");
  const bool lin = radio.contains(name + "_linear");
  if (db && lin)
    throw ValidationError("radio." + name + "_db: give either the dB or the linear value");
  if (db) return db_to_linear(number(radio, name + "_db", "radio." + name + "_db"));
  if (lin) return number(radio, name + "_linear", "radio." + name + "_linear");
  return fallback;
}

void put_db_or_linear(json& radio, const std::string& name, double linear) {
  const double db = linear_to_db(linear);
  if (db_to_linear(db) == linear)
    radio[name + "_db"] = db;
  else
    radio[name + "_linear"] = linear;
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("scenario: top level must be a JSON object");
  const auto bs = points(doc, "bs");
  const auto targets = points(doc, "targets");
  const auto& heights = object(doc, "heights", "heights");
  const double h_bs = number(heights, "bs_m", "heights.bs_m");
  const double h_irs = number(heights, "irs_m", "heights.irs_m");
  const auto& irs_obj = object(doc, "irs", "irs");
  const IrsSize irs{integer(irs_obj, "L_x", "irs.L_x"), integer(irs_obj, "L_y", "irs.L_y")};
  const double r_e = number(doc, "r_e_m", "r_e_m");

  RadioParams radio;
  if (doc.contains("radio")) {
    const auto& r = object(doc, "radio", "radio");
    radio.beta0 = db_or_linear(r, "beta0", radio.beta0);
    radio.sigma_s2 = db_or_linear(r, "sigma_s2", radio.sigma_s2);
    radio.p_tx = number_or(r, "p_tx_w", "radio.p_tx_w", radio.p_tx);
    radio.delta_T = number_or(r, "delta_T_s", "radio.delta_T_s", radio.delta_T);
    radio.delta_t = number_or(r, "delta_t_s", "radio.delta_t_s", radio.delta_t);
    radio.c0 = number_or(r, "c0", "radio.c0", radio.c0);
    radio.d_min = number_or(r, "d_min_m", "radio.d_min_m", radio.d_min);
  }
  return Scenario(bs, targets, h_bs, h_irs, r_e, irs, radio);
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["bs"] = json::array();
  for (const auto& p : s.bs_positions()) doc["bs"].push_back({p.x, p.y});
  doc["targets"] = json::array();
  for (const auto& p : s.target_priors()) doc["targets"].push_back({p.x, p.y});
  doc["heights"] = {{"bs_m", s.h_bs()}, {"irs_m", s.h_irs()}};
  doc["irs"] = {{"L_x", s.irs().lx}, {"L_y", s.irs().ly}};
  json radio = json::object();
  put_db_or_linear(radio, "beta0", s.radio().beta0);
  put_db_or_linear(radio, "sigma_s2", s.radio().sigma_s2);
  radio["p_tx_w"] = s.radio().p_tx;
  radio["delta_T_s"] = s.radio().delta_T;
  radio["delta_t_s"] = s.radio().delta_t;
  radio["c0"] = s.radio().c0;
  radio["d_min_m"] = s.radio().d_min;
  doc["radio"] = radio;
  doc["r_e_m"] = s.r_e();
  return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("scenario: cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("scenario: " + path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

void write_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("scenario: cannot write '" + path.string() + "'");
  out << scenario_to_json(scenario).dump(2) << '\n';
}

Scenario default_scenario() {
  std::vector<Point2> bs{{0, 0}, {200, 0}, {200, 200}, {0, 200}};
  std::vector<Point2> targets{{60, 80},  {100, 100}, {140, 60}, {80, 140}, {150, 150},
                              {40, 120}, {120, 30},  {170, 110}, {30, 40}, {110, 170}};
  RadioParams radio;
  radio.beta0 = db_to_linear(-30.0);
  radio.sigma_s2 = db_to_linear(-80.0);
  return Scenario(std::move(bs), std::move(targets), 5.0, 1.0, 5.0, IrsSize{40, 40}, radio);
}

}  // namespace irsloc
