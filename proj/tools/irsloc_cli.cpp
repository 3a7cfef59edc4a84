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

// irsloc: command line driver for the localization experiments.
//
//   irsloc crlb            --scenario s.json [--eta 0.5,0.5,...]
//   irsloc optimize-single --scenario s.json [--min-three]
//   irsloc associate       --scenario s.json --scheme proposed,closest
//   irsloc simulate-mle    --scenario s.json --scheme proposed --trials 500
//   irsloc sweep power 0.05..1.0 --scenario s.json --scheme proposed --trials 500
//   irsloc bounds K=10 M=4
//   irsloc stats           --bs 10 --count 200
//   irsloc scenario        (prints the default scenario)
//
// Results go to <out>/results.csv with a run manifest in <out>/manifest.json,
// or to stdout when --out is not given.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "irsloc/association.hpp"
#include "irsloc/crlb.hpp"
#include "irsloc/errors.hpp"
#include "irsloc/estimator.hpp"
#include "irsloc/experiments.hpp"
#include "irsloc/polyblock.hpp"
#include "irsloc/scenario_io.hpp"

namespace {

using nlohmann::json;
using namespace irsloc;

struct Options {
  std::string scenario;
  std::string schemes = "proposed";
  std::size_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
  double epsilon = SolverConfig{}.epsilon;
  std::size_t max_iter = SolverConfig{}.max_iter;
  std::size_t threads = 0;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error("UsageError", what) {}
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("LOC_SEED"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw ValidationError("LOC_SEED: must be a non-negative integer");
    return v;
  }
  return 1;
}

SolverConfig solver_config(const Options& o) {
  SolverConfig c;
  c.epsilon = o.epsilon;
  c.max_iter = o.max_iter;
  if (!(c.epsilon > 0.0)) throw ValidationError("epsilon: must be positive");
  if (c.max_iter < 1) throw ValidationError("max-iter: must be at least 1");
  return c;
}

Scenario require_scenario(const Options& o) {
  if (o.scenario.empty()) throw UsageError("--scenario is required for this command");
  return load_scenario(o.scenario);
}

std::vector<Scheme> parse_schemes(const std::string& text) {
  std::vector<Scheme> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_scheme(item));
  if (out.empty()) throw ValidationError("scheme: no scheme given");
  return out;
}

json solver_json(const SolverConfig& c) {
  return {{"epsilon", c.epsilon}, {"max_iter", c.max_iter}};
}

// Collects CSV tables and writes them with a manifest.
class Report {
 public:
  Report(std::string command, const Options& options, json config)
      : command_(std::move(command)), options_(options), config_(std::move(config)) {}

  void table(std::string name, std::string header, std::vector<std::string> rows) {
    tables_.push_back({std::move(name), std::move(header), std::move(rows)});
  }

  void write() const {
    if (options_.out.empty()) {
      for (std::size_t i = 0; i < tables_.size(); ++i) {
        if (i) std::cout << '\n';
        std::cout << tables_[i].header << '\n';
        for (const auto& r : tables_[i].rows) std::cout << r << '\n';
      }
      return;
    }
    const std::filesystem::path dir(options_.out);
    std::filesystem::create_directories(dir);
    json files = json::array();
    for (const auto& t : tables_) {
      std::ofstream f(dir / t.name);
      if (!f) throw ParseError("out: cannot write " + (dir / t.name).string());
      f << t.header << '\n';
      for (const auto& r : t.rows) f << r << '\n';
      files.push_back(t.name);
    }
    json config = config_;
    config["command"] = command_;
    const std::string canonical = config.dump();
    json manifest = {{"command", command_},
                     {"version", IRSLOC_VERSION},
                     {"seed", config.value("seed", json())},
                     {"config_hash", "fnv1a64:" + hex64(fnv1a(canonical))},
                     {"config", config},
                     {"outputs", files}};
    std::ofstream m(dir / "manifest.json");
    if (!m) throw ParseError("out: cannot write " + (dir / "manifest.json").string());
    m << manifest.dump(2) << '\n';
  }

 private:
  struct Table {
    std::string name;
    std::string header;
    std::vector<std::string> rows;
  };
  std::string command_;
  const Options& options_;
  json config_;
  std::vector<Table> tables_;
};

// Comma list without the ordering requirement of sweep values.
std::vector<double> parse_values_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw ValidationError("eta: '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::string join(const std::vector<double>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_number(v[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Commands

void cmd_crlb(const Options& o, const std::string& eta_text) {
  const Scenario s = require_scenario(o);
  const BudgetTable budgets(s);
  std::vector<double> eta(s.num_bs(), 1.0 / static_cast<double>(s.num_bs()));
  if (!eta_text.empty()) {
    eta = parse_values_list(eta_text);
  }
  if (eta.size() != s.num_bs())
    throw ValidationError("eta: expected " + std::to_string(s.num_bs()) + " shares");
  const auto alloc = TimeAllocation(eta);
  std::vector<std::string> rows;
  for (std::size_t k = 0; k < s.num_targets(); ++k) {
    const auto f = SingleTargetCrlb::for_target(budgets, k, s.radio().c0);
    const double v = f(alloc.values());
    rows.push_back(std::to_string(k) + ',' + std::to_string(s.num_bs()) + ',' + format_number(v) +
                   ',' + (std::isfinite(v) ? "0" : "1"));
  }
  Report r("crlb", o, {{"scenario", scenario_to_json(s)}, {"eta", eta}});
  r.table("results.csv", "target,M,crlb,degenerate", std::move(rows));
  r.write();
}

void cmd_optimize_single(const Options& o, bool min_three) {
  const Scenario s = require_scenario(o);
  const BudgetTable budgets(s);
  const auto cfg = solver_config(o);
  std::vector<std::string> rows;
  const double bound = analytic_lower_bound(s.radio(), s.irs().elements(), s.height_gap());
  for (std::size_t k = 0; k < s.num_targets(); ++k) {
    SingleTargetRow row;
    if (min_three) {
      const auto f = SingleTargetCrlb::for_target(budgets, k, s.radio().c0);
      const auto res = solve_single_min_three(
          [&f](std::span<const double> e) { return f(e); }, f.size(), cfg);
      row.target = k;
      row.crlb = res.value;
      row.eta = res.allocation.values();
      row.active = res.allocation.active_count(kActiveShareThreshold);
      row.iterations = res.iterations;
      row.converged = res.converged;
      row.min_active_eta = 1.0;
      for (double e : row.eta)
        if (e > kActiveShareThreshold) row.min_active_eta = std::min(row.min_active_eta, e);
    } else {
      row = optimize_single(budgets, k, s.radio().c0, cfg);
    }
    rows.push_back(std::to_string(k) + ',' + format_number(row.crlb) + ',' +
                   format_number(bound) + ',' + std::to_string(row.active) + ',' +
                   format_number(row.min_active_eta) + ',' + (row.converged ? "1" : "0") + ',' +
                   std::to_string(row.iterations) + ',' + join(row.eta, ';'));
  }
  Report r("optimize-single", o,
           {{"scenario", scenario_to_json(s)}, {"solver", solver_json(cfg)}, {"min_three", min_three}});
  r.table("results.csv",
          "target,crlb,analytic_lower_bound,active,min_active_eta,converged,iterations,eta",
          std::move(rows));
  r.write();
}

void cmd_associate(const Options& o) {
  const Scenario s = require_scenario(o);
  const auto cfg = solver_config(o);
  const auto schemes = parse_schemes(o.schemes);
  const BudgetTable budgets(s);
  const auto graph = build_interference_graph(budgets);
  std::vector<std::string> summary;
  std::vector<std::string> plan_rows;
  for (Scheme sc : schemes) {
    const auto res = run_scheme(s, budgets, graph, sc, cfg);
    SchemeRow row;
    row.scheme = sc;
    row.num_targets = s.num_targets();
    row.num_bs = s.num_bs();
    row.num_slots = res.plan.num_slots();
    row.associations = res.plan.total_associations();
    row.max_crlb = res.max_crlb;
    double sum = 0.0;
    for (double c : res.crlb) sum += c;
    row.mean_crlb = sum / static_cast<double>(res.crlb.size());
    row.converged = res.converged;
    summary.push_back(scheme_csv_row(row));
    for (std::size_t n = 0; n < res.plan.num_slots(); ++n)
      for (std::size_t k = 0; k < s.num_targets(); ++k)
        for (std::size_t m = 0; m < s.num_bs(); ++m)
          if (res.plan.at(k, m, n))
            plan_rows.push_back(std::string(scheme_name(sc)) + ',' + std::to_string(n) + ',' +
                                format_number(res.allocation[n]) + ',' + std::to_string(k) + ',' +
                                std::to_string(m) + ',' + format_number(res.crlb[k]));
  }
  Report r("associate", o,
           {{"scenario", scenario_to_json(s)}, {"solver", solver_json(cfg)}, {"schemes", o.schemes}});
  r.table("results.csv", scheme_csv_header(), std::move(summary));
  r.table("plan.csv", "scheme,slot,eta,target,bs,target_crlb", std::move(plan_rows));
  r.write();
}

void cmd_simulate(const Options& o) {
  const Scenario s = require_scenario(o);
  const auto cfg = solver_config(o);
  const auto seed = resolve_seed(o);
  const std::size_t trials = o.trials ? o.trials : 500;
  std::vector<std::string> rows;
  for (Scheme sc : parse_schemes(o.schemes))
    rows.push_back(scheme_csv_row(evaluate_scheme(s, sc, cfg, trials, seed)));
  Report r("simulate-mle", o,
           {{"scenario", scenario_to_json(s)},
            {"solver", solver_json(cfg)},
            {"schemes", o.schemes},
            {"trials", trials},
            {"seed", seed}});
  r.table("results.csv", scheme_csv_header(), std::move(rows));
  r.write();
}

void cmd_sweep(const Options& o, const std::vector<std::string>& positional,
               const std::vector<std::string>& sweep_flag) {
  std::vector<std::string> spec = sweep_flag.empty() ? positional : sweep_flag;
  if (spec.size() != 2) throw UsageError("sweep: expected an axis and a value list");
  const Scenario s = require_scenario(o);
  const auto cfg = solver_config(o);
  const auto seed = resolve_seed(o);
  const auto axis = parse_axis(spec[0]);
  const auto values = parse_values(spec[1]);
  const auto schemes = parse_schemes(o.schemes);
  const auto rows = run_sweep(s, axis, values, schemes, cfg, o.trials, seed, o.threads);
  std::vector<std::string> lines;
  for (const auto& r : rows) lines.push_back(scheme_csv_row(r));
  Report r("sweep", o,
           {{"scenario", scenario_to_json(s)},
            {"solver", solver_json(cfg)},
            {"schemes", o.schemes},
            {"axis", spec[0]},
            {"values", values},
            {"trials", o.trials},
            {"seed", seed}});
  r.table("results.csv", scheme_csv_header(), std::move(lines));
  r.write();
}

void cmd_bounds(const Options& o, const std::vector<std::string>& tokens, std::size_t k_flag,
                std::size_t m_flag, std::size_t n_flag) {
  std::size_t K = k_flag;
  std::size_t M = m_flag;
  std::size_t N = n_flag;
  for (const auto& t : tokens) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError("bounds: expected NAME=VALUE, got '" + t + "'");
    const std::string name = t.substr(0, eq);
    std::size_t value = 0;
    try {
      std::size_t used = 0;
      value = std::stoul(t.substr(eq + 1), &used);
      if (used != t.size() - eq - 1) throw std::invalid_argument(t);
    } catch (const std::logic_error&) {
      throw ValidationError("bounds." + name + ": must be a non-negative integer");
    }
    if (name == "K")
      K = value;
    else if (name == "M")
      M = value;
    else if (name == "N")
      N = value;
    else
      throw UsageError("bounds: unknown parameter '" + name + "'");
  }
  if (K == 0 || M == 0) throw UsageError("bounds: K and M are required");
  std::vector<std::string> rows;
  for (auto model : {InterferenceModel::none, InterferenceModel::full}) {
    const std::size_t nmin = min_slots(K, M, model);
    const std::size_t n = N ? N : nmin;
    rows.push_back(std::to_string(K) + ',' + std::to_string(M) + ',' +
                   (model == InterferenceModel::none ? "none" : "full") + ',' +
                   std::to_string(nmin) + ',' + std::to_string(n) + ',' +
                   std::to_string(max_targets(M, n, model)));
  }
  Report r("bounds", o, {{"K", K}, {"M", M}, {"N", N}});
  r.table("results.csv", "K,M,interference,N_min,N,K_max", std::move(rows));
  r.write();
}

void cmd_stats(const Options& o, std::size_t num_bs, std::size_t count) {
  const Scenario base = o.scenario.empty() ? default_scenario() : load_scenario(o.scenario);
  const auto cfg = solver_config(o);
  const auto seed = resolve_seed(o);
  const auto t = stats_table(base, num_bs, count, seed, cfg);
  std::vector<std::string> rows;
  for (const auto& b : t.bins)
    rows.push_back(std::to_string(b.active) + ',' + std::to_string(b.count) + ',' +
                   format_number(b.fraction) + ',' +
                   (b.count ? format_number(b.min_eta) : std::string()));
  Report r("stats", o,
           {{"scenario", scenario_to_json(base)},
            {"solver", solver_json(cfg)},
            {"bs", num_bs},
            {"count", count},
            {"seed", seed},
            {"unconverged", t.unconverged}});
  r.table("results.csv", "active_bs,count,fraction,min_eta", std::move(rows));
  r.write();
}

int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-aided cooperative localization experiments"};
  app.set_version_flag("--version", std::string(IRSLOC_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--scenario", o.scenario, "Scenario JSON file");
  app.add_option("--scheme", o.schemes,
                 "Scheme or comma list: proposed, average, closest, time_division");
  app.add_option("--trials", o.trials, "Monte Carlo trials (0 = CRLB only)");
  app.add_option("--seed", o.seed, "Master seed (falls back to LOC_SEED, then 1)");
  app.add_option("--out", o.out, "Output directory for results.csv and manifest.json");
  app.add_option("--epsilon", o.epsilon, "Polyblock relative tolerance");
  app.add_option("--max-iter", o.max_iter, "Polyblock iteration cap");
  app.add_option("--threads", o.threads, "Worker threads for sweeps (0 = all cores)");

  auto* crlb = app.add_subcommand("crlb", "CRLB per target for a given allocation over all BSs");
  std::string eta_text;
  crlb->add_option("--eta", eta_text, "Comma list of shares, one per BS (default uniform)");

  auto* single = app.add_subcommand("optimize-single", "Optimal single-target time allocation");
  bool min_three = false;
  single->add_flag("--min-three", min_three, "Force at least three associated BSs");

  auto* assoc = app.add_subcommand("associate", "Association plan and min-max CRLB per scheme");
  auto* mle = app.add_subcommand("simulate-mle", "Monte Carlo MLE against the CRLB");

  auto* sweep = app.add_subcommand("sweep", "Sweep one axis: power, L, M, K or r_e");
  std::vector<std::string> sweep_pos;
  std::vector<std::string> sweep_flag;
  sweep->add_option("axis_values", sweep_pos, "AXIS VALUES, e.g. power 0.05..1.0:20");
  sweep->add_option("--sweep", sweep_flag, "AXIS VALUES")->expected(2);

  auto* bounds = app.add_subcommand("bounds", "Slot and target counting bounds");
  std::vector<std::string> bound_tokens;
  std::size_t bk = 0;
  std::size_t bm = 0;
  std::size_t bn = 0;
  bounds->add_option("params", bound_tokens, "K=<targets> M=<BSs> [N=<slots>]");
  bounds->add_option("--K", bk, "Targets");
  bounds->add_option("--M", bm, "BSs");
  bounds->add_option("--N", bn, "Slots for the K_max column (default N_min)");

  auto* stats = app.add_subcommand("stats", "Associated-BS histogram over random placements");
  std::size_t stats_bs = 10;
  std::size_t stats_count = 200;
  stats->add_option("--bs", stats_bs, "BSs per placement");
  stats->add_option("--count", stats_count, "Number of placements");

  auto* scen = app.add_subcommand("scenario", "Print the default scenario file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("UsageError", e.what(), 2);
  }

  try {
    if (*crlb) cmd_crlb(o, eta_text);
    if (*single) cmd_optimize_single(o, min_three);
    if (*assoc) cmd_associate(o);
    if (*mle) cmd_simulate(o);
    if (*sweep) cmd_sweep(o, sweep_pos, sweep_flag);
    if (*bounds) cmd_bounds(o, bound_tokens, bk, bm, bn);
    if (*stats) cmd_stats(o, stats_bs, stats_count);
    if (*scen) {
      if (o.out.empty())
        std::cout << scenario_to_json(default_scenario()).dump(2) << '\n';
      else
        write_scenario(default_scenario(), o.out);
    }
  } catch (const UsageError& e) {
    return fail(e.kind(), e.what(), 2);
  } catch (const Error& e) {
    return fail(e.kind(), e.what(), 1);
  } catch (const std::exception& e) {
    return fail("InternalError", e.what(), 1);
  }
  return 0;
}
