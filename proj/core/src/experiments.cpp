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

#include "irsloc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "irsloc/crlb.hpp"
#include "irsloc/errors.hpp"

namespace irsloc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double parse_double(std::string_view s, std::string_view what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ValidationError(std::string(what) + ": '" + std::string(s) + "' is not a number");
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Generators

Scenario symmetric_ring_scenario(std::size_t num_bs, const Scenario& base) {
  const double h = base.height_gap();
  const double d = base.radio().d_min;
  if (!(d > h)) throw InvalidGeometry("d_min must exceed the BS-IRS height difference");
  const double rho = std::sqrt(d * d - h * h);
  std::vector<Point2> bs;
  for (std::size_t m = 0; m < num_bs; ++m) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(num_bs);
    bs.push_back({rho * std::cos(a), rho * std::sin(a)});
  }
  return Scenario(std::move(bs), {{0.0, 0.0}}, base.h_bs(), base.h_irs(), 0.0, base.irs(),
                  base.radio());
}

Scenario random_scenario(const Scenario& base, const RandomLayout& layout, std::mt19937_64& rng) {
  if (layout.num_bs < 2 || layout.num_targets < 1)
    throw ValidationError("layout: need at least two BSs and one target");
  if (!(layout.side > 2.0 * layout.target_margin))
    throw ValidationError("layout.side: must exceed twice the target margin");
  std::uniform_real_distribution<double> area(0.0, layout.side);
  std::uniform_real_distribution<double> inner(layout.target_margin,
                                               layout.side - layout.target_margin);
  std::vector<Point2> targets;
  for (std::size_t k = 0; k < layout.num_targets; ++k) {
    const double x = inner(rng);
    targets.push_back({x, inner(rng)});
  }
  const double keep = base.r_e() + layout.clearance;
  std::vector<Point2> bs;
  std::size_t attempts = 0;
  while (bs.size() < layout.num_bs) {
    if (++attempts > 100000) throw ValidationError("layout: cannot place BSs away from targets");
    const double x = area(rng);
    const Point2 p{x, area(rng)};
    const bool clear = std::all_of(targets.begin(), targets.end(), [&](const Point2& t) {
      return std::hypot(p.x - t.x, p.y - t.y) > keep;
    });
    if (clear) bs.push_back(p);
  }
  return Scenario(std::move(bs), std::move(targets), base.h_bs(), base.h_irs(), base.r_e(),
                  base.irs(), base.radio());
}

// ---------------------------------------------------------------------------
// Single target

SingleTargetRow optimize_single(const BudgetTable& budgets, std::size_t k, double c0,
                                const SolverConfig& config) {
  const auto f = SingleTargetCrlb::for_target(budgets, k, c0);
  const auto res = solve_single([&f](std::span<const double> e) { return f(e); }, f.size(), config);
  SingleTargetRow row;
  row.target = k;
  row.crlb = res.value;
  row.eta = res.allocation.values();
  row.active = res.allocation.active_count(kActiveShareThreshold);
  row.min_active_eta = kNaN;
  for (double e : row.eta)
    if (e > kActiveShareThreshold && !(row.min_active_eta <= e)) row.min_active_eta = e;
  row.iterations = res.iterations;
  row.converged = res.converged;
  return row;
}

StatsTable stats_table(const Scenario& base, std::size_t num_bs, std::size_t scenarios,
                       std::uint64_t seed, const SolverConfig& config) {
  StatsTable t;
  t.scenarios = scenarios;
  t.num_bs = num_bs;
  for (std::size_t a = 1; a <= num_bs; ++a) t.bins.push_back({a, 0, 0.0, kNaN});
  RandomLayout layout;
  layout.num_bs = num_bs;
  layout.num_targets = 1;
  for (std::size_t i = 0; i < scenarios; ++i) {
    std::mt19937_64 rng(trial_seed(seed, i));
    const Scenario s = random_scenario(base, layout, rng);
    const BudgetTable budgets(s);
    const auto row = optimize_single(budgets, 0, s.radio().c0, config);
    if (!row.converged) ++t.unconverged;
    auto& bin = t.bins.at(std::max<std::size_t>(row.active, 1) - 1);
    ++bin.count;
    if (!(bin.min_eta <= row.min_active_eta)) bin.min_eta = row.min_active_eta;
  }
  for (auto& b : t.bins)
    b.fraction = scenarios ? static_cast<double>(b.count) / static_cast<double>(scenarios) : 0.0;
  return t;
}

// ---------------------------------------------------------------------------
// Sweeps

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::power: return "power";
    case SweepAxis::elements: return "L";
    case SweepAxis::num_bs: return "M";
    case SweepAxis::num_targets: return "K";
    case SweepAxis::uncertainty: return "r_e";
  }
  return "unknown";
}

SweepAxis parse_axis(std::string_view name) {
  for (auto a : {SweepAxis::power, SweepAxis::elements, SweepAxis::num_bs,
                 SweepAxis::num_targets, SweepAxis::uncertainty})
    if (axis_name(a) == name) return a;
  throw ValidationError("sweep.axis: unknown axis '" + std::string(name) +
                        "' (expected power, L, M, K or r_e)");
}

Scenario apply_axis(const Scenario& base, SweepAxis axis, double value) {
  const auto whole = [&](std::string_view what) {
    if (value != std::floor(value) || value < 1.0)
      throw ValidationError("sweep." + std::string(what) + ": values must be positive integers");
    return static_cast<std::size_t>(value);
  };
  switch (axis) {
    case SweepAxis::power: {
      RadioParams r = base.radio();
      r.p_tx = value;
      return base.with_radio(r);
    }
    case SweepAxis::elements: {
      const int l = static_cast<int>(whole("L"));
      return base.with_irs({l, l});
    }
    case SweepAxis::num_bs: {
      const std::size_t m = whole("M");
      if (m > base.num_bs())
        throw ValidationError("sweep.M: scenario has only " + std::to_string(base.num_bs()) +
                              " BSs");
      return base.with_bs({base.bs_positions().begin(),
                           base.bs_positions().begin() + static_cast<std::ptrdiff_t>(m)});
    }
    case SweepAxis::num_targets: {
      const std::size_t k = whole("K");
      if (k > base.num_targets())
        throw ValidationError("sweep.K: scenario has only " +
                              std::to_string(base.num_targets()) + " targets");
      return base.with_targets({base.target_priors().begin(),
                                base.target_priors().begin() + static_cast<std::ptrdiff_t>(k)});
    }
    case SweepAxis::uncertainty:
      return base.with_uncertainty(value);
  }
  throw ValidationError("sweep.axis: unknown axis");
}

std::vector<double> parse_values(std::string_view text) {
  std::vector<double> out;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    std::string_view rest = text.substr(dots + 2);
    std::size_t count = 10;
    if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
      const double c = parse_double(rest.substr(colon + 1), "sweep.values");
      if (c < 2 || c != std::floor(c))
        throw ValidationError("sweep.values: point count must be an integer >= 2");
      count = static_cast<std::size_t>(c);
      rest = rest.substr(0, colon);
    }
    const double lo = parse_double(text.substr(0, dots), "sweep.values");
    const double hi = parse_double(rest, "sweep.values");
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(i + 1 == count ? hi
                                   : lo + (hi - lo) * static_cast<double>(i) /
                                              static_cast<double>(count - 1));
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      const auto end = comma == std::string_view::npos ? text.size() : comma;
      out.push_back(parse_double(text.substr(start, end - start), "sweep.values"));
      start = end + 1;
    }
  }
  if (out.empty()) throw ValidationError("sweep.values: no values given");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1]))
      throw ValidationError("sweep.values: values must be strictly increasing");
  return out;
}

SchemeRow evaluate_scheme(const Scenario& scenario, Scheme scheme, const SolverConfig& solver,
                          std::size_t trials, std::uint64_t seed) {
  const auto r = run_scheme(scenario, scheme, solver);
  SchemeRow row;
  row.scheme = scheme;
  row.num_targets = scenario.num_targets();
  row.num_bs = scenario.num_bs();
  row.num_slots = r.plan.num_slots();
  row.associations = r.plan.total_associations();
  row.max_crlb = r.max_crlb;
  double sum = 0.0;
  for (double c : r.crlb) sum += c;
  row.mean_crlb = sum / static_cast<double>(r.crlb.size());
  row.converged = r.converged;
  if (trials > 0) {
    MonteCarloOptions mc;
    mc.trials = trials;
    mc.seed = seed;
    mc.threads = 1;  // sweep points already run in parallel
    row.mc = monte_carlo(scenario, r.plan, r.allocation, mc);
  }
  return row;
}

std::vector<SchemeRow> run_sweep(const Scenario& base, SweepAxis axis,
                                 const std::vector<double>& values,
                                 const std::vector<Scheme>& schemes, const SolverConfig& solver,
                                 std::size_t trials, std::uint64_t seed, std::size_t threads) {
  const std::size_t total = values.size() * schemes.size();
  std::vector<std::optional<SchemeRow>> rows(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        const double v = values[i / schemes.size()];
        auto row = evaluate_scheme(apply_axis(base, axis, v), schemes[i % schemes.size()], solver,
                                   trials, seed);
        row.axis = axis_name(axis);
        row.value = v;
        rows[i] = std::move(row);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(total, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<SchemeRow> out;
  out.reserve(total);
  for (auto& r : rows) out.push_back(std::move(*r));
  return out;
}

std::string scheme_csv_header() {
  return "axis,value,scheme,K,M,N,associations,max_crlb,mean_crlb,converged,"
         "trials,mse,mse_std_error,mse_over_crlb,ambiguous,seed";
}

std::string scheme_csv_row(const SchemeRow& r) {
  std::ostringstream s;
  s << r.axis << ',' << (r.axis.empty() ? std::string() : format_number(r.value)) << ','
    << scheme_name(r.scheme) << ',' << r.num_targets << ',' << r.num_bs << ',' << r.num_slots
    << ',' << r.associations << ',' << format_number(r.max_crlb) << ','
    << format_number(r.mean_crlb) << ',' << (r.converged ? 1 : 0) << ',';
  if (r.mc) {
    s << r.mc->trials << ',' << format_number(r.mc->mse) << ',' << format_number(r.mc->std_error)
      << ',' << format_number(r.mc->mse / r.mc->crlb) << ',' << r.mc->ambiguous << ','
      << r.mc->seed;
  } else {
    s << "0,,,,,";
  }
  return s.str();
}

// ---------------------------------------------------------------------------
// Manifest helpers

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
  return s;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

}  // namespace irsloc
