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


#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "irsloc/association.hpp"
#include "irsloc/crlb.hpp"
#include "irsloc/estimator.hpp"
#include "irsloc/experiments.hpp"
#include "irsloc/polyblock.hpp"
#include "irsloc/scenario_io.hpp"

namespace irsloc {
namespace {

SingleTargetCrlb random_target(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> az(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> lg(3.0, 8.0);
  std::vector<double> g(m), a(m);
  for (std::size_t i = 0; i < m; ++i) {
    g[i] = std::pow(10.0, lg(rng));
    a[i] = az(rng);
  }
  return SingleTargetCrlb(g, a, 0.1);
}

void BM_ClosedFormCrlb(benchmark::State& state) {
  const auto f = random_target(static_cast<std::size_t>(state.range(0)), 1);
  const std::vector<double> eta(f.size(), 1.0 / static_cast<double>(f.size()));
  for (auto _ : state) benchmark::DoNotOptimize(f(eta));
}
BENCHMARK(BM_ClosedFormCrlb)->Arg(2)->Arg(4)->Arg(10)->Arg(20);

void BM_BudgetTable(benchmark::State& state) {
  const Scenario s = default_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(BudgetTable(s));
}
BENCHMARK(BM_BudgetTable)->Unit(benchmark::kMillisecond);

void BM_PolyblockSingle(benchmark::State& state) {
  const auto f = random_target(static_cast<std::size_t>(state.range(0)), 2);
  SolverConfig cfg;
  cfg.max_iter = 1000;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_single([&f](std::span<const double> e) { return f(e); }, f.size(), cfg));
}
BENCHMARK(BM_PolyblockSingle)->Arg(2)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ProposedScheme(benchmark::State& state) {
  const Scenario s = default_scenario();
  SolverConfig cfg;
  cfg.max_iter = 200;
  for (auto _ : state) benchmark::DoNotOptimize(run_scheme(s, Scheme::proposed, cfg));
}
BENCHMARK(BM_ProposedScheme)->Unit(benchmark::kMillisecond);

void BM_MleLocate(benchmark::State& state) {
  const Scenario s = default_scenario();
  const auto r = run_scheme(s, Scheme::proposed);
  const auto links = range_links(r.plan, r.allocation, BudgetTable(s), 0, s.radio().c0);
  std::mt19937_64 rng(3);
  const auto m = sample_measurements(s, 0, links, rng);
  const auto region = default_search_region(s, 0, links);
  MleOptions o;
  o.fine_resolution = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(mle_locate(m, s, region, o));
}
BENCHMARK(BM_MleLocate)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace irsloc

BENCHMARK_MAIN();
