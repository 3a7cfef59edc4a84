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

#include "irsloc/association.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "irsloc/crlb.hpp"
#include "irsloc/errors.hpp"
#include "irsloc/experiments.hpp"
#include "irsloc/geometry.hpp"
#include "irsloc/scenario_io.hpp"

namespace irsloc {
namespace {

Scenario make(std::vector<Point2> bs, std::vector<Point2> targets, double r_e) {
  return Scenario(std::move(bs), std::move(targets), 5.0, 1.0, r_e, IrsSize{40, 40},
                  RadioParams{});
}

// Balanced pairs: first items round-robin over the BSs, second items continue
// the round-robin, and every first item sorts before every second item.
std::vector<PairChoice> balanced_pairs(std::size_t K, std::size_t M) {
  std::vector<PairChoice> pairs(K);
  for (std::size_t k = 0; k < K; ++k) {
    pairs[k].pair.first = k % M;
    pairs[k].pair.second = (K % M != 0) ? (K + k) % M : (k + 1) % M;
    pairs[k].eta_bar1 = 1.0 + static_cast<double>(k);
    pairs[k].eta_bar2 = 1000.0 + static_cast<double>(k);
  }
  return pairs;
}

TEST(InterferenceGraph, OppositeSidesDoNotInterfere) {
  const Scenario s = make({{-80, -60}, {80, 60}}, {{0, 0}}, 0.5);
  const auto g = build_interference_graph(s);
  EXPECT_FALSE(g.at(0, 0, 1));
  EXPECT_FALSE(g.at(0, 1, 0));
}

TEST(InterferenceGraph, BsInsideBeamInterferes) {
  const Scenario s = make({{50, 0}, {52, 1}}, {{0, 0}}, 5.0);
  const auto g = build_interference_graph(s);
  // Oracle: membership of BS 1's centre spatial frequency in link (0, 0)'s spans.
  const auto [phi, omega] = compute_spans(s, 0, 0);
  const auto p = point_link({0, 0}, {52, 1}, s.height_gap());
  const auto f = spatial_frequency(p.azimuth, p.elevation);
  ASSERT_TRUE(phi.contains(f.phi) || omega.contains(f.omega));
  EXPECT_TRUE(g.at(0, 0, 1));
}

TEST(InterferenceGraph, ZeroRadiusDistinctDirections) {
  const Scenario s = make({{50, 0}, {0, 70}, {-30, -30}}, {{0, 0}}, 0.0);
  EXPECT_EQ(build_interference_graph(s).edge_count(), 0u);
}

TEST(InterferenceGraph, DiagonalIgnored) {
  auto g = InterferenceGraph::full(2, 3);
  EXPECT_FALSE(g.at(1, 2, 2));
  EXPECT_EQ(g.edge_count(), 2u * 3u * 2u);
  g.set(0, 1, 1);
  EXPECT_FALSE(g.at(0, 1, 1));
}

TEST(CheckPlan, EmptyPlanIsFeasible) {
  EXPECT_TRUE(check_plan(AssociationPlan(3, 4, 0), InterferenceGraph::full(3, 4)).empty());
}

TEST(CheckPlan, SharedBsInSlot) {
  AssociationPlan p(2, 3, 1);
  p.set(0, 1, 0);
  p.set(1, 1, 0);
  const auto v = check_plan(p, InterferenceGraph::none(2, 3));
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].constraint, "bs_per_slot");
}

TEST(CheckPlan, TargetTwiceInSlot) {
  AssociationPlan p(1, 3, 1);
  p.set(0, 0, 0);
  p.set(0, 2, 0);
  const auto v = check_plan(p, InterferenceGraph::none(1, 3));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].constraint, "target_per_slot");
}

TEST(CheckPlan, RepeatedAssociation) {
  AssociationPlan p(1, 2, 2);
  p.set(0, 0, 0);
  p.set(0, 0, 1);
  const auto v = check_plan(p, InterferenceGraph::none(1, 2));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].constraint, "single_use");
}

TEST(CheckPlan, InterferenceViolation) {
  AssociationPlan p(2, 2, 1);
  p.set(0, 0, 0);
  p.set(1, 1, 0);
  InterferenceGraph g(2, 2);
  g.set(0, 0, 1);
  const auto v = check_plan(p, g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].constraint, "interference");
  EXPECT_EQ(v[0].k, 0u);
  EXPECT_FALSE(v[0].describe().empty());
}

TEST(BestPair, TwoBsIsForced) {
  const Scenario s = make({{0, 0}, {100, 10}}, {{50, 50}}, 1.0);
  const auto c = best_pair(BudgetTable(s), 0, 0.1);
  EXPECT_EQ(c.pair, (BsPair{0, 1}));
  EXPECT_NEAR(c.eta1 + c.eta2, 1.0, 1e-15);
}

TEST(BestPair, SymmetricSquarePicksOrthogonalPair) {
  const Scenario s = make({{50, 50}, {-50, 50}, {-50, -50}, {50, -50}}, {{0, 0}}, 1.0);
  const BudgetTable b(s);
  const auto c = best_pair(b, 0, 0.1);
  EXPECT_EQ(c.pair, (BsPair{0, 1}));
  const double gap = std::abs(b.at(0, c.pair.first).geometry.azimuth -
                              b.at(0, c.pair.second).geometry.azimuth);
  EXPECT_NEAR(gap, std::numbers::pi / 2, 1e-12);
}

TEST(BestPair, ExhaustiveScanOracle) {
  std::mt19937_64 rng(4);
  RandomLayout layout;
  layout.num_bs = 7;
  const Scenario s = random_scenario(default_scenario(), layout, rng);
  const BudgetTable b(s);
  const double c0 = s.radio().c0;
  double best = INFINITY;
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = i + 1; j < 7; ++j) {
      const double gap = b.at(0, i).geometry.azimuth - b.at(0, j).geometry.azimuth;
      best = std::min(best,
                      two_bs_optimal(b.at(0, i).gamma_tilde, b.at(0, j).gamma_tilde, gap, c0).crlb);
    }
  const auto c = best_pair(b, 0, c0);
  EXPECT_NEAR(c.crlb, best, 1e-12 * best);
  EXPECT_LE(c.crlb, closest_pair(b, 0, c0).crlb * (1 + 1e-12));
}

TEST(BestPair, CollinearThrows) {
  const Scenario s = make({{50, 0}, {100, 0}}, {{0, 0}}, 1.0);
  EXPECT_THROW(best_pair(BudgetTable(s), 0, 0.1), NoFeasiblePair);
}

TEST(ClosestPair, PicksNearest) {
  const Scenario s =
      make({{0, 0}, {200, 0}, {95, 90}, {0, 200}, {200, 200}, {110, 112}}, {{100, 100}}, 1.0);
  EXPECT_EQ(closest_pair(BudgetTable(s), 0, 0.1).pair, (BsPair{2, 5}));
}

TEST(PackSlots, InterferenceFreeBalanced) {
  const auto plan = pack_slots(balanced_pairs(10, 4), InterferenceGraph::none(10, 4));
  EXPECT_EQ(plan.num_slots(), 5u);
  EXPECT_TRUE(check_plan(plan, InterferenceGraph::none(10, 4)).empty());
}

TEST(PackSlots, FullInterference) {
  const auto plan = pack_slots(balanced_pairs(3, 4), InterferenceGraph::full(3, 4));
  EXPECT_EQ(plan.num_slots(), 6u);
}

TEST(PackSlots, SingleTargetTakesTwoSlots) {
  for (std::size_t m : {2u, 5u, 9u}) {
    const auto plan = pack_slots(balanced_pairs(1, m), InterferenceGraph::none(1, m));
    EXPECT_EQ(plan.num_slots(), 2u);
  }
}

TEST(PackSlots, BalancedSweep) {
  for (std::size_t K = 1; K <= 12; ++K)
    for (std::size_t M = 2; M <= 10; ++M) {
      const auto pairs = balanced_pairs(K, M);
      EXPECT_EQ(pack_slots(pairs, InterferenceGraph::none(K, M)).num_slots(),
                min_slots(K, M, InterferenceModel::none))
          << K << " " << M;
      EXPECT_EQ(pack_slots(pairs, InterferenceGraph::full(K, M)).num_slots(),
                min_slots(K, M, InterferenceModel::full))
          << K << " " << M;
    }
}

TEST(PackAssociations, FirstFitIsStableInKey) {
  std::vector<PendingAssociation> items{{0, 0, 2.0}, {1, 0, 1.0}, {2, 0, 1.0}};
  const auto plan = pack_associations(items, InterferenceGraph::none(3, 1));
  ASSERT_EQ(plan.num_slots(), 3u);
  EXPECT_TRUE(plan.at(1, 0, 0));
  EXPECT_TRUE(plan.at(2, 0, 1));
  EXPECT_TRUE(plan.at(0, 0, 2));
}

TEST(PackAssociations, InterferenceCheckedBothWays) {
  // Only w[1][1][0] is set: placing (0, 0) next to (1, 1) is still refused.
  InterferenceGraph g(2, 2);
  g.set(1, 1, 0);
  std::vector<PendingAssociation> items{{0, 0, 1.0}, {1, 1, 2.0}};
  const auto plan = pack_associations(items, g);
  EXPECT_EQ(plan.num_slots(), 2u);
  EXPECT_TRUE(check_plan(plan, g).empty());
}

TEST(CountingBounds, Formulas) {
  EXPECT_EQ(min_slots(10, 4, InterferenceModel::none), 5u);
  EXPECT_EQ(min_slots(3, 4, InterferenceModel::full), 6u);
  for (std::size_t m = 2; m <= 12; ++m) EXPECT_EQ(min_slots(1, m, InterferenceModel::none), 2u);
  EXPECT_EQ(max_targets(4, 5, InterferenceModel::none), 10u);
  EXPECT_EQ(max_targets(4, 5, InterferenceModel::full), 2u);
  EXPECT_EQ(max_targets(3, 3, InterferenceModel::none), 4u);
}

TEST(Schemes, NamesRoundTrip) {
  for (auto s : {Scheme::proposed, Scheme::average, Scheme::closest, Scheme::time_division})
    EXPECT_EQ(parse_scheme(scheme_name(s)), s);
  EXPECT_THROW(parse_scheme("nearest"), ValidationError);
}

TEST(Schemes, AverageSingleTargetIsUniform) {
  const Scenario s = default_scenario().with_targets({{60, 80}});
  const auto r = run_scheme(s, Scheme::average);
  std::vector<double> per_bs(4, 0.0);
  for (std::size_t n = 0; n < r.plan.num_slots(); ++n)
    for (std::size_t m = 0; m < 4; ++m)
      if (r.plan.at(0, m, n)) per_bs[m] += r.allocation[n];
  for (double e : per_bs) EXPECT_NEAR(e, 0.25, 1e-12);
}

TEST(Schemes, TimeDivisionUsesDisjointSlots) {
  const Scenario s = default_scenario().with_targets({{60, 80}, {140, 60}, {110, 170}});
  const auto r = run_scheme(s, Scheme::time_division);
  for (std::size_t n = 0; n < r.plan.num_slots(); ++n) {
    std::size_t targets_here = 0;
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t m = 0; m < 4; ++m)
        if (r.plan.at(k, m, n)) {
          ++targets_here;
          break;
        }
    EXPECT_EQ(targets_here, 1u) << "slot " << n;
  }
  // Window split equalises the targets.
  for (double c : r.crlb) EXPECT_NEAR(c, r.max_crlb, 1e-9 * r.max_crlb);
}

TEST(Schemes, ProposedPlansAreValidAndUseTwoPerTarget) {
  const Scenario s = default_scenario();
  const auto graph = build_interference_graph(s);
  SolverConfig cfg;
  cfg.max_iter = 200;
  const auto r = run_scheme(s, BudgetTable(s), graph, Scheme::proposed, cfg);
  EXPECT_TRUE(check_plan(r.plan, graph).empty());
  EXPECT_EQ(r.plan.total_associations(), 2 * s.num_targets());
  EXPECT_GE(r.plan.num_slots(), min_slots(10, 4, InterferenceModel::none));
  const auto per = crlb_multitarget(r.plan, r.allocation, BudgetTable(s), s.radio().c0);
  double worst = 0.0;
  for (const auto& p : per) worst = std::max(worst, p.value);
  EXPECT_NEAR(worst, r.max_crlb, 1e-12 * worst);
}

TEST(Plan, WithoutTargetAndExtraBs) {
  AssociationPlan p(3, 2, 2);
  p.set(0, 0, 0);
  p.set(1, 1, 0);
  p.set(2, 0, 1);
  const auto q = p.without_target(1);
  EXPECT_EQ(q.num_targets(), 2u);
  EXPECT_TRUE(q.at(1, 0, 1));
  EXPECT_EQ(q.total_associations(), 2u);
  const auto r = p.with_extra_bs(2);
  EXPECT_EQ(r.num_bs(), 4u);
  EXPECT_EQ(r.total_associations(), 3u);
  EXPECT_EQ(p.slot_of(2, 0), std::optional<std::size_t>(1));
  EXPECT_FALSE(p.slot_of(2, 1).has_value());
}

}  // namespace
}  // namespace irsloc
