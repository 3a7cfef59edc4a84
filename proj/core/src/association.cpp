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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "irsloc/crlb.hpp"
#include "irsloc/errors.hpp"

namespace irsloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// AssociationPlan

AssociationPlan::AssociationPlan(std::size_t num_targets, std::size_t num_bs,
                                 std::size_t num_slots)
    : targets_(num_targets), bs_(num_bs) {
  slots_.assign(num_slots, std::vector<std::uint8_t>(targets_ * bs_, 0));
}

bool AssociationPlan::at(std::size_t k, std::size_t m, std::size_t n) const {
  return slots_.at(n).at(index(k, m)) != 0;
}

void AssociationPlan::set(std::size_t k, std::size_t m, std::size_t n, bool value) {
  if (k >= targets_ || m >= bs_) throw ValidationError("plan: target or BS index out of range");
  slots_.at(n)[index(k, m)] = value ? 1 : 0;
}

std::size_t AssociationPlan::add_slot() {
  slots_.emplace_back(targets_ * bs_, 0);
  return slots_.size() - 1;
}

std::optional<std::size_t> AssociationPlan::slot_of(std::size_t k, std::size_t m) const {
  for (std::size_t n = 0; n < slots_.size(); ++n)
    if (slots_[n][index(k, m)]) return n;
  return std::nullopt;
}

std::vector<std::size_t> AssociationPlan::associated_bs(std::size_t k) const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < bs_; ++m)
    if (slot_of(k, m)) out.push_back(m);
  return out;
}

std::size_t AssociationPlan::total_associations() const {
  std::size_t total = 0;
  for (const auto& s : slots_) total += static_cast<std::size_t>(std::count(s.begin(), s.end(), 1));
  return total;
}

AssociationPlan AssociationPlan::without_target(std::size_t k) const {
  if (k >= targets_) throw ValidationError("plan: target index out of range");
  AssociationPlan out(targets_ - 1, bs_, slots_.size());
  for (std::size_t n = 0; n < slots_.size(); ++n)
    for (std::size_t t = 0, dst = 0; t < targets_; ++t) {
      if (t == k) continue;
      for (std::size_t m = 0; m < bs_; ++m)
        if (at(t, m, n)) out.set(dst, m, n);
      ++dst;
    }
  if (!pair_choice.empty()) {
    out.pair_choice = pair_choice;
    out.pair_choice.erase(out.pair_choice.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return out;
}

AssociationPlan AssociationPlan::with_extra_bs(std::size_t extra) const {
  AssociationPlan out(targets_, bs_ + extra, slots_.size());
  for (std::size_t n = 0; n < slots_.size(); ++n)
    for (std::size_t k = 0; k < targets_; ++k)
      for (std::size_t m = 0; m < bs_; ++m)
        if (at(k, m, n)) out.set(k, m, n);
  out.pair_choice = pair_choice;
  return out;
}

// ---------------------------------------------------------------------------
// Interference graph

InterferenceGraph::InterferenceGraph(std::size_t num_targets, std::size_t num_bs)
    : targets_(num_targets), bs_(num_bs), w_(num_targets * num_bs * num_bs, 0) {}

InterferenceGraph InterferenceGraph::none(std::size_t num_targets, std::size_t num_bs) {
  return InterferenceGraph(num_targets, num_bs);
}

InterferenceGraph InterferenceGraph::full(std::size_t num_targets, std::size_t num_bs) {
  InterferenceGraph g(num_targets, num_bs);
  for (std::size_t k = 0; k < num_targets; ++k)
    for (std::size_t m = 0; m < num_bs; ++m)
      for (std::size_t m2 = 0; m2 < num_bs; ++m2)
        if (m != m2) g.set(k, m, m2);
  return g;
}

bool InterferenceGraph::at(std::size_t k, std::size_t m, std::size_t m2) const {
  return w_.at((k * bs_ + m) * bs_ + m2) != 0;
}

void InterferenceGraph::set(std::size_t k, std::size_t m, std::size_t m2, bool value) {
  if (m == m2) return;  // a link never interferes with itself
  w_.at((k * bs_ + m) * bs_ + m2) = value ? 1 : 0;
}

std::size_t InterferenceGraph::edge_count() const {
  return static_cast<std::size_t>(std::count(w_.begin(), w_.end(), 1));
}

InterferenceGraph build_interference_graph(const BudgetTable& budgets) {
  InterferenceGraph g(budgets.num_targets(), budgets.num_bs());
  for (std::size_t k = 0; k < budgets.num_targets(); ++k)
    for (std::size_t m = 0; m < budgets.num_bs(); ++m) {
      const auto& served = budgets.at(k, m).geometry;
      for (std::size_t m2 = 0; m2 < budgets.num_bs(); ++m2) {
        if (m2 == m) continue;
        const auto& probe = budgets.at(k, m2).geometry.at_prior;
        g.set(k, m, m2,
              served.phi_span.contains(probe.phi) || served.omega_span.contains(probe.omega));
      }
    }
  return g;
}

InterferenceGraph build_interference_graph(const Scenario& scenario) {
  return build_interference_graph(BudgetTable(scenario));
}

// ---------------------------------------------------------------------------
// Feasibility

std::string Violation::describe() const {
  std::ostringstream s;
  s << constraint << ": ";
  if (constraint == "bs_per_slot")
    s << "BS " << m << " serves targets " << k << " and " << other << " in slot " << n;
  else if (constraint == "target_per_slot")
    s << "target " << k << " uses BSs " << m << " and " << other << " in slot " << n;
  else if (constraint == "single_use")
    s << "target " << k << " uses BS " << m << " in slots " << n << " and " << other;
  else
    s << "link (" << k << ", " << m << ") interferes with BS " << other << " in slot " << n;
  return s.str();
}

std::vector<Violation> check_plan(const AssociationPlan& plan, const InterferenceGraph& graph) {
  const std::size_t K = plan.num_targets();
  const std::size_t M = plan.num_bs();
  const std::size_t N = plan.num_slots();
  if (graph.num_targets() != K || graph.num_bs() != M)
    throw ValidationError("check_plan: interference graph does not match the plan shape");

  std::vector<Violation> out;
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t m = 0; m < M; ++m) {
      std::optional<std::size_t> first;
      for (std::size_t k = 0; k < K; ++k) {
        if (!plan.at(k, m, n)) continue;
        if (first)
          out.push_back({"bs_per_slot", *first, m, n, k});
        else
          first = k;
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      std::optional<std::size_t> first;
      for (std::size_t m = 0; m < M; ++m) {
        if (!plan.at(k, m, n)) continue;
        if (first)
          out.push_back({"target_per_slot", k, *first, n, m});
        else
          first = m;
      }
    }
  }
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t m = 0; m < M; ++m) {
      std::optional<std::size_t> first;
      for (std::size_t n = 0; n < N; ++n) {
        if (!plan.at(k, m, n)) continue;
        if (first)
          out.push_back({"single_use", k, m, *first, n});
        else
          first = n;
      }
    }
  // b[k][m][n] + sum_{k' != k} b[k'][m'][n] <= 2 - w[k][m][m']
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t m = 0; m < M; ++m) {
        if (!plan.at(k, m, n)) continue;
        for (std::size_t m2 = 0; m2 < M; ++m2) {
          if (m2 == m || !graph.at(k, m, m2)) continue;
          for (std::size_t k2 = 0; k2 < K; ++k2)
            if (k2 != k && plan.at(k2, m2, n)) {
              out.push_back({"interference", k, m, n, m2});
              break;
            }
        }
      }
  return out;
}

// ---------------------------------------------------------------------------
// Pair selection

namespace {

PairChoice make_choice(const BudgetTable& budgets, std::size_t k, std::size_t i, std::size_t j,
                       double c0) {
  const auto& a = budgets.at(k, i);
  const auto& b = budgets.at(k, j);
  const auto opt = two_bs_optimal(a.gamma_tilde, b.gamma_tilde,
                                  a.geometry.azimuth - b.geometry.azimuth, c0);
  return PairChoice{{i, j}, opt.eta1, opt.eta2, opt.crlb, opt.crlb * opt.eta1,
                    opt.crlb * opt.eta2};
}

bool usable(const BudgetTable& budgets, std::size_t k, std::size_t m) {
  const double g = budgets.at(k, m).gamma_tilde;
  return g > 0.0 && std::isfinite(g);
}

}  // namespace

PairChoice best_pair(const BudgetTable& budgets, std::size_t k, double c0) {
  const std::size_t M = budgets.num_bs();
  if (M < 2) throw ValidationError("choose_pairs: at least two BSs are required");
  std::optional<PairChoice> best;
  for (std::size_t i = 0; i < M; ++i) {
    if (!usable(budgets, k, i)) continue;
    for (std::size_t j = i + 1; j < M; ++j) {
      if (!usable(budgets, k, j)) continue;
      PairChoice c;
      try {
        c = make_choice(budgets, k, i, j, c0);
      } catch (const DegenerateGeometry&) {
        continue;
      }
      if (!best || c.crlb < best->crlb * (1.0 - kPairTieTolerance)) best = c;
    }
  }
  if (!best) {
    std::ostringstream msg;
    msg << "target " << k << ": every BS pair is collinear with the target";
    throw NoFeasiblePair(msg.str());
  }
  return *best;
}

std::vector<PairChoice> choose_pairs(const BudgetTable& budgets, double c0) {
  std::vector<PairChoice> out;
  out.reserve(budgets.num_targets());
  for (std::size_t k = 0; k < budgets.num_targets(); ++k) out.push_back(best_pair(budgets, k, c0));
  return out;
}

PairChoice closest_pair(const BudgetTable& budgets, std::size_t k, double c0) {
  const std::size_t M = budgets.num_bs();
  if (M < 2) throw ValidationError("closest_pair: at least two BSs are required");
  std::vector<std::size_t> order(M);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return budgets.at(k, a).geometry.distance < budgets.at(k, b).geometry.distance;
  });
  const std::size_t i = std::min(order[0], order[1]);
  const std::size_t j = std::max(order[0], order[1]);
  try {
    return make_choice(budgets, k, i, j, c0);
  } catch (const DegenerateGeometry& e) {
    std::ostringstream msg;
    msg << "target " << k << ": closest pair (" << i << ", " << j << ") " << e.what();
    throw NoFeasiblePair(msg.str());
  }
}

// ---------------------------------------------------------------------------
// Slot packing

AssociationPlan pack_associations(std::vector<PendingAssociation> items,
                                  const InterferenceGraph& graph) {
  const std::size_t K = graph.num_targets();
  const std::size_t M = graph.num_bs();
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.key < b.key; });

  AssociationPlan plan(K, M);
  // Residents per slot, kept alongside the tensor for quick scans.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> residents;
  for (const auto& it : items) {
    if (it.k >= K || it.m >= M) throw ValidationError("pack: association index out of range");
    std::size_t slot = residents.size();
    for (std::size_t n = 0; n < residents.size(); ++n) {
      bool fits = true;
      for (const auto& [k2, m2] : residents[n]) {
        if (k2 == it.k || m2 == it.m || graph.at(it.k, it.m, m2) || graph.at(k2, m2, it.m)) {
          fits = false;
          break;
        }
      }
      if (fits) {
        slot = n;
        break;
      }
    }
    if (slot == residents.size()) {
      residents.emplace_back();
      plan.add_slot();
    }
    residents[slot].emplace_back(it.k, it.m);
    plan.set(it.k, it.m, slot);
  }
  return plan;
}

AssociationPlan pack_slots(const std::vector<PairChoice>& pairs, const InterferenceGraph& graph) {
  if (pairs.size() != graph.num_targets())
    throw ValidationError("pack_slots: one pair per target is required");
  std::vector<PendingAssociation> items;
  items.reserve(2 * pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    items.push_back({k, pairs[k].pair.first, pairs[k].eta_bar1});
    items.push_back({k, pairs[k].pair.second, pairs[k].eta_bar2});
  }
  AssociationPlan plan = pack_associations(std::move(items), graph);
  plan.pair_choice.reserve(pairs.size());
  for (const auto& p : pairs) plan.pair_choice.emplace_back(p.pair);
  return plan;
}

// ---------------------------------------------------------------------------
// Counting bounds

std::size_t min_slots(std::size_t num_targets, std::size_t num_bs, InterferenceModel model) {
  if (num_targets < 1) throw ValidationError("K: at least one target is required");
  if (num_bs < 2) throw ValidationError("M: at least two BSs are required");
  if (model == InterferenceModel::full) return 2 * num_targets;
  return std::max<std::size_t>((2 * num_targets + num_bs - 1) / num_bs, 2);
}

std::size_t max_targets(std::size_t num_bs, std::size_t num_slots, InterferenceModel model) {
  if (num_bs < 2) throw ValidationError("M: at least two BSs are required");
  if (model == InterferenceModel::full) return num_slots / 2;
  return num_bs * num_slots / 2;
}

// ---------------------------------------------------------------------------
// Schemes

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::proposed: return "proposed";
    case Scheme::average: return "average";
    case Scheme::closest: return "closest";
    case Scheme::time_division: return "time_division";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::proposed, Scheme::average, Scheme::closest, Scheme::time_division})
    if (scheme_name(s) == name) return s;
  throw ValidationError("scheme: unknown scheme '" + std::string(name) + "'");
}

SolveResult solve_plan(const AssociationPlan& plan, const BudgetTable& budgets, double c0,
                       const SolverConfig& config) {
  return solve_minmax(plan, budgets, c0, config);
}

namespace {

SchemeResult finish(Scheme scheme, AssociationPlan plan, TimeAllocation eta,
                    const BudgetTable& budgets, double c0) {
  const auto reports = crlb_multitarget(plan, eta, budgets, c0);
  std::vector<double> crlb;
  crlb.reserve(reports.size());
  double worst = 0.0;
  for (const auto& r : reports) {
    crlb.push_back(r.value);
    worst = std::max(worst, r.value);
  }
  return SchemeResult{scheme, std::move(plan), std::move(eta), std::move(crlb), worst};
}

// Per-target optimal allocation, restricted to BSs above the activity threshold.
struct TargetOptimum {
  std::vector<std::size_t> bs;
  std::vector<double> eta;
  double crlb = kInf;
  bool converged = true;
  std::size_t iterations = 0;
};

TargetOptimum single_target_optimum(const BudgetTable& budgets, std::size_t k, double c0,
                                    const SolverConfig& config) {
  const auto f = SingleTargetCrlb::for_target(budgets, k, c0);
  const auto res = solve_single([&f](std::span<const double> e) { return f(e); }, f.size(), config);
  TargetOptimum out;
  out.converged = res.converged;
  out.iterations = res.iterations;
  std::vector<double> kept(f.size(), 0.0);
  for (std::size_t m = 0; m < f.size(); ++m)
    if (res.allocation[m] > kActiveShareThreshold) kept[m] = res.allocation[m];
  const auto norm = TimeAllocation::normalized(kept);
  for (std::size_t m = 0; m < f.size(); ++m)
    if (norm[m] > 0.0) {
      out.bs.push_back(m);
      out.eta.push_back(norm[m]);
    }
  out.crlb = f(norm.values());
  return out;
}

SchemeResult time_division(const BudgetTable& budgets, double c0, const SolverConfig& config,
                           Scheme label) {
  const std::size_t K = budgets.num_targets();
  std::vector<TargetOptimum> per(K);
  double total = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
  for (std::size_t k = 0; k < K; ++k) {
    per[k] = single_target_optimum(budgets, k, c0, config);
    total += per[k].crlb;
    converged = converged && per[k].converged;
    iterations += per[k].iterations;
  }
  // CRLB_k scales as 1 / tau_k, so tau_k proportional to CRLB_k* equalises them.
  AssociationPlan plan(K, budgets.num_bs());
  std::vector<double> shares;
  for (std::size_t k = 0; k < K; ++k) {
    const double tau = per[k].crlb / total;
    for (std::size_t i = 0; i < per[k].bs.size(); ++i) {
      const std::size_t n = plan.add_slot();
      plan.set(k, per[k].bs[i], n);
      shares.push_back(tau * per[k].eta[i]);
    }
  }
  auto r = finish(label, std::move(plan), TimeAllocation::normalized(shares), budgets, c0);
  r.converged = converged;
  r.solver_iterations = iterations;
  return r;
}

SchemeResult packed_minmax(Scheme scheme, AssociationPlan plan, const BudgetTable& budgets,
                           double c0, const SolverConfig& config) {
  const auto res = solve_minmax(plan, budgets, c0, config);
  auto r = finish(scheme, std::move(plan), res.allocation, budgets, c0);
  r.converged = res.converged;
  r.solver_iterations = res.iterations;
  return r;
}

}  // namespace

SchemeResult run_scheme(const Scenario& scenario, const BudgetTable& budgets,
                        const InterferenceGraph& graph, Scheme scheme,
                        const SolverConfig& config) {
  const double c0 = scenario.radio().c0;
  const std::size_t K = budgets.num_targets();
  const std::size_t M = budgets.num_bs();
  switch (scheme) {
    case Scheme::proposed: {
      if (K == 1) return time_division(budgets, c0, config, Scheme::proposed);
      return packed_minmax(scheme, pack_slots(choose_pairs(budgets, c0), graph), budgets, c0,
                           config);
    }
    case Scheme::closest: {
      std::vector<PairChoice> pairs;
      for (std::size_t k = 0; k < K; ++k) pairs.push_back(closest_pair(budgets, k, c0));
      return packed_minmax(scheme, pack_slots(pairs, graph), budgets, c0, config);
    }
    case Scheme::average: {
      std::vector<PendingAssociation> items;
      for (std::size_t k = 0; k < K; ++k)
        for (std::size_t m = 0; m < M; ++m) items.push_back({k, m, 0.0});
      auto plan = pack_associations(std::move(items), graph);
      auto eta = TimeAllocation::uniform(plan.num_slots());
      return finish(scheme, std::move(plan), std::move(eta), budgets, c0);
    }
    case Scheme::time_division:
      return time_division(budgets, c0, config, scheme);
  }
  throw ValidationError("scheme: unknown scheme");
}

SchemeResult run_scheme(const Scenario& scenario, Scheme scheme, const SolverConfig& config) {
  const BudgetTable budgets(scenario);
  return run_scheme(scenario, budgets, build_interference_graph(budgets), scheme, config);
}

}  // namespace irsloc
