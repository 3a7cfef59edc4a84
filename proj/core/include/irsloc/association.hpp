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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "irsloc/allocation.hpp"
#include "irsloc/channel.hpp"
#include "irsloc/plan.hpp"
#include "irsloc/polyblock.hpp"
#include "irsloc/scenario.hpp"

namespace irsloc {

/// w[k][m][m']: serving target k from BS m with a flattened beam also
/// illuminates BS m'. Diagonal entries are always false.
class InterferenceGraph {
 public:
  InterferenceGraph(std::size_t num_targets, std::size_t num_bs);

  /// No link interferes with any other.
  static InterferenceGraph none(std::size_t num_targets, std::size_t num_bs);
  /// Every off-diagonal entry set.
  static InterferenceGraph full(std::size_t num_targets, std::size_t num_bs);

  std::size_t num_targets() const { return targets_; }
  std::size_t num_bs() const { return bs_; }
  bool at(std::size_t k, std::size_t m, std::size_t m2) const;
  void set(std::size_t k, std::size_t m, std::size_t m2, bool value = true);
  std::size_t edge_count() const;

 private:
  std::size_t targets_;
  std::size_t bs_;
  std::vector<std::uint8_t> w_;
};

/// w[k][m][m'] = 1 iff the point spatial frequency of BS m' seen from the
/// prior centre of target k falls in the phi span OR the omega span of link
/// (k, m).
InterferenceGraph build_interference_graph(const BudgetTable& budgets);
InterferenceGraph build_interference_graph(const Scenario& scenario);

struct Violation {
  /// "bs_per_slot", "target_per_slot", "single_use" or "interference".
  std::string constraint;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t other = 0;  ///< second target, BS or slot, depending on the constraint

  std::string describe() const;
};

/// All constraint violations of a plan; empty means feasible.
std::vector<Violation> check_plan(const AssociationPlan& plan, const InterferenceGraph& graph);

/// Pair of BSs chosen for one target with its optimal in-pair split.
struct PairChoice {
  BsPair pair;
  double eta1 = 0.5;  ///< share of pair.first when the pair is used alone
  double eta2 = 0.5;
  double crlb = 0.0;  ///< CRLB with the whole window spent on the pair
  double eta_bar1 = 0.0;  ///< crlb * eta1, the ordering key for packing
  double eta_bar2 = 0.0;
};

/// Relative tolerance under which two pair CRLBs count as tied; ties go to
/// the lexicographically smallest pair.
inline constexpr double kPairTieTolerance = 1e-12;

/// Best BS pair for target k by exhaustive scan. Throws NoFeasiblePair when
/// every pair is collinear with the target or has zero SNR.
PairChoice best_pair(const BudgetTable& budgets, std::size_t k, double c0);
std::vector<PairChoice> choose_pairs(const BudgetTable& budgets, double c0);

/// The two BSs nearest to target k (ties by index), with their optimal split.
PairChoice closest_pair(const BudgetTable& budgets, std::size_t k, double c0);

/// One (target, BS) association waiting to be placed in a slot.
struct PendingAssociation {
  std::size_t k = 0;
  std::size_t m = 0;
  double key = 0.0;  ///< packing order, ascending
};

/// Greedy first-fit: associations sorted ascending by key (stable), each put
/// in the earliest slot whose BS and target are free and where no resident
/// interferes with it in either direction; a new slot is opened otherwise.
AssociationPlan pack_associations(std::vector<PendingAssociation> items,
                                  const InterferenceGraph& graph);

/// Packs both associations of every target, ordered by eta_bar.
AssociationPlan pack_slots(const std::vector<PairChoice>& pairs, const InterferenceGraph& graph);

enum class InterferenceModel { none, full };

/// Fewest slots able to host two associations per target.
std::size_t min_slots(std::size_t num_targets, std::size_t num_bs, InterferenceModel model);
/// Most targets that fit two associations each into `num_slots` slots.
std::size_t max_targets(std::size_t num_bs, std::size_t num_slots, InterferenceModel model);

enum class Scheme { proposed, average, closest, time_division };

std::string_view scheme_name(Scheme scheme);
/// Throws ValidationError for unknown names.
Scheme parse_scheme(std::string_view name);

struct SchemeResult {
  Scheme scheme = Scheme::proposed;
  AssociationPlan plan;
  TimeAllocation allocation;  ///< per slot
  std::vector<double> crlb;   ///< per target
  double max_crlb = 0.0;
  bool converged = true;
  std::size_t solver_iterations = 0;
};

/// Association and time allocation for one scheme:
///   proposed      K = 1: Polyblock over all BSs, one slot per active BS;
///                 K > 1: best pairs, slot packing, min-max Polyblock over slots.
///   average       every target associated with every BS, packed first-fit,
///                 equal share per slot.
///   closest       nearest two BSs per target, packed, min-max Polyblock.
///   time_division each target gets its own slots, Polyblock inside; the
///                 window is split so that all targets reach the same CRLB.
SchemeResult run_scheme(const Scenario& scenario, const BudgetTable& budgets,
                        const InterferenceGraph& graph, Scheme scheme,
                        const SolverConfig& config = {});
SchemeResult run_scheme(const Scenario& scenario, Scheme scheme, const SolverConfig& config = {});

/// Min-max value of a fixed plan, re-solved over slot shares.
SolveResult solve_plan(const AssociationPlan& plan, const BudgetTable& budgets, double c0,
                       const SolverConfig& config = {});

}  // namespace irsloc
