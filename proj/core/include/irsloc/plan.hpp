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
#include <optional>
#include <vector>

namespace irsloc {

struct BsPair {
  std::size_t first = 0;
  std::size_t second = 0;

  friend bool operator==(const BsPair&, const BsPair&) = default;
};

/// Binary association tensor b[k][m][n]: target k is measured by BS m in
/// slot n. Stored slot-major so that slots can be appended cheaply.
///
/// The class only stores the tensor; feasibility is checked by check_plan().
class AssociationPlan {
 public:
  AssociationPlan(std::size_t num_targets, std::size_t num_bs, std::size_t num_slots = 0);

  std::size_t num_targets() const { return targets_; }
  std::size_t num_bs() const { return bs_; }
  std::size_t num_slots() const { return slots_.size(); }

  bool at(std::size_t k, std::size_t m, std::size_t n) const;
  void set(std::size_t k, std::size_t m, std::size_t n, bool value = true);
  std::size_t add_slot();

  /// First slot in which (k, m) is associated, if any.
  std::optional<std::size_t> slot_of(std::size_t k, std::size_t m) const;
  /// BSs associated with target k in any slot, ascending.
  std::vector<std::size_t> associated_bs(std::size_t k) const;
  std::size_t total_associations() const;

  /// Copy with target k removed (later targets shift down by one).
  AssociationPlan without_target(std::size_t k) const;
  /// Copy with `extra` unused BSs appended after the existing ones.
  AssociationPlan with_extra_bs(std::size_t extra) const;

  /// Pair selected per target by the pair-based schemes; empty otherwise.
  std::vector<std::optional<BsPair>> pair_choice;

 private:
  std::size_t index(std::size_t k, std::size_t m) const { return k * bs_ + m; }

  std::size_t targets_;
  std::size_t bs_;
  std::vector<std::vector<std::uint8_t>> slots_;
};

}  // namespace irsloc
