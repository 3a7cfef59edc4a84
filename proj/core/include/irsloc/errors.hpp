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

#include <stdexcept>
#include <string>

namespace irsloc {

/// Base of every error thrown by the library. `kind()` is a stable,
/// machine-readable tag used by the CLI when reporting failures.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define IRSLOC_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

// Scenario / input validation. The message starts with the offending field path.
IRSLOC_DEFINE_ERROR(ValidationError);
IRSLOC_DEFINE_ERROR(ParseError);

// A base station sits inside the target's uncertainty disk, so the set of
// azimuths wraps around and no angular span exists.
IRSLOC_DEFINE_ERROR(DegenerateSpan);

IRSLOC_DEFINE_ERROR(DegenerateGeometry);
IRSLOC_DEFINE_ERROR(InvalidGeometry);
IRSLOC_DEFINE_ERROR(InfiniteVariance);
IRSLOC_DEFINE_ERROR(AllZeroAllocation);

IRSLOC_DEFINE_ERROR(NonMonotoneObjective);
IRSLOC_DEFINE_ERROR(DimensionTooLarge);
IRSLOC_DEFINE_ERROR(InfeasiblePlan);
IRSLOC_DEFINE_ERROR(NoFeasiblePair);

#undef IRSLOC_DEFINE_ERROR

}  // namespace irsloc
