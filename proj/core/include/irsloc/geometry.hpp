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
#include <utility>

#include "irsloc/scenario.hpp"

namespace irsloc {

/// Closed interval of spatial frequencies.
struct Span {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Spatial frequencies of a planar-array direction:
/// phi = sin(el) cos(az) along x, omega = sin(el) sin(az) along y.
struct SpatialFrequency {
  double phi = 0.0;
  double omega = 0.0;
};

/// Range and direction of one BS as seen from one target position.
struct PointLink {
  double distance = 0.0;   ///< 3D distance [m]
  double azimuth = 0.0;    ///< (-pi, pi], measured at the target from +x toward the BS
  double elevation = 0.0;  ///< [0, pi/2)
};

struct LinkGeometry {
  double distance = 0.0;
  double azimuth = 0.0;
  double elevation = 0.0;
  SpatialFrequency at_prior;  ///< spatial frequency at the prior centre
  Span phi_span;
  Span omega_span;
};

inline constexpr int kDefaultBoundarySamples = 3600;

PointLink point_link(Point2 target, Point2 bs, double height_gap);
SpatialFrequency spatial_frequency(double azimuth, double elevation);

/// Extreme spatial frequencies of BS `m` over target `k`'s uncertainty disk.
/// The disk boundary is sampled at `boundary_samples` points plus the centre.
/// Throws DegenerateSpan when the BS lies inside (or on) the disk.
std::pair<Span, Span> compute_spans(const Scenario& scenario, std::size_t k, std::size_t m,
                                    int boundary_samples = kDefaultBoundarySamples);

LinkGeometry link_geometry(const Scenario& scenario, std::size_t k, std::size_t m);

}  // namespace irsloc
