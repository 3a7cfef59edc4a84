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

#include "irsloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "irsloc/errors.hpp"

namespace irsloc {

PointLink point_link(Point2 target, Point2 bs, double height_gap) {
  const double dx = bs.x - target.x;
  const double dy = bs.y - target.y;
  const double dxy = std::hypot(dx, dy);
  PointLink link;
  link.distance = std::hypot(dxy, height_gap);
  link.azimuth = std::atan2(dy, dx);
  // asin(h/d) loses precision near pi/2; atan2 of the two legs does not.
  link.elevation = std::atan2(height_gap, dxy);
  return link;
}

SpatialFrequency spatial_frequency(double azimuth, double elevation) {
  const double s = std::sin(elevation);
  return {s * std::cos(azimuth), s * std::sin(azimuth)};
}

std::pair<Span, Span> compute_spans(const Scenario& scenario, std::size_t k, std::size_t m,
                                    int boundary_samples) {
  const Point2 centre = scenario.target_priors().at(k);
  const Point2 bs = scenario.bs_positions().at(m);
  const double r = scenario.r_e();
  const double gap = scenario.height_gap();

  if (std::hypot(bs.x - centre.x, bs.y - centre.y) <= r) {
    std::ostringstream msg;
    msg << "BS " << m << " lies inside the uncertainty disk of target " << k;
    throw DegenerateSpan(msg.str());
  }

  const auto sf_at = [&](Point2 p) {
    const PointLink l = point_link(p, bs, gap);
    return spatial_frequency(l.azimuth, l.elevation);
  };

  const SpatialFrequency c = sf_at(centre);
  Span phi{c.phi, c.phi};
  Span omega{c.omega, c.omega};
  if (r == 0.0) return {phi, omega};

  const int n = std::max(boundary_samples, 4);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n;
    const SpatialFrequency s = sf_at({centre.x + r * std::cos(t), centre.y + r * std::sin(t)});
    phi.lo = std::min(phi.lo, s.phi);
    phi.hi = std::max(phi.hi, s.phi);
    omega.lo = std::min(omega.lo, s.omega);
    omega.hi = std::max(omega.hi, s.omega);
  }
  return {phi, omega};
}

LinkGeometry link_geometry(const Scenario& scenario, std::size_t k, std::size_t m) {
  const PointLink l =
      point_link(scenario.target_priors().at(k), scenario.bs_positions().at(m),
                 scenario.height_gap());
  LinkGeometry g;
  g.distance = l.distance;
  g.azimuth = l.azimuth;
  g.elevation = l.elevation;
  g.at_prior = spatial_frequency(l.azimuth, l.elevation);
  std::tie(g.phi_span, g.omega_span) = compute_spans(scenario, k, m);
  return g;
}

}  // namespace irsloc
