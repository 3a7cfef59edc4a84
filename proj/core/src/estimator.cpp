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

#include "irsloc/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "irsloc/crlb.hpp"
#include "irsloc/errors.hpp"

namespace irsloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double range_to(const Scenario& scenario, Point2 p, std::size_t m) {
  const auto& b = scenario.bs_positions()[m];
  const double dx = b.x - p.x;
  const double dy = b.y - p.y;
  const double h = scenario.height_gap();
  return std::sqrt(dx * dx + dy * dy + h * h);
}

struct Candidate {
  Point2 p;
  double cost = kInf;
};

// Square grid of (2 half + 1)^2 points spaced `cell` apart around `c`; returns the best.
Candidate scan(const MeasurementSample& s, const Scenario& scenario, Point2 c, double cell,
               int half) {
  Candidate best{c, kInf};
  for (int i = -half; i <= half; ++i)
    for (int j = -half; j <= half; ++j) {
      const Point2 p{c.x + i * cell, c.y + j * cell};
      const double v = mle_cost(s, scenario, p);
      if (v < best.cost) best = {p, v};
    }
  return best;
}

Candidate refine(const MeasurementSample& s, const Scenario& scenario, Candidate start,
                 double cell, double fine) {
  while (cell > fine) {
    cell /= 10.0;
    start = scan(s, scenario, start.p, cell, 20);
  }
  return start;
}

}  // namespace

RangeLinks range_links(const AssociationPlan& plan, const TimeAllocation& eta,
                       const BudgetTable& budgets, std::size_t k, double c0) {
  RangeLinks out;
  for (std::size_t m = 0; m < plan.num_bs(); ++m) {
    double share = 0.0;
    for (std::size_t n = 0; n < plan.num_slots(); ++n)
      if (plan.at(k, m, n)) share += eta[n];
    if (share <= 0.0) continue;
    out.bs.push_back(m);
    out.variance.push_back(measurement_variance(share * budgets.at(k, m).gamma_bar, c0));
  }
  return out;
}

MeasurementSample sample_measurements_at(const Scenario& scenario, Point2 truth,
                                         const RangeLinks& links, std::mt19937_64& rng) {
  if (links.bs.size() != links.variance.size())
    throw ValidationError("links: BS and variance lists differ in length");
  MeasurementSample s{truth, links.bs, {}, links.variance};
  s.measured.reserve(links.bs.size());
  for (std::size_t i = 0; i < links.bs.size(); ++i) {
    const double v = links.variance[i];
    if (!std::isfinite(v) || v < 0.0)
      throw ValidationError("links.variance: must be finite and non-negative");
    const double d = range_to(scenario, truth, links.bs[i]);
    std::normal_distribution<double> noise(0.0, std::sqrt(v));
    double r = d + noise(rng);
    while (r <= 0.0) r = d + noise(rng);
    s.measured.push_back(r);
  }
  return s;
}

MeasurementSample sample_measurements(const Scenario& scenario, std::size_t k,
                                      const RangeLinks& links, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = scenario.r_e() * std::sqrt(u(rng));
  const double t = 2.0 * std::numbers::pi * u(rng);
  const auto& c = scenario.target_priors().at(k);
  return sample_measurements_at(scenario, {c.x + r * std::cos(t), c.y + r * std::sin(t)}, links,
                                rng);
}

SearchRegion default_search_region(const Scenario& scenario, std::size_t k,
                                   const RangeLinks& links) {
  double sigma = 0.0;
  for (double v : links.variance) sigma = std::max(sigma, std::sqrt(v));
  return {scenario.target_priors().at(k), scenario.r_e() + 3.0 * sigma};
}

double mle_cost(const MeasurementSample& sample, const Scenario& scenario, Point2 p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < sample.bs.size(); ++i) {
    const double e = sample.measured[i] - range_to(scenario, p, sample.bs[i]);
    acc += e * e / sample.variance[i];
  }
  return acc;
}

MleEstimate mle_locate(const MeasurementSample& sample, const Scenario& scenario,
                       const SearchRegion& region, const MleOptions& options) {
  if (sample.bs.size() < 2) throw ValidationError("mle: at least two ranges are required");
  if (!(options.fine_resolution > 0.0))
    throw ValidationError("mle.fine_resolution: must be positive");
  for (double v : sample.variance)
    if (!(v > 0.0)) throw ValidationError("mle: variances must be positive");

  const double radius = std::max(region.radius, options.fine_resolution);
  const double cell = std::max(10.0 * options.fine_resolution,
                               2.0 * radius / static_cast<double>(std::max<std::size_t>(
                                                  options.coarse_cells, 1)));
  const int half = static_cast<int>(std::ceil(radius / cell));
  const int side = 2 * half + 1;

  // Coarse costs; cells outside the disk stay +inf.
  std::vector<double> cost(static_cast<std::size_t>(side) * side, kInf);
  const auto at = [&](int i, int j) -> double& {
    return cost[static_cast<std::size_t>(i + half) * side + static_cast<std::size_t>(j + half)];
  };
  const double r2 = (radius + 0.5 * cell) * (radius + 0.5 * cell);
  for (int i = -half; i <= half; ++i)
    for (int j = -half; j <= half; ++j) {
      const double dx = i * cell;
      const double dy = j * cell;
      if (dx * dx + dy * dy > r2) continue;
      at(i, j) = mle_cost(sample, scenario, {region.center.x + dx, region.center.y + dy});
    }

  // Two best local minima of the coarse grid.
  Candidate first;
  Candidate second;
  for (int i = -half; i <= half; ++i)
    for (int j = -half; j <= half; ++j) {
      const double v = at(i, j);
      if (!std::isfinite(v)) continue;
      bool local = true;
      for (int di = -1; di <= 1 && local; ++di)
        for (int dj = -1; dj <= 1 && local; ++dj) {
          if ((di == 0 && dj == 0) || std::abs(i + di) > half || std::abs(j + dj) > half) continue;
          local = !(at(i + di, j + dj) < v);
        }
      if (!local) continue;
      const Candidate c{{region.center.x + i * cell, region.center.y + j * cell}, v};
      if (v < first.cost) {
        second = first;
        first = c;
      } else if (v < second.cost) {
        second = c;
      }
    }

  Candidate best = refine(sample, scenario, first, cell, options.fine_resolution);
  MleEstimate out{best.p, best.cost, false};
  if (std::isfinite(second.cost)) {
    const Candidate alt = refine(sample, scenario, second, cell, options.fine_resolution);
    const double dx = alt.p.x - best.p.x;
    const double dy = alt.p.y - best.p.y;
    const bool separate = std::hypot(dx, dy) > 2.0 * cell;
    if (alt.cost < best.cost) {
      out.position = alt.p;
      out.cost = alt.cost;
    }
    out.ambiguous = separate && std::abs(alt.cost - best.cost) <= options.ambiguity_tolerance;
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finaliser
  std::uint64_t z = master ^ (index + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

MonteCarloResult monte_carlo(const Scenario& scenario, const AssociationPlan& plan,
                             const TimeAllocation& eta, const MonteCarloOptions& options) {
  if (options.trials < 1) throw ValidationError("trials: must be at least 1");
  const BudgetTable budgets(scenario);
  const double c0 = scenario.radio().c0;
  const std::size_t K = plan.num_targets();

  const auto reports = crlb_multitarget(plan, eta, budgets, c0);
  double crlb_sum = 0.0;
  double crlb_min = kInf;
  for (const auto& r : reports) {
    crlb_sum += r.value;
    crlb_min = std::min(crlb_min, r.value);
  }
  if (!std::isfinite(crlb_sum))
    throw DegenerateGeometry("monte_carlo: some target has an infinite CRLB under this plan");

  std::vector<RangeLinks> links;
  std::vector<SearchRegion> regions;
  for (std::size_t k = 0; k < K; ++k) {
    links.push_back(range_links(plan, eta, budgets, k, c0));
    regions.push_back(default_search_region(scenario, k, links.back()));
  }
  MleOptions mle;
  mle.fine_resolution = options.fine_resolution > 0.0
                            ? options.fine_resolution
                            : std::min(0.01, std::sqrt(crlb_min) / 20.0);

  const std::size_t T = options.trials;
  std::vector<double> err(T, 0.0);
  std::vector<std::uint8_t> amb(T, 0);
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      std::mt19937_64 rng(trial_seed(options.seed, t));
      double e = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const auto s = sample_measurements(scenario, k, links[k], rng);
        const auto est = mle_locate(s, scenario, regions[k], mle);
        const double dx = est.position.x - s.truth.x;
        const double dy = est.position.y - s.truth.y;
        e += dx * dx + dy * dy;
        amb[t] += est.ambiguous ? 1 : 0;
      }
      err[t] = e / static_cast<double>(K);
    }
  };

  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, T);
  if (threads == 1) {
    work(0, T);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (T + threads - 1) / threads;
    for (std::size_t b = 0; b < T; b += chunk) pool.emplace_back(work, b, std::min(T, b + chunk));
  }

  MonteCarloResult r;
  r.trials = T;
  r.seed = options.seed;
  r.power = scenario.radio().p_tx;
  r.crlb = crlb_sum / static_cast<double>(K);
  double sum = 0.0;
  for (double e : err) sum += e;
  r.mse = sum / static_cast<double>(T);
  double ss = 0.0;
  for (double e : err) ss += (e - r.mse) * (e - r.mse);
  r.std_error = T > 1 ? std::sqrt(ss / static_cast<double>(T - 1) / static_cast<double>(T)) : 0.0;
  for (auto a : amb) r.ambiguous += a;
  return r;
}

}  // namespace irsloc
