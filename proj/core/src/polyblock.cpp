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

#include "irsloc/polyblock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "irsloc/crlb.hpp"
#include "irsloc/errors.hpp"

namespace irsloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vertex {
  std::vector<double> z;
  double value = 0.0;
};

// Ordering used for vertex selection: smaller objective first, then the
// lexicographically smaller vertex.
bool vertex_before(const Vertex& a, const Vertex& b) {
  if (a.value != b.value) return a.value < b.value;
  return a.z < b.z;
}

void probe_monotonicity(const Objective& f, std::size_t dim, std::size_t probes) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> eta(dim);
  std::vector<double> bumped(dim);
  constexpr double kStep = 1e-3;
  for (std::size_t p = 0; p < probes; ++p) {
    double sum = 0.0;
    for (auto& e : eta) sum += (e = expo(rng));
    for (auto& e : eta) e = 0.9 * e / sum;
    const double f0 = f(eta);
    if (!std::isfinite(f0)) continue;
    for (std::size_t m = 0; m < dim; ++m) {
      bumped = eta;
      bumped[m] += kStep;
      const double f1 = f(bumped);
      if (f1 > f0 * (1.0 + 1e-9) + 1e-300) {
        std::ostringstream msg;
        msg << "objective increases along coordinate " << m << " (" << f0 << " -> " << f1 << ")";
        throw NonMonotoneObjective(msg.str());
      }
    }
  }
}

// Tightens vertex v against the level gamma. Every feasible x <= v.z with
// f(x) <= gamma has x_i > alpha_i, where alpha_i is found by bisection along
// coordinate i, so x_i < 1 - sum_{j != i} alpha_j as well. Returns false when
// no such x exists.
template <class Eval>
bool reduce(Eval& f, Vertex& v, double gamma, std::vector<double>& alpha,
            std::vector<double>& y) {
  const std::size_t n = v.z.size();
  alpha.assign(n, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    y = v.z;
    y[i] = 0.0;
    if (f(y) <= gamma) continue;
    double lo = 0.0;
    double hi = v.z[i];
    for (int it = 0; it < 24; ++it) {
      y[i] = 0.5 * (lo + hi);
      (f(y) <= gamma ? hi : lo) = y[i];
    }
    alpha[i] = lo;
    sum += lo;
  }
  if (sum >= 1.0) return false;
  bool changed = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double cap = 1.0 - (sum - alpha[i]);
    if (cap < v.z[i]) {
      v.z[i] = cap;
      changed = true;
    }
  }
  if (changed) v.value = f(v.z);
  return true;
}

// Local descent from the incumbent: shift share from the coordinate with the
// weakest marginal effect to the strongest one, with a golden-section line
// search along that edge direction. Only ever lowers the objective, so the
// polyblock lower bound stays valid.
template <class Eval>
void polish(Eval& f, std::vector<double>& x, double& fx, std::size_t rounds) {
  const std::size_t n = x.size();
  if (n < 2 || !std::isfinite(fx)) return;
  constexpr double kStep = 1e-7;
  constexpr double kGolden = 0.6180339887498949;
  std::vector<double> g(n);
  std::vector<double> y(n);
  for (std::size_t r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      y = x;
      y[i] += kStep;
      g[i] = (f(y) - fx) / kStep;
    }
    std::size_t up = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(g[i])) return;
      if (up == n || g[i] < g[up]) up = i;
    }
    // Donor candidates, weakest marginal effect first.
    std::vector<std::size_t> donors;
    for (std::size_t i = 0; i < n; ++i)
      if (i != up && x[i] > 0.0 && g[i] - g[up] > 1e-9 * std::abs(fx)) donors.push_back(i);
    std::sort(donors.begin(), donors.end(), [&](std::size_t a, std::size_t b) {
      return g[a] != g[b] ? g[a] > g[b] : a < b;
    });

    bool moved = false;
    for (std::size_t down : donors) {
      const double span = x[down];
      const auto along = [&](double d) {
        y = x;
        y[up] += d;
        y[down] = d == span ? 0.0 : y[down] - d;
        return f(y);
      };
      double a = 0.0;
      double b = span;
      double c = b - kGolden * (b - a);
      double d = a + kGolden * (b - a);
      double fc = along(c);
      double fd = along(d);
      for (int it = 0; it < 60 && b - a > 1e-15; ++it) {
        if (fc <= fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - kGolden * (b - a);
          fc = along(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + kGolden * (b - a);
          fd = along(d);
        }
      }
      double step = fc <= fd ? c : d;
      double fstep = std::min(fc, fd);
      if (const double fe = along(span); fe <= fstep) {
        step = span;
        fstep = fe;
      }
      if (!(fstep < fx)) continue;
      x[up] += step;
      x[down] = step == span ? 0.0 : x[down] - step;
      fx = fstep;
      moved = true;
      break;
    }
    if (!moved) return;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// TimeAllocation

TimeAllocation::TimeAllocation(std::vector<double> eta) : eta_(std::move(eta)) {
  if (eta_.empty()) throw ValidationError("eta: allocation must have at least one entry");
  for (std::size_t i = 0; i < eta_.size(); ++i) {
    if (!(eta_[i] >= 0.0 && eta_[i] <= 1.0)) {
      std::ostringstream msg;
      msg << "eta[" << i << "]: share " << eta_[i] << " outside [0, 1]";
      throw ValidationError(msg.str());
    }
  }
  if (simplex_residual() > kSimplexTolerance)
    throw ValidationError("eta: shares do not sum to one");
}

TimeAllocation TimeAllocation::normalized(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw ValidationError("eta: weights must be finite and non-negative");
    sum += w;
  }
  if (!(sum > 0.0)) throw AllZeroAllocation("every weight is zero");
  std::vector<double> eta(weights.begin(), weights.end());
  for (auto& e : eta) e /= sum;
  return TimeAllocation(std::move(eta));
}

TimeAllocation TimeAllocation::uniform(std::size_t n) {
  std::vector<double> w(n, 1.0);
  return normalized(w);
}

std::size_t TimeAllocation::active_count(double threshold) const {
  return static_cast<std::size_t>(
      std::count_if(eta_.begin(), eta_.end(), [&](double e) { return e > threshold; }));
}

double TimeAllocation::simplex_residual() const {
  return std::abs(std::accumulate(eta_.begin(), eta_.end(), 0.0) - 1.0);
}

// ---------------------------------------------------------------------------
// Polyblock

SolveResult solve_single(const Objective& objective, std::size_t dim,
                         const SolverConfig& config) {
  if (dim == 0) throw ValidationError("solve_single: dimension must be positive");
  if (!(config.epsilon > 0.0)) throw ValidationError("solver.epsilon: must be positive");
  if (config.max_iter < 1) throw ValidationError("solver.max_iter: must be at least 1");
  if (config.max_vertices < 1)
    throw ValidationError("solver.max_vertices: must be at least 1");

  std::size_t evaluations = 0;
  const auto eval = [&](std::span<const double> x) {
    ++evaluations;
    return objective(x);
  };

  if (dim == 1) {
    const std::vector<double> one{1.0};
    const double v = eval(one);
    return SolveResult{.allocation = TimeAllocation(one),
                       .value = v,
                       .lower_bound = v,
                       .evaluations = evaluations,
                       .max_vertices = 1,
                       .converged = true};
  }

  probe_monotonicity(objective, dim, config.monotonicity_probes);

  const double slack = 1.0 + config.epsilon;
  std::vector<double> best_point(dim, 1.0 / static_cast<double>(dim));
  double best = eval(best_point);
  const std::size_t polish_rounds = 50 * dim;
  if (config.polish) polish(eval, best_point, best, polish_rounds);

  std::vector<Vertex> vertices;
  {
    Vertex top{std::vector<double>(dim, 1.0), 0.0};
    top.value = eval(top.z);
    if (std::isfinite(top.value)) vertices.push_back(std::move(top));
  }
  // Smallest objective among discarded vertices: part of the lower bound.
  double discarded_min = kInf;

  SolveResult result{.allocation = TimeAllocation::uniform(dim)};
  std::vector<double> p(dim);
  std::vector<Vertex> fresh;
  std::vector<std::size_t> split;
  std::vector<double> alpha;
  std::vector<double> scratch;
  std::size_t iter = 0;
  bool converged = false;
  double lower = best;

  for (;;) {
    // Discard vertices that cannot beat the incumbent by the target margin.
    const double cutoff = best / slack;
    std::erase_if(vertices, [&](const Vertex& v) {
      if (v.value >= cutoff) {
        discarded_min = std::min(discarded_min, v.value);
        return true;
      }
      return false;
    });
    result.max_vertices = std::max(result.max_vertices, vertices.size());

    if (vertices.empty()) {
      lower = std::min(discarded_min, best);
      converged = true;
      break;
    }
    const auto sel = std::min_element(vertices.begin(), vertices.end(), vertex_before);
    lower = std::min(sel->value, discarded_min);
    if (best <= slack * lower) {
      converged = true;
      break;
    }
    if (iter >= config.max_iter || vertices.size() > config.max_vertices) break;
    ++iter;

    const double sum = std::accumulate(sel->z.begin(), sel->z.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) p[i] = sel->z[i] / sum;
    const double fp = eval(p);
    if (fp < best) {
      best = fp;
      best_point = p;
      if (config.polish) polish(eval, best_point, best, polish_rounds);
    }
    if (config.record_history) result.history.push_back({lower, best});

    if (sum <= 1.0) {
      // The selected vertex is itself feasible, so nothing below it can do better.
      discarded_min = std::min(discarded_min, sel->value);
      vertices.erase(sel);
      continue;
    }

    // Cut every vertex strictly above p on the support of p. Off the support
    // both are zero, and the removed box (p, v] stays inside that face.
    split.clear();
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      const auto& z = vertices[v].z;
      bool above = true;
      for (std::size_t i = 0; i < dim && above; ++i) above = p[i] == 0.0 || z[i] > p[i];
      if (above) split.push_back(v);
    }
    const auto sel_index = static_cast<std::size_t>(sel - vertices.begin());
    if (std::find(split.begin(), split.end(), sel_index) == split.end()) {
      // Rounding put p on top of the vertex: it is feasible to working precision.
      discarded_min = std::min(discarded_min, sel->value);
      vertices.erase(sel);
      continue;
    }

    fresh.clear();
    for (std::size_t a = 0; a < split.size(); ++a) {
      const auto& za = vertices[split[a]].z;
      for (std::size_t i = 0; i < dim; ++i) {
        if (!(za[i] > p[i])) continue;
        // za with coordinate i lowered to p_i is dominated by the same cut of
        // another split vertex that is >= za off coordinate i.
        bool improper = false;
        for (std::size_t b = 0; b < split.size() && !improper; ++b) {
          if (b == a) continue;
          const auto& zb = vertices[split[b]].z;
          bool ge = true;
          bool equal = true;
          for (std::size_t j = 0; j < dim && ge; ++j) {
            if (j == i) continue;
            ge = zb[j] >= za[j];
            equal = equal && zb[j] == za[j];
          }
          // Identical cuts: keep the one from the earlier vertex.
          improper = ge && (!equal || b < a);
        }
        if (improper) continue;
        Vertex nv{za, 0.0};
        nv.z[i] = p[i];
        nv.value = eval(nv.z);
        if (!std::isfinite(nv.value) || nv.value >= best / slack) {
          discarded_min = std::min(discarded_min, nv.value);
          continue;
        }
        if (config.reduce) {
          // Whatever reduction cuts off lies above the current level.
          const double level = best / slack;
          if (!reduce(eval, nv, level, alpha, scratch) || !(nv.value < level)) {
            discarded_min = std::min(discarded_min, level);
            continue;
          }
        }
        fresh.push_back(std::move(nv));
      }
    }
    for (auto it = split.rbegin(); it != split.rend(); ++it) {
      if (*it + 1 != vertices.size()) vertices[*it] = std::move(vertices.back());
      vertices.pop_back();
    }
    for (auto& v : fresh) vertices.push_back(std::move(v));
  }

  result.allocation = TimeAllocation::normalized(best_point);
  result.value = eval(result.allocation.values());
  result.lower_bound = std::min(lower, result.value);
  result.iterations = iter;
  result.evaluations = evaluations;
  result.converged = converged;
  return result;
}

SolveResult solve_single_min_three(const Objective& objective, std::size_t dim,
                                   const SolverConfig& config) {
  if (dim < 3) throw ValidationError("solve_single_min_three: needs at least three BSs");
  if (!(config.min_eta > 0.0 && config.min_eta < 1.0))
    throw ValidationError("solver.min_eta: must lie in (0, 1)");

  SolveResult base = solve_single(objective, dim, config);
  const auto& eta = base.allocation.values();
  std::vector<std::size_t> active;
  for (std::size_t m = 0; m < dim; ++m)
    if (eta[m] > kActiveShareThreshold) active.push_back(m);
  if (active.size() != 2) return base;

  const std::size_t i = active[0];
  const std::size_t j = active[1];
  const double pair_sum = eta[i] + eta[j];
  const double t = config.min_eta;

  std::vector<double> best_point;
  double best = kInf;
  std::vector<double> candidate(dim);
  for (std::size_t q = 0; q < dim; ++q) {
    if (q == i || q == j) continue;
    std::fill(candidate.begin(), candidate.end(), 0.0);
    candidate[i] = (1.0 - t) * eta[i] / pair_sum;
    candidate[j] = (1.0 - t) * eta[j] / pair_sum;
    candidate[q] = t;
    const double v = objective(candidate);
    ++base.evaluations;
    if (v < best) {
      best = v;
      best_point = candidate;
    }
  }
  base.allocation = TimeAllocation::normalized(best_point);
  base.value = best;
  return base;
}

namespace {

// Per-target CRLB of a fixed plan, tabulated once.
class PlanCrlb {
 public:
  PlanCrlb(const AssociationPlan& plan, const BudgetTable& budgets, double c0) : c0_(c0) {
    for (std::size_t k = 0; k < plan.num_targets(); ++k) {
      Target t;
      std::vector<double> az;
      for (std::size_t m = 0; m < plan.num_bs(); ++m) {
        for (std::size_t n = 0; n < plan.num_slots(); ++n) {
          if (!plan.at(k, m, n)) continue;
          t.links.push_back({n, budgets.at(k, m).gamma_tilde});
          az.push_back(budgets.at(k, m).geometry.azimuth);
        }
      }
      const std::size_t l = t.links.size();
      t.sin2.resize(l * l);
      for (std::size_t a = 0; a < l; ++a)
        for (std::size_t b = 0; b < l; ++b) {
          const double s = std::sin(az[a] - az[b]);
          t.sin2[a * l + b] = s * s;
        }
      targets_.push_back(std::move(t));
    }
  }

  std::size_t size() const { return targets_.size(); }

  double operator()(std::size_t k, std::span<const double> eta) const {
    const auto& t = targets_[k];
    const std::size_t l = t.links.size();
    double total = 0.0;
    double pairwise = 0.0;
    for (std::size_t a = 0; a < l; ++a) {
      const double xa = eta[t.links[a].slot] * t.links[a].gamma;
      if (xa <= 0.0) continue;
      total += xa;
      double acc = 0.0;
      for (std::size_t b = 0; b < a; ++b)
        acc += eta[t.links[b].slot] * t.links[b].gamma * t.sin2[a * l + b];
      pairwise += xa * acc;
    }
    if (!(pairwise > kDegeneracyTolerance * total * total)) return kInf;
    return c0_ * total / pairwise;
  }

  double worst(std::span<const double> eta) const {
    double w = 0.0;
    for (std::size_t k = 0; k < targets_.size(); ++k) {
      w = std::max(w, (*this)(k, eta));
      if (!std::isfinite(w)) break;
    }
    return w;
  }

  // (sum_k f_k^q)^(1/q): smooth, above the max by at most K^(1/q).
  double power_mean(std::span<const double> eta, double q) const {
    const double w = worst(eta);
    if (!std::isfinite(w) || w <= 0.0) return w;
    double acc = 0.0;
    for (std::size_t k = 0; k < targets_.size(); ++k) acc += std::pow((*this)(k, eta) / w, q);
    return w * std::pow(acc, 1.0 / q);
  }

 private:
  struct Link {
    std::size_t slot;
    double gamma;
  };
  struct Target {
    std::vector<Link> links;
    std::vector<double> sin2;  // pairwise over links
  };
  double c0_;
  std::vector<Target> targets_;
};

}  // namespace

Objective minmax_objective(const AssociationPlan& plan, const BudgetTable& budgets, double c0) {
  return [f = PlanCrlb(plan, budgets, c0)](std::span<const double> eta) { return f.worst(eta); };
}

SolveResult solve_minmax(const AssociationPlan& plan, const BudgetTable& budgets, double c0,
                         const SolverConfig& config) {
  for (std::size_t k = 0; k < plan.num_targets(); ++k) {
    if (plan.associated_bs(k).size() < 2) {
      std::ostringstream msg;
      msg << "target " << k << " has fewer than two associated BSs";
      throw InfeasiblePlan(msg.str());
    }
  }
  if (plan.num_slots() == 0) throw InfeasiblePlan("plan has no time slots");
  const PlanCrlb crlb(plan, budgets, c0);
  SolveResult result = solve_single(
      [&crlb](std::span<const double> eta) { return crlb.worst(eta); }, plan.num_slots(), config);
  if (!config.polish || plan.num_slots() < 2 || result.converged) return result;

  // The max has kinks where coordinate descent stalls. Descend on power means
  // of growing order instead, which converge to the max from above, then
  // finish on the max itself.
  std::vector<double> x = result.allocation.values();
  const std::size_t rounds = 50 * plan.num_slots();
  for (double q : {8.0, 32.0, 128.0, 512.0, 2048.0, 8192.0, 32768.0}) {
    auto smooth = [&crlb, q, &result](std::span<const double> eta) {
      ++result.evaluations;
      return crlb.power_mean(eta, q);
    };
    double fx = smooth(x);
    polish(smooth, x, fx, rounds);
  }
  auto exact = [&crlb, &result](std::span<const double> eta) {
    ++result.evaluations;
    return crlb.worst(eta);
  };
  double fx = exact(x);
  polish(exact, x, fx, rounds);
  if (fx < result.value) {
    result.allocation = TimeAllocation::normalized(x);
    result.value = crlb.worst(result.allocation.values());
    result.lower_bound = std::min(result.lower_bound, result.value);
  }
  return result;
}

GridResult grid_oracle(const Objective& objective, std::size_t dim, std::size_t resolution) {
  if (dim == 0) throw ValidationError("grid_oracle: dimension must be positive");
  if (resolution == 0) throw ValidationError("grid_oracle: resolution must be positive");
  // Lattice size C(resolution + dim - 1, dim - 1), accumulated in floating point.
  double count = 1.0;
  for (std::size_t i = 1; i < dim; ++i)
    count = count * static_cast<double>(resolution + i) / static_cast<double>(i);
  if (count > kMaxGridPoints) {
    std::ostringstream msg;
    msg << "simplex lattice of dimension " << dim << " at resolution " << resolution << " has "
        << count << " points";
    throw DimensionTooLarge(msg.str());
  }

  GridResult best{std::vector<double>(dim, 0.0), kInf};
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> point(dim);
  const double h = 1.0 / static_cast<double>(resolution);

  bool first = true;
  // Enumerate compositions of `resolution` into `dim` parts in lexicographic order.
  idx[0] = resolution;
  for (;;) {
    for (std::size_t i = 0; i < dim; ++i) point[i] = static_cast<double>(idx[i]) * h;
    const double v = objective(point);
    if (first || v < best.value) {
      first = false;
      best.value = v;
      best.point = point;
    }
    if (dim == 1) break;
    // Next composition: move one unit from the last non-zero part before the
    // tail into its right neighbour, collecting the tail back there.
    std::size_t j = dim - 1;
    const std::size_t tail = idx[j];
    idx[j] = 0;
    std::size_t i = j;
    while (i > 0 && idx[i - 1] == 0) --i;
    if (i == 0) break;
    --idx[i - 1];
    idx[i] = tail + 1;
  }
  return best;
}

}  // namespace irsloc
