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

#include "irsloc/crlb.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "irsloc/errors.hpp"

namespace irsloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sin2(double a) {
  const double s = std::sin(a);
  return s * s;
}

}  // namespace

MeasurementSet::MeasurementSet(std::vector<RangeMeasurement> entries)
    : entries_(std::move(entries)) {
  if (entries_.size() < 2)
    throw ValidationError("measurements: at least two range measurements are required");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const double v = entries_[i].variance;
    if (!std::isfinite(v) || v <= 0.0) {
      std::ostringstream msg;
      msg << "measurements[" << i << "].variance: must be finite and strictly positive";
      throw ValidationError(msg.str());
    }
  }
}

Matrix2 fim(const MeasurementSet& ms) {
  Matrix2 f;
  for (const auto& e : ms.entries()) {
    const double ce = std::cos(e.elevation);
    const double jx = std::cos(e.azimuth) * ce;
    const double jy = std::sin(e.azimuth) * ce;
    const double w = 1.0 / e.variance;
    f.xx += w * jx * jx;
    f.xy += w * jx * jy;
    f.yy += w * jy * jy;
  }
  return f;
}

CrlbReport crlb_closed_form(const MeasurementSet& ms) {
  const auto& en = ms.entries();
  std::vector<double> w(en.size());
  double num = 0.0;
  CrlbReport r;
  for (std::size_t i = 0; i < en.size(); ++i) {
    const double ce = std::cos(en[i].elevation);
    w[i] = ce * ce / en[i].variance;
    num += w[i];
    const double ca = std::cos(en[i].azimuth);
    const double sa = std::sin(en[i].azimuth);
    r.fim.xx += w[i] * ca * ca;
    r.fim.xy += w[i] * ca * sa;
    r.fim.yy += w[i] * sa * sa;
  }
  // det(FIM) as a sum over pairs; avoids the cancellation in xx*yy - xy^2.
  double den = 0.0;
  for (std::size_t i = 0; i < en.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) den += w[i] * w[j] * sin2(en[i].azimuth - en[j].azimuth);
  if (!(den > kDegeneracyTolerance * num * num)) {
    r.value = kInf;
    r.degenerate = true;
    return r;
  }
  r.value = num / den;
  return r;
}

CrlbReport crlb_from_snr(std::span<const double> x, std::span<const double> azimuths,
                         double c0) {
  const std::size_t n = x.size();
  CrlbReport r;
  double total = 0.0;
  double pairwise = 0.0;
  std::size_t positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] <= 0.0) continue;
    ++positive;
    total += x[i];
    const double ca = std::cos(azimuths[i]);
    const double sa = std::sin(azimuths[i]);
    r.fim.xx += x[i] * ca * ca / c0;
    r.fim.xy += x[i] * ca * sa / c0;
    r.fim.yy += x[i] * sa * sa / c0;
    for (std::size_t j = 0; j < i; ++j) {
      if (x[j] <= 0.0) continue;
      pairwise += x[i] * x[j] * sin2(azimuths[i] - azimuths[j]);
    }
  }
  if (positive < 2 || !(pairwise > kDegeneracyTolerance * total * total)) {
    r.value = kInf;
    r.degenerate = true;
    return r;
  }
  r.value = c0 * total / pairwise;
  return r;
}

double crlb_simplified(std::span<const double> etas, std::span<const double> gamma_tildes,
                       std::span<const double> azimuths, double c0) {
  if (etas.size() != gamma_tildes.size() || etas.size() != azimuths.size())
    throw ValidationError("crlb_simplified: eta, gamma and azimuth lists differ in length");
  std::vector<double> x(etas.size());
  bool any = false;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    x[i] = etas[i] * gamma_tildes[i];
    any = any || etas[i] > 0.0;
  }
  if (!any) throw AllZeroAllocation("every time share is zero");
  return crlb_from_snr(x, azimuths, c0).value;
}

std::vector<CrlbReport> crlb_multitarget(const AssociationPlan& plan,
                                         const TimeAllocation& etas, const BudgetTable& budgets,
                                         double c0) {
  if (etas.size() != plan.num_slots())
    throw ValidationError("crlb_multitarget: allocation length differs from the slot count");
  if (budgets.num_targets() != plan.num_targets() || budgets.num_bs() != plan.num_bs())
    throw ValidationError("crlb_multitarget: budget table does not match the plan shape");

  std::vector<CrlbReport> out;
  out.reserve(plan.num_targets());
  std::vector<double> x(plan.num_bs());
  std::vector<double> az(plan.num_bs());
  for (std::size_t k = 0; k < plan.num_targets(); ++k) {
    for (std::size_t m = 0; m < plan.num_bs(); ++m) {
      double share = 0.0;
      for (std::size_t n = 0; n < plan.num_slots(); ++n)
        if (plan.at(k, m, n)) share += etas[n];
      x[m] = share * budgets.at(k, m).gamma_tilde;
      az[m] = budgets.at(k, m).geometry.azimuth;
    }
    out.push_back(crlb_from_snr(x, az, c0));
  }
  return out;
}

double analytic_lower_bound(const RadioParams& radio, int elements, double height_gap) {
  const double d = radio.d_min;
  if (!(d > std::abs(height_gap)))
    throw InvalidGeometry("d_min must exceed the BS-IRS height difference");
  const double l = static_cast<double>(elements);
  const double d2 = d * d;
  return 4.0 * radio.c0 * radio.delta_t * d2 * d2 * d2 * radio.sigma_s2 /
         (radio.p_tx * radio.delta_T * radio.beta0 * radio.beta0 * l * l *
          (d2 - height_gap * height_gap));
}

TwoBsOptimum two_bs_optimal(double gamma1, double gamma2, double azimuth_gap, double c0) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
    throw ValidationError("two_bs_optimal: SNRs must be strictly positive");
  const double s2 = sin2(azimuth_gap);
  if (!(s2 > kDegeneracyTolerance))
    throw DegenerateGeometry("two BSs on a common line through the target");
  const double r1 = std::sqrt(gamma1);
  const double r2 = std::sqrt(gamma2);
  TwoBsOptimum o;
  o.eta1 = r2 / (r1 + r2);
  o.eta2 = r1 / (r1 + r2);
  o.crlb = c0 * (r1 + r2) * (r1 + r2) / (gamma1 * gamma2 * s2);
  return o;
}

SingleTargetCrlb::SingleTargetCrlb(std::vector<double> gamma_tildes, std::vector<double> azimuths,
                                   double c0)
    : gamma_(std::move(gamma_tildes)), azimuth_(std::move(azimuths)), c0_(c0) {
  if (gamma_.size() != azimuth_.size())
    throw ValidationError("SingleTargetCrlb: gamma and azimuth lists differ in length");
  const std::size_t n = gamma_.size();
  sin2_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sin2_[i * n + j] = sin2(azimuth_[i] - azimuth_[j]);
}

double SingleTargetCrlb::operator()(std::span<const double> eta) const {
  const std::size_t n = gamma_.size();
  double total = 0.0;
  double pairwise = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = eta[i] * gamma_[i];
    if (xi <= 0.0) continue;
    total += xi;
    const double* row = &sin2_[i * n];
    double acc = 0.0;
    for (std::size_t j = 0; j < i; ++j) acc += eta[j] * gamma_[j] * row[j];
    pairwise += xi * acc;
  }
  if (!(pairwise > kDegeneracyTolerance * total * total)) return kInf;
  return c0_ * total / pairwise;
}

SingleTargetCrlb SingleTargetCrlb::for_target(const BudgetTable& budgets, std::size_t k,
                                              double c0) {
  std::vector<double> g(budgets.num_bs());
  std::vector<double> az(budgets.num_bs());
  for (std::size_t m = 0; m < budgets.num_bs(); ++m) {
    g[m] = budgets.at(k, m).gamma_tilde;
    az[m] = budgets.at(k, m).geometry.azimuth;
  }
  return SingleTargetCrlb(std::move(g), std::move(az), c0);
}

}  // namespace irsloc
