// Copyright 2026 The ptpath Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ptpath/paths.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptpath/errors.hpp"

namespace ptpath {

namespace {

void check_unit_interval(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("path parameter t=" + std::to_string(t) +
                      " outside [0,1]");
  }
}

// Whether `next` may follow `last` in a repaired knot sequence that must still
// reach the target endpoint.
bool can_follow(const AnnealingCoordinates& last,
                const AnnealingCoordinates& next) {
  return next.finite() && next.eta0 <= last.eta0 && next.eta0 >= 0.0 &&
         next.eta1 >= last.eta1 && next.eta1 <= 1.0 && next != last &&
         next != kTargetEndpoint;
}

}  // namespace

bool AnnealingCoordinates::finite() const {
  return std::isfinite(eta0) && std::isfinite(eta1);
}

SplineKnots::SplineKnots(std::vector<AnnealingCoordinates> knots)
    : knots_(std::move(knots)) {
  if (!satisfies_invariants(knots_)) {
    throw ConstraintError(
        "spline knots must number at least 2, start at (1,0), end at (0,1) "
        "and be componentwise monotone");
  }
}

SplineKnots SplineKnots::linear(int segments) {
  if (segments < 1) {
    throw ConstraintError("a spline needs at least one segment");
  }
  std::vector<AnnealingCoordinates> knots(segments + 1);
  for (int k = 0; k <= segments; ++k) {
    const double s = static_cast<double>(k) / segments;
    knots[k] = {1.0 - s, s};
  }
  knots.front() = kReferenceEndpoint;
  knots.back() = kTargetEndpoint;
  return SplineKnots(std::move(knots));
}

bool SplineKnots::satisfies_invariants(
    std::span<const AnnealingCoordinates> knots) {
  if (knots.size() < 2) return false;
  if (knots.front() != kReferenceEndpoint || knots.back() != kTargetEndpoint) {
    return false;
  }
  for (std::size_t k = 1; k < knots.size(); ++k) {
    if (!knots[k].finite()) return false;
    if (knots[k].eta0 > knots[k - 1].eta0) return false;
    if (knots[k].eta1 < knots[k - 1].eta1) return false;
  }
  return true;
}

SplinePosition spline_position(int segments, double t) {
  check_unit_interval(t);
  const double scaled = segments * t;
  const int k = std::clamp(static_cast<int>(std::floor(scaled)) + 1, 1,
                           segments);
  const double right = scaled - (k - 1);
  return {k, 1.0 - right, right};
}

AnnealingCoordinates eta_linear(double t) {
  check_unit_interval(t);
  return {1.0 - t, t};
}

AnnealingCoordinates eta_spline(const SplineKnots& phi, double t) {
  const SplinePosition pos = spline_position(phi.segments(), t);
  if (pos.right_weight == 0.0) return phi[pos.segment - 1];
  if (pos.left_weight == 0.0) return phi[pos.segment];
  return pos.left_weight * phi[pos.segment - 1] +
         pos.right_weight * phi[pos.segment];
}

SplineKnots monotone_repair(std::span<const AnnealingCoordinates> knots) {
  if (knots.size() < 2 || knots.front() != kReferenceEndpoint ||
      knots.back() != kTargetEndpoint) {
    throw ConstraintError("monotone_repair requires pinned endpoints");
  }
  const std::size_t last_index = knots.size() - 1;

  std::vector<std::size_t> kept{0};
  for (std::size_t k = 1; k < last_index; ++k) {
    if (can_follow(knots[kept.back()], knots[k])) kept.push_back(k);
  }
  kept.push_back(last_index);

  std::vector<AnnealingCoordinates> out(knots.size());
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
    const std::size_t lo = kept[i];
    const std::size_t hi = kept[i + 1];
    const AnnealingCoordinates a = knots[lo];
    const AnnealingCoordinates b = knots[hi];
    out[lo] = a;
    for (std::size_t p = lo + 1; p < hi; ++p) {
      const double s = static_cast<double>(p - lo) / static_cast<double>(hi - lo);
      out[p] = {a.eta0 + s * (b.eta0 - a.eta0), a.eta1 + s * (b.eta1 - a.eta1)};
    }
  }
  out.back() = kTargetEndpoint;
  return SplineKnots(std::move(out));
}

double spline_best_approx_bound(double curvature_bound, int segments) {
  if (!(curvature_bound > 0.0) || segments < 1) {
    throw DomainError("approximation bound needs M > 0 and K >= 1");
  }
  return curvature_bound / (4.0 * segments * segments);
}

PathDescriptor PathDescriptor::linear() { return PathDescriptor(Linear{}); }

PathDescriptor PathDescriptor::spline(SplineKnots knots) {
  return PathDescriptor(std::move(knots));
}

PathDescriptor PathDescriptor::custom(EtaFunction eta,
                                      EtaFunction derivative) {
  if (!eta) throw ConstraintError("custom path needs an eta function");
  if (eta(1.0) != kTargetEndpoint) {
    throw ConstraintError("custom path must satisfy eta(1) = (0,1)");
  }
  return PathDescriptor(Custom{std::move(eta), std::move(derivative)});
}

PathDescriptor::Kind PathDescriptor::kind() const {
  switch (repr_.index()) {
    case 0:
      return Kind::linear;
    case 1:
      return Kind::spline;
    default:
      return Kind::custom;
  }
}

AnnealingCoordinates PathDescriptor::eta(double t) const {
  if (const auto* knots = std::get_if<SplineKnots>(&repr_)) {
    return eta_spline(*knots, t);
  }
  if (const auto* custom = std::get_if<Custom>(&repr_)) {
    check_unit_interval(t);
    return custom->eta(t);
  }
  return eta_linear(t);
}

AnnealingCoordinates PathDescriptor::eta_derivative(double t) const {
  check_unit_interval(t);
  if (const auto* knots = std::get_if<SplineKnots>(&repr_)) {
    const int K = knots->segments();
    const SplinePosition pos = spline_position(K, t);
    return static_cast<double>(K) *
           ((*knots)[pos.segment] - (*knots)[pos.segment - 1]);
  }
  if (const auto* custom = std::get_if<Custom>(&repr_)) {
    if (custom->derivative) return custom->derivative(t);
    constexpr double h = 1e-6;
    const double lo = std::max(0.0, t - h);
    const double hi = std::min(1.0, t + h);
    return (1.0 / (hi - lo)) * (custom->eta(hi) - custom->eta(lo));
  }
  return {-1.0, 1.0};
}

const SplineKnots* PathDescriptor::knots() const {
  return std::get_if<SplineKnots>(&repr_);
}

double log_density_unnormalized(const PathDescriptor& path, double t,
                                LogWeights w) {
  if (!std::isfinite(w.w0) || !std::isfinite(w.w1)) {
    throw EvaluationError("non-finite log-density component");
  }
  return dot(path.eta(t), w);
}

}  // namespace ptpath
