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

#ifndef PTPATH_PATHS_HPP
#define PTPATH_PATHS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace ptpath {

/// A point (eta0, eta1) of the exponential-family parameter plane. The
/// tempered density at this point is proportional to exp(eta0*W0 + eta1*W1).
struct AnnealingCoordinates {
  double eta0 = 0.0;
  double eta1 = 0.0;

  bool finite() const;
  double sum() const { return eta0 + eta1; }

  friend bool operator==(const AnnealingCoordinates&,
                         const AnnealingCoordinates&) = default;
};

inline AnnealingCoordinates operator+(AnnealingCoordinates a,
                                      AnnealingCoordinates b) {
  return {a.eta0 + b.eta0, a.eta1 + b.eta1};
}
inline AnnealingCoordinates operator-(AnnealingCoordinates a,
                                      AnnealingCoordinates b) {
  return {a.eta0 - b.eta0, a.eta1 - b.eta1};
}
inline AnnealingCoordinates operator*(double s, AnnealingCoordinates a) {
  return {s * a.eta0, s * a.eta1};
}

inline constexpr AnnealingCoordinates kReferenceEndpoint{1.0, 0.0};
inline constexpr AnnealingCoordinates kTargetEndpoint{0.0, 1.0};

/// Reference and target log-densities (W0(x), W1(x)) evaluated at one state.
struct LogWeights {
  double w0 = 0.0;
  double w1 = 0.0;

  friend bool operator==(const LogWeights&, const LogWeights&) = default;
};

inline double dot(AnnealingCoordinates eta, LogWeights w) {
  return eta.eta0 * w.w0 + eta.eta1 * w.w1;
}

/// Knots phi_0..phi_K of a K-segment linear spline in the parameter plane.
/// Endpoints are pinned to (1,0) and (0,1); components are monotone.
class SplineKnots {
 public:
  /// Throws ConstraintError when the knots violate an invariant.
  explicit SplineKnots(std::vector<AnnealingCoordinates> knots);

  /// K segments with knots evenly spaced on the linear path.
  static SplineKnots linear(int segments);

  static bool satisfies_invariants(std::span<const AnnealingCoordinates> knots);

  int segments() const { return static_cast<int>(knots_.size()) - 1; }
  std::span<const AnnealingCoordinates> knots() const { return knots_; }
  const AnnealingCoordinates& operator[](std::size_t k) const {
    return knots_[k];
  }

  friend bool operator==(const SplineKnots&, const SplineKnots&) = default;

 private:
  std::vector<AnnealingCoordinates> knots_;
};

/// Position of t inside a K-segment spline: the active segment (1-based) and
/// the barycentric weights on its left knot (segment-1) and right knot
/// (segment). At interior knot abscissae the right segment is chosen.
struct SplinePosition {
  int segment = 1;
  double left_weight = 1.0;
  double right_weight = 0.0;
};

SplinePosition spline_position(int segments, double t);

AnnealingCoordinates eta_linear(double t);
AnnealingCoordinates eta_spline(const SplineKnots& phi, double t);

/// Restores the knot invariants after an unconstrained update: keeps a
/// monotone subsequence chosen greedily from left to right (endpoints always
/// kept, superposed knots dropped) and refills the dropped slots by even
/// linear interpolation between the retained neighbours.
SplineKnots monotone_repair(std::span<const AnnealingCoordinates> knots);

/// Sup-norm guarantee M/(4K^2) for approximating a path with curvature
/// bounded by M using K spline segments.
double spline_best_approx_bound(double curvature_bound, int segments);

/// An annealing path t -> eta(t). Linear and spline paths run from (1,0) to
/// (0,1); a custom path only has its target endpoint pinned.
class PathDescriptor {
 public:
  using EtaFunction = std::function<AnnealingCoordinates(double)>;

  enum class Kind { linear, spline, custom };

  static PathDescriptor linear();
  static PathDescriptor spline(SplineKnots knots);
  /// Throws ConstraintError unless eta(1) == (0,1). Without an explicit
  /// derivative, central differences are used.
  static PathDescriptor custom(EtaFunction eta, EtaFunction derivative = {});

  Kind kind() const;
  AnnealingCoordinates eta(double t) const;
  /// d eta / dt. Spline paths use the right segment at interior knots.
  AnnealingCoordinates eta_derivative(double t) const;
  /// Non-null only for spline paths.
  const SplineKnots* knots() const;

 private:
  struct Linear {};
  struct Custom {
    EtaFunction eta;
    EtaFunction derivative;
  };

  explicit PathDescriptor(std::variant<Linear, SplineKnots, Custom> repr)
      : repr_(std::move(repr)) {}

  std::variant<Linear, SplineKnots, Custom> repr_;
};

/// eta(t) . (W0, W1); throws EvaluationError on non-finite weights.
double log_density_unnormalized(const PathDescriptor& path, double t,
                                LogWeights w);

}  // namespace ptpath

#endif  // PTPATH_PATHS_HPP
