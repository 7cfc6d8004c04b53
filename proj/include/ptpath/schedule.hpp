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

#ifndef PTPATH_SCHEDULE_HPP
#define PTPATH_SCHEDULE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace ptpath {

/// Annealing schedule 0 = t_0 <= t_1 <= ... <= t_N = 1.
class Schedule {
 public:
  /// Throws ConstraintError unless the points are sorted with pinned ends.
  explicit Schedule(std::vector<double> points);

  static Schedule uniform(int intervals);

  /// N, the number of neighbouring chain pairs.
  int intervals() const { return static_cast<int>(points_.size()) - 1; }
  std::size_t size() const { return points_.size(); }
  std::span<const double> points() const { return points_; }
  double operator[](std::size_t n) const { return points_[n]; }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<double> points_;
};

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolant of the cumulative
/// rejection t -> sum_{m<n} r_m through the knots (t_n, sum_{m<n} r_m).
class BarrierInterpolant {
 public:
  /// Abscissae strictly increasing from 0 to 1, ordinates non-decreasing
  /// from 0.
  BarrierInterpolant(std::vector<double> abscissae,
                     std::vector<double> ordinates);

  double operator()(double t) const;
  /// Value at t = 1 (the estimated barrier).
  double total() const { return ordinates_.back(); }

  std::span<const double> abscissae() const { return abscissae_; }
  std::span<const double> ordinates() const { return ordinates_; }
  std::span<const double> tangents() const { return tangents_; }

 private:
  std::vector<double> abscissae_;
  std::vector<double> ordinates_;
  std::vector<double> tangents_;
};

/// Fits the cumulative barrier from per-neighbour rejection estimates.
/// Coincident schedule points are merged before fitting.
BarrierInterpolant fit_cumulative_barrier(const Schedule& schedule,
                                          std::span<const double> rejections);

/// Schedule whose points split the barrier into N equal parts, found by
/// bisection on [0,1]. Falls back to the uniform grid for a flat barrier.
Schedule update_schedule(const BarrierInterpolant& barrier, int intervals,
                         double tolerance = 1e-10);

}  // namespace ptpath

#endif  // PTPATH_SCHEDULE_HPP
