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

#include "ptpath/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "ptpath/errors.hpp"

namespace ptpath {

namespace {

constexpr int kMaxBisectionIterations = 60;
constexpr double kValueTolerance = 1e-12;

}  // namespace

Schedule::Schedule(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2 || points_.front() != 0.0 || points_.back() != 1.0) {
    throw ConstraintError("schedule must have >= 2 points from 0 to 1");
  }
  if (!std::is_sorted(points_.begin(), points_.end()) ||
      !std::all_of(points_.begin(), points_.end(),
                   [](double t) { return std::isfinite(t); })) {
    throw ConstraintError("schedule points must be sorted");
  }
}

Schedule Schedule::uniform(int intervals) {
  if (intervals < 1) throw ConstraintError("schedule needs N >= 1");
  std::vector<double> pts(static_cast<std::size_t>(intervals) + 1);
  for (int n = 0; n <= intervals; ++n) {
    pts[n] = static_cast<double>(n) / intervals;
  }
  pts.back() = 1.0;
  return Schedule(std::move(pts));
}

BarrierInterpolant::BarrierInterpolant(std::vector<double> abscissae,
                                       std::vector<double> ordinates)
    : abscissae_(std::move(abscissae)), ordinates_(std::move(ordinates)) {
  const std::size_t n = abscissae_.size();
  if (n < 2 || ordinates_.size() != n) {
    throw ConstraintError("barrier interpolant needs >= 2 matching knots");
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (!(abscissae_[k] > abscissae_[k - 1])) {
      throw ConstraintError("barrier abscissae must be strictly increasing");
    }
    if (ordinates_[k] < ordinates_[k - 1]) {
      throw ConstraintError("barrier ordinates must be non-decreasing");
    }
  }

  std::vector<double> secant(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    secant[k] = (ordinates_[k + 1] - ordinates_[k]) /
                (abscissae_[k + 1] - abscissae_[k]);
  }
  tangents_.assign(n, 0.0);
  tangents_.front() = secant.front();
  tangents_.back() = secant.back();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (secant[k - 1] > 0.0 && secant[k] > 0.0) {
      tangents_[k] = 0.5 * (secant[k - 1] + secant[k]);
    }
  }
  // Fritsch-Carlson limiter: keep (alpha, beta) inside the circle of radius 3.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (secant[k] == 0.0) {
      tangents_[k] = 0.0;
      tangents_[k + 1] = 0.0;
      continue;
    }
    const double alpha = tangents_[k] / secant[k];
    const double beta = tangents_[k + 1] / secant[k];
    const double radius2 = alpha * alpha + beta * beta;
    if (radius2 > 9.0) {
      const double tau = 3.0 / std::sqrt(radius2);
      tangents_[k] = tau * alpha * secant[k];
      tangents_[k + 1] = tau * beta * secant[k];
    }
  }
}

double BarrierInterpolant::operator()(double t) const {
  if (t <= abscissae_.front()) return ordinates_.front();
  if (t >= abscissae_.back()) return ordinates_.back();
  const auto it = std::upper_bound(abscissae_.begin(), abscissae_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - abscissae_.begin()) - 1;
  const double h = abscissae_[k + 1] - abscissae_[k];
  const double s = (t - abscissae_[k]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  const double v = h00 * ordinates_[k] + h10 * h * tangents_[k] +
                   h01 * ordinates_[k + 1] + h11 * h * tangents_[k + 1];
  return std::clamp(v, ordinates_[k], ordinates_[k + 1]);
}

BarrierInterpolant fit_cumulative_barrier(const Schedule& schedule,
                                          std::span<const double> rejections) {
  if (rejections.size() != static_cast<std::size_t>(schedule.intervals())) {
    throw ConstraintError("need one rejection estimate per neighbour pair");
  }
  std::vector<double> xs{schedule[0]};
  std::vector<double> ys{0.0};
  double cumulative = 0.0;
  for (std::size_t n = 0; n < rejections.size(); ++n) {
    if (!(rejections[n] >= 0.0) || !std::isfinite(rejections[n])) {
      throw ConstraintError("rejection estimates must be finite and >= 0");
    }
    cumulative += rejections[n];
    const double t = schedule[n + 1];
    if (t == xs.back()) {
      ys.back() = cumulative;
    } else {
      xs.push_back(t);
      ys.push_back(cumulative);
    }
  }
  if (xs.size() < 2) {
    // Degenerate schedule (all points coincide); cannot happen with pinned
    // endpoints but guard the interpolant precondition anyway.
    xs = {0.0, 1.0};
    ys = {0.0, cumulative};
  }
  return BarrierInterpolant(std::move(xs), std::move(ys));
}

Schedule update_schedule(const BarrierInterpolant& barrier, int intervals,
                         double tolerance) {
  if (intervals < 1) throw ConstraintError("schedule needs N >= 1");
  const double total = barrier.total();
  if (!(total > 0.0)) return Schedule::uniform(intervals);

  std::vector<double> pts(static_cast<std::size_t>(intervals) + 1);
  pts.front() = 0.0;
  pts.back() = 1.0;
  for (int n = 1; n < intervals; ++n) {
    const double target = total * n / intervals;
    double lo = 0.0;
    double hi = 1.0;
    double mid = 0.5;
    for (int it = 0; it < kMaxBisectionIterations; ++it) {
      mid = 0.5 * (lo + hi);
      const double value = barrier(mid);
      // Steep segments need a finer bracket than `tolerance` to pin the
      // barrier value itself.
      if (hi - lo <= tolerance &&
          std::abs(value - target) <= kValueTolerance * total) {
        break;
      }
      if (value < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    pts[n] = std::max(mid, pts[n - 1]);
  }
  return Schedule(std::move(pts));
}

}  // namespace ptpath
