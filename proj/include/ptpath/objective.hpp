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

#ifndef PTPATH_OBJECTIVE_HPP
#define PTPATH_OBJECTIVE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ptpath/paths.hpp"
#include "ptpath/schedule.hpp"

namespace ptpath {

/// Samples of W(x) for one chain, x drawn from that chain's distribution.
using WeightBatch = std::vector<LogWeights>;

/// Lower clamp applied to knot components before taking logs.
inline constexpr double kKnotPositivityFloor = 1e-6;

struct SklGradientEstimate {
  /// Estimated sum over neighbours of SKL(pi_{t_n}, pi_{t_{n+1}}).
  double value = 0.0;
  /// d value / d psi over interior knots, ordered
  /// [psi_{1,0}, psi_{1,1}, psi_{2,0}, ...], psi = log phi.
  std::vector<double> gradient;
  std::size_t sample_count = 0;
};

/// Per-chain coefficients z_n with J_n(x) = z_n . W(x):
/// z_0 = eta_0 - eta_1, z_n = 2 eta_n - eta_{n+1} - eta_{n-1},
/// z_N = eta_N - eta_{N-1}.
std::vector<AnnealingCoordinates> skl_coefficients(const PathDescriptor& path,
                                                   const Schedule& schedule);

/// Sum over chains of the batch mean of z_n . W. Throws ConstraintError when
/// the batch count is wrong or a batch is empty.
double estimate_skl(const PathDescriptor& path, const Schedule& schedule,
                    std::span<const WeightBatch> batches);

/// Score-function gradient of the SKL sum with respect to the log interior
/// knot coordinates. Every batch needs at least two samples.
SklGradientEstimate estimate_skl_gradient(const SplineKnots& knots,
                                          const Schedule& schedule,
                                          std::span<const WeightBatch> batches);

/// psi = log(max(phi, floor)) over interior knot components.
std::vector<double> log_knot_coordinates(const SplineKnots& knots,
                                         double floor = kKnotPositivityFloor);

/// Exponentiates psi into the interior knots, pins the endpoints and runs
/// monotone_repair.
SplineKnots apply_knot_update(const SplineKnots& knots,
                              std::span<const double> psi);

struct OptimizerState {
  std::vector<double> accumulator;
  double learning_rate = 0.2;
  double epsilon = 1e-8;
};

struct AdagradStep {
  bool applied = false;
  std::vector<double> psi;
  /// g_i / (|g_i| + phi_i), with phi_i = exp(psi_i).
  std::vector<double> scaled_gradient;
};

/// Adagrad on psi with the gradient scaled elementwise into (-1, 1). A
/// non-finite gradient leaves psi and the accumulator untouched and reports
/// applied = false.
AdagradStep adagrad_step(OptimizerState& state, std::span<const double> psi,
                         std::span<const double> gradient);

}  // namespace ptpath

#endif  // PTPATH_OBJECTIVE_HPP
