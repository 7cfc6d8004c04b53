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

#include "ptpath/objective.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ptpath/errors.hpp"

namespace ptpath {

namespace {

void check_batches(const Schedule& schedule,
                   std::span<const WeightBatch> batches,
                   std::size_t min_size) {
  if (batches.size() != schedule.size()) {
    throw ConstraintError("need one sample batch per chain");
  }
  for (const auto& b : batches) {
    if (b.size() < min_size) {
      throw ConstraintError(min_size == 1
                                ? "empty sample batch"
                                : "gradient needs >= 2 samples per chain");
    }
  }
}

struct BatchMoments {
  std::array<double, 2> mean{};
  std::array<std::array<double, 2>, 2> cov{};
};

BatchMoments moments(const WeightBatch& batch) {
  BatchMoments m;
  const double count = static_cast<double>(batch.size());
  for (const LogWeights& w : batch) {
    m.mean[0] += w.w0;
    m.mean[1] += w.w1;
  }
  m.mean[0] /= count;
  m.mean[1] /= count;
  for (const LogWeights& w : batch) {
    const double d0 = w.w0 - m.mean[0];
    const double d1 = w.w1 - m.mean[1];
    m.cov[0][0] += d0 * d0;
    m.cov[0][1] += d0 * d1;
    m.cov[1][1] += d1 * d1;
  }
  const double denom = count - 1.0;
  m.cov[0][0] /= denom;
  m.cov[0][1] /= denom;
  m.cov[1][1] /= denom;
  m.cov[1][0] = m.cov[0][1];
  return m;
}

}  // namespace

std::vector<AnnealingCoordinates> skl_coefficients(const PathDescriptor& path,
                                                   const Schedule& schedule) {
  const std::size_t n_chains = schedule.size();
  std::vector<AnnealingCoordinates> eta(n_chains);
  for (std::size_t n = 0; n < n_chains; ++n) eta[n] = path.eta(schedule[n]);

  std::vector<AnnealingCoordinates> z(n_chains);
  const std::size_t last = n_chains - 1;
  z[0] = eta[0] - eta[1];
  for (std::size_t n = 1; n < last; ++n) {
    z[n] = 2.0 * eta[n] - eta[n + 1] - eta[n - 1];
  }
  z[last] = eta[last] - eta[last - 1];
  return z;
}

double estimate_skl(const PathDescriptor& path, const Schedule& schedule,
                    std::span<const WeightBatch> batches) {
  check_batches(schedule, batches, 1);
  const auto z = skl_coefficients(path, schedule);
  double total = 0.0;
  for (std::size_t n = 0; n < z.size(); ++n) {
    double chain_sum = 0.0;
    for (const LogWeights& w : batches[n]) chain_sum += dot(z[n], w);
    total += chain_sum / static_cast<double>(batches[n].size());
  }
  return total;
}

SklGradientEstimate estimate_skl_gradient(const SplineKnots& knots,
                                          const Schedule& schedule,
                                          std::span<const WeightBatch> batches) {
  check_batches(schedule, batches, 2);
  const PathDescriptor path = PathDescriptor::spline(knots);
  const auto z = skl_coefficients(path, schedule);
  const int K = knots.segments();
  const std::size_t n_chains = schedule.size();
  const std::size_t last = n_chains - 1;

  // b[n][k] = d eta(t_n) / d phi_k (a scalar multiple of the identity).
  std::vector<std::vector<double>> b(n_chains,
                                     std::vector<double>(K + 1, 0.0));
  for (std::size_t n = 0; n < n_chains; ++n) {
    const SplinePosition pos = spline_position(K, schedule[n]);
    b[n][pos.segment - 1] += pos.left_weight;
    b[n][pos.segment] += pos.right_weight;
  }

  // Gradient with respect to phi_{k,c}, all knots.
  std::vector<std::array<double, 2>> grad_phi(K + 1, {0.0, 0.0});
  SklGradientEstimate out;
  for (std::size_t n = 0; n < n_chains; ++n) {
    const BatchMoments m = moments(batches[n]);
    out.value += z[n].eta0 * m.mean[0] + z[n].eta1 * m.mean[1];
    out.sample_count += batches[n].size();
    // Cov[dW_phi/dphi, J] = b_{n,k} Cov[W_c, z_n . W].
    const std::array<double, 2> cov_wj = {
        m.cov[0][0] * z[n].eta0 + m.cov[0][1] * z[n].eta1,
        m.cov[1][0] * z[n].eta0 + m.cov[1][1] * z[n].eta1};
    for (int k = 0; k <= K; ++k) {
      double dz = 0.0;  // d z_n / d phi_k
      if (n == 0) {
        dz = b[0][k] - b[1][k];
      } else if (n == last) {
        dz = b[last][k] - b[last - 1][k];
      } else {
        dz = 2.0 * b[n][k] - b[n + 1][k] - b[n - 1][k];
      }
      for (int c = 0; c < 2; ++c) {
        grad_phi[k][c] += b[n][k] * cov_wj[c] + dz * m.mean[c];
      }
    }
  }

  out.gradient.reserve(2 * static_cast<std::size_t>(K - 1));
  for (int k = 1; k < K; ++k) {
    out.gradient.push_back(grad_phi[k][0] *
                           std::max(knots[k].eta0, kKnotPositivityFloor));
    out.gradient.push_back(grad_phi[k][1] *
                           std::max(knots[k].eta1, kKnotPositivityFloor));
  }
  return out;
}

std::vector<double> log_knot_coordinates(const SplineKnots& knots,
                                         double floor) {
  std::vector<double> psi;
  const int K = knots.segments();
  psi.reserve(2 * static_cast<std::size_t>(std::max(K - 1, 0)));
  for (int k = 1; k < K; ++k) {
    psi.push_back(std::log(std::max(knots[k].eta0, floor)));
    psi.push_back(std::log(std::max(knots[k].eta1, floor)));
  }
  return psi;
}

SplineKnots apply_knot_update(const SplineKnots& knots,
                              std::span<const double> psi) {
  const int K = knots.segments();
  if (psi.size() != 2 * static_cast<std::size_t>(K - 1)) {
    throw ConstraintError("log-knot vector has the wrong dimension");
  }
  std::vector<AnnealingCoordinates> raw(knots.knots().begin(),
                                        knots.knots().end());
  for (int k = 1; k < K; ++k) {
    raw[k] = {std::exp(psi[2 * (k - 1)]), std::exp(psi[2 * (k - 1) + 1])};
  }
  raw.front() = kReferenceEndpoint;
  raw.back() = kTargetEndpoint;
  return monotone_repair(raw);
}

AdagradStep adagrad_step(OptimizerState& state, std::span<const double> psi,
                         std::span<const double> gradient) {
  if (psi.size() != gradient.size()) {
    throw ConstraintError("adagrad: psi and gradient dimensions differ");
  }
  if (state.accumulator.empty()) state.accumulator.assign(psi.size(), 0.0);
  if (state.accumulator.size() != psi.size()) {
    throw ConstraintError("adagrad: accumulator dimension differs");
  }

  AdagradStep out;
  out.psi.assign(psi.begin(), psi.end());
  out.scaled_gradient.assign(psi.size(), 0.0);
  if (!std::all_of(gradient.begin(), gradient.end(),
                   [](double g) { return std::isfinite(g); })) {
    return out;
  }
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double phi = std::exp(psi[i]);
    const double g = gradient[i];
    const double scaled = g == 0.0 ? 0.0 : g / (std::abs(g) + phi);
    out.scaled_gradient[i] = scaled;
    state.accumulator[i] += scaled * scaled;
    out.psi[i] = psi[i] - state.learning_rate * scaled /
                              std::sqrt(state.accumulator[i] + state.epsilon);
  }
  out.applied = true;
  return out;
}

}  // namespace ptpath
