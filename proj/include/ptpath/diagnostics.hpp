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

#ifndef PTPATH_DIAGNOSTICS_HPP
#define PTPATH_DIAGNOSTICS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ptpath/models.hpp"
#include "ptpath/paths.hpp"

namespace ptpath {

// Analytic oracles for the Gaussian pair N(mu0, s^2) -> N(mu1, s^2) with
// z = |mu1 - mu0| / s.

/// Instantaneous rejection rate of the linear path, z / sqrt(pi). Constant in
/// t, so it is also the global barrier.
double lambda_linear_gaussian(double z);

/// Fisher-Rao length of the Gaussian geodesic,
/// sqrt(2) log(1 + z^2/4 + (z/4) sqrt(8 + z^2)).
double fisher_length_gaussian(double z);

/// 1 / (2 + 2 Lambda).
double asymptotic_round_trip_rate(double barrier);

/// 1 / (2 + 2 z / sqrt(pi)).
double linear_gaussian_rate(double z);

/// 1 / (2 + sqrt(2) Lambda_F(z)).
double geodesic_bound_rate(double z);

/// Symmetric KL divergence between N(m_p, v_p I_d) and N(m_q, v_q I_d).
double gaussian_skl(double m_p, double v_p, double m_q, double v_q,
                    int dimension = 1);

struct BarrierReport {
  double rejection_sum = 0.0;
  /// sum r / (1 - r); infinite when some r reaches 1.
  double eq8_objective = 0.0;
  double predicted_rate = 0.0;
  double measured_rate = 0.0;
};

BarrierReport barrier_report(std::span<const double> rejections,
                             double measured_rate);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Draw from pi_eta: one kernel application from the initial state for
/// iid kernels, `burn_in` applications otherwise.
State draw_tempered(const LogDensityPair& model, AnnealingCoordinates eta,
                    RandomStream& rng, std::size_t burn_in = 1000);

/// lambda(t) = E|eta'(t) . (W(X) - W(X'))| / 2 with X, X' iid from pi_t.
/// At a spline knot the right segment's derivative is used.
MonteCarloEstimate empirical_instantaneous_rate(const PathDescriptor& path,
                                                double t,
                                                const LogDensityPair& model,
                                                std::size_t samples,
                                                std::uint64_t seed = 1);

/// r(t, t') = E[1 - min(1, exp(A))] from independent exact draws
/// X ~ pi_t, X' ~ pi_t'.
MonteCarloEstimate secant_rejection(const PathDescriptor& path, double t,
                                    double t_prime,
                                    const LogDensityPair& model,
                                    std::size_t samples,
                                    std::uint64_t seed = 1);

/// Barrier of the linear secant between pi_t and pi_t', with the s-integral
/// done by trapezoid quadrature over `nodes` equally spaced nodes and iid
/// draws at each node.
MonteCarloEstimate secant_barrier(const PathDescriptor& path, double t,
                                  double t_prime, const LogDensityPair& model,
                                  std::size_t samples, int nodes = 64,
                                  std::uint64_t seed = 1);

struct SecantComparison {
  MonteCarloEstimate rejection;
  MonteCarloEstimate barrier;
  /// r(t,t') - Lambda(t,t') with its standard error from the paired
  /// differences.
  MonteCarloEstimate difference;
};

/// Joint estimate of r(t,t') and the secant barrier. Both terms reuse the
/// same pair of streams per sample (common random numbers), and each pair is
/// also evaluated with the two streams exchanged (antithetic), which cancels
/// most of the first-order noise in the difference.
SecantComparison compare_secant(const PathDescriptor& path, double t,
                                double t_prime, const LogDensityPair& model,
                                std::size_t pairs, int nodes = 64,
                                std::uint64_t seed = 1);

struct SnrRow {
  double phi = 0.0;
  std::string objective;
  double mean = 0.0;
  double sd = 0.0;
  double snr = 0.0;
};

/// Default grid {0, 0.2, ..., 2}.
std::vector<double> default_snr_grid();

/// Two chains N(0,1) and N(phi,1). For each phi and each objective
/// ("rejection", "skl") draws `replicates` gradient estimates d/dphi, each
/// from `samples` iid draws per chain, and reports |mean| / sd. Rows are
/// ordered by phi, rejection first.
std::vector<SnrRow> snr_experiment(std::span<const double> phi_grid,
                                   std::size_t samples, std::size_t replicates,
                                   std::uint64_t seed = 1);

}  // namespace ptpath

#endif  // PTPATH_DIAGNOSTICS_HPP
