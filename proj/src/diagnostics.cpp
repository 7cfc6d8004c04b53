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

#include "ptpath/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ptpath/engine.hpp"
#include "ptpath/errors.hpp"
#include "ptpath/rng.hpp"

namespace ptpath {

namespace {

void require_positive_z(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("z must be positive and finite");
  }
}

/// Running mean and variance (Welford).
class Accumulator {
 public:
  void add(double v) {
    ++n_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (v - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  MonteCarloEstimate estimate() const {
    return {mean_, std::sqrt(variance() / static_cast<double>(n_)), n_};
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

void require_samples(std::size_t samples) {
  if (samples < 2) throw ConstraintError("need at least 2 Monte Carlo samples");
}

std::uint32_t as_index(std::size_t i) { return static_cast<std::uint32_t>(i); }

}  // namespace

double lambda_linear_gaussian(double z) {
  require_positive_z(z);
  return z / std::sqrt(std::numbers::pi);
}

double fisher_length_gaussian(double z) {
  require_positive_z(z);
  return std::numbers::sqrt2 *
         std::log(1.0 + z * z / 4.0 + (z / 4.0) * std::sqrt(8.0 + z * z));
}

double asymptotic_round_trip_rate(double barrier) {
  if (!(barrier >= 0.0)) throw DomainError("barrier must be non-negative");
  return 1.0 / (2.0 + 2.0 * barrier);
}

double linear_gaussian_rate(double z) {
  return asymptotic_round_trip_rate(lambda_linear_gaussian(z));
}

double geodesic_bound_rate(double z) {
  return 1.0 / (2.0 + std::numbers::sqrt2 * fisher_length_gaussian(z));
}

double gaussian_skl(double m_p, double v_p, double m_q, double v_q,
                    int dimension) {
  if (!(v_p > 0.0) || !(v_q > 0.0)) {
    throw DomainError("variances must be positive");
  }
  const double dm2 = (m_p - m_q) * (m_p - m_q);
  const double per_dim =
      0.5 * (v_p / v_q + v_q / v_p - 2.0 + dm2 * (1.0 / v_p + 1.0 / v_q));
  return per_dim * dimension;
}

BarrierReport barrier_report(std::span<const double> rejections,
                             double measured_rate) {
  BarrierReport report;
  for (double r : rejections) {
    report.rejection_sum += r;
    report.eq8_objective += r >= 1.0 ? std::numeric_limits<double>::infinity()
                                     : r / (1.0 - r);
  }
  report.predicted_rate = predicted_round_trip_rate(rejections);
  report.measured_rate = measured_rate;
  return report;
}

State draw_tempered(const LogDensityPair& model, AnnealingCoordinates eta,
                    RandomStream& rng, std::size_t burn_in) {
  State x = model.initial_state();
  const std::size_t steps =
      model.kernel_kind() == KernelKind::iid_closed_form ? 1 : burn_in;
  for (std::size_t s = 0; s < steps; ++s) explore(model, eta, x, rng);
  return x;
}

MonteCarloEstimate empirical_instantaneous_rate(const PathDescriptor& path,
                                                double t,
                                                const LogDensityPair& model,
                                                std::size_t samples,
                                                std::uint64_t seed) {
  require_samples(samples);
  const AnnealingCoordinates eta = path.eta(t);
  const AnnealingCoordinates deta = path.eta_derivative(t);
  Accumulator acc;
  for (std::size_t i = 0; i < samples; ++i) {
    PhiloxStream a(seed, StreamPurpose::oracle, 0, i);
    PhiloxStream b(seed, StreamPurpose::oracle, 1, i);
    const LogWeights w = model.log_weights(draw_tempered(model, eta, a));
    const LogWeights w2 = model.log_weights(draw_tempered(model, eta, b));
    acc.add(0.5 * std::abs(dot(deta, {w.w0 - w2.w0, w.w1 - w2.w1})));
  }
  return acc.estimate();
}

MonteCarloEstimate secant_rejection(const PathDescriptor& path, double t,
                                    double t_prime,
                                    const LogDensityPair& model,
                                    std::size_t samples, std::uint64_t seed) {
  require_samples(samples);
  const AnnealingCoordinates eta = path.eta(t);
  const AnnealingCoordinates eta_prime = path.eta(t_prime);
  Accumulator acc;
  for (std::size_t i = 0; i < samples; ++i) {
    PhiloxStream a(seed, StreamPurpose::oracle, 0, i);
    PhiloxStream b(seed, StreamPurpose::oracle, 1, i);
    const LogWeights w = model.log_weights(draw_tempered(model, eta, a));
    const LogWeights w2 = model.log_weights(draw_tempered(model, eta_prime, b));
    acc.add(1.0 - std::exp(swap_log_accept(eta, eta_prime, w, w2)));
  }
  return acc.estimate();
}

namespace {

std::vector<double> trapezoid_weights(int nodes) {
  if (nodes < 2) throw ConstraintError("quadrature needs at least 2 nodes");
  std::vector<double> w(static_cast<std::size_t>(nodes),
                        1.0 / static_cast<double>(nodes - 1));
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

}  // namespace

MonteCarloEstimate secant_barrier(const PathDescriptor& path, double t,
                                  double t_prime, const LogDensityPair& model,
                                  std::size_t samples, int nodes,
                                  std::uint64_t seed) {
  require_samples(samples);
  const AnnealingCoordinates eta = path.eta(t);
  const AnnealingCoordinates delta = path.eta(t_prime) - eta;
  const std::vector<double> weights = trapezoid_weights(nodes);
  Accumulator acc;
  for (std::size_t i = 0; i < samples; ++i) {
    double integral = 0.0;
    for (int j = 0; j < nodes; ++j) {
      const double s = static_cast<double>(j) / (nodes - 1);
      const AnnealingCoordinates eta_s = eta + s * delta;
      PhiloxStream a(seed, StreamPurpose::oracle_alt, as_index(2 * j), i);
      PhiloxStream b(seed, StreamPurpose::oracle_alt, as_index(2 * j + 1), i);
      const LogWeights w = model.log_weights(draw_tempered(model, eta_s, a));
      const LogWeights w2 = model.log_weights(draw_tempered(model, eta_s, b));
      integral +=
          weights[j] * 0.5 * std::abs(dot(delta, {w.w0 - w2.w0, w.w1 - w2.w1}));
    }
    acc.add(integral);
  }
  return acc.estimate();
}

SecantComparison compare_secant(const PathDescriptor& path, double t,
                                double t_prime, const LogDensityPair& model,
                                std::size_t pairs, int nodes,
                                std::uint64_t seed) {
  require_samples(pairs);
  const AnnealingCoordinates eta = path.eta(t);
  const AnnealingCoordinates eta_prime = path.eta(t_prime);
  const AnnealingCoordinates delta = eta_prime - eta;
  const std::vector<double> weights = trapezoid_weights(nodes);
  std::vector<AnnealingCoordinates> node_eta(weights.size());
  for (int j = 0; j < nodes; ++j) {
    node_eta[j] = eta + (static_cast<double>(j) / (nodes - 1)) * delta;
    if (!model.normalizable(node_eta[j])) {
      throw NonNormalizableError("secant leaves the normalizable set");
    }
  }
  const bool iid = model.kernel_kind() == KernelKind::iid_closed_form;
  State buffer = model.initial_state();

  auto weights_at = [&](AnnealingCoordinates e, std::uint32_t index,
                        std::size_t i) {
    PhiloxStream rng(seed, StreamPurpose::oracle, index, i);
    if (iid) {
      model.explore_unchecked(e, buffer, rng);
      return model.log_weights(buffer);
    }
    return model.log_weights(draw_tempered(model, e, rng));
  };
  auto rejection = [&](LogWeights lo, LogWeights hi) {
    return 1.0 - std::exp(swap_log_accept(eta, eta_prime, lo, hi));
  };

  Accumulator rej;
  Accumulator bar;
  Accumulator diff;
  for (std::size_t i = 0; i < pairs; ++i) {
    const double r_fwd = rejection(weights_at(eta, 0, i),
                                   weights_at(eta_prime, 1, i));
    const double r_rev = rejection(weights_at(eta, 1, i),
                                   weights_at(eta_prime, 0, i));
    const double r = 0.5 * (r_fwd + r_rev);

    // |A| is symmetric in its arguments, so the exchanged pair gives the
    // same integrand and is not recomputed.
    double integral = 0.0;
    for (int j = 0; j < nodes; ++j) {
      const LogWeights w = weights_at(node_eta[j], 0, i);
      const LogWeights w2 = weights_at(node_eta[j], 1, i);
      integral +=
          weights[j] * 0.5 * std::abs(dot(delta, {w.w0 - w2.w0, w.w1 - w2.w1}));
    }
    rej.add(r);
    bar.add(integral);
    diff.add(r - integral);
  }
  return {rej.estimate(), bar.estimate(), diff.estimate()};
}

std::vector<double> default_snr_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 5.0);
  return grid;
}

namespace {

double sample_covariance(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double c = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) c += (a[i] - ma) * (b[i] - mb);
  return c / (n - 1.0);
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

SnrRow summarize(double phi, const char* objective, const Accumulator& acc) {
  SnrRow row;
  row.phi = phi;
  row.objective = objective;
  row.mean = acc.mean();
  row.sd = std::sqrt(acc.variance());
  if (row.sd > 0.0) {
    row.snr = std::abs(row.mean) / row.sd;
  } else {
    row.snr = row.mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return row;
}

}  // namespace

std::vector<SnrRow> snr_experiment(std::span<const double> phi_grid,
                                   std::size_t samples, std::size_t replicates,
                                   std::uint64_t seed) {
  if (replicates < 2) {
    throw ConstraintError("SNR needs at least 2 replicates");
  }
  if (samples < 2) throw ConstraintError("SNR needs at least 2 samples");

  std::vector<SnrRow> rows;
  rows.reserve(2 * phi_grid.size());
  std::vector<double> xa(samples);
  std::vector<double> xb(samples);
  std::vector<double> score(samples);
  std::vector<double> rej(samples);
  std::vector<double> pathwise(samples);
  std::vector<double> log_ratio(samples);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (std::size_t g = 0; g < phi_grid.size(); ++g) {
    const double phi = phi_grid[g];
    Accumulator rejection_grad;
    Accumulator skl_grad;
    for (std::size_t rep = 0; rep < replicates; ++rep) {
      PhiloxStream ra(seed, StreamPurpose::oracle, as_index(2 * g), rep);
      PhiloxStream rb(seed, StreamPurpose::oracle, as_index(2 * g + 1), rep);
      for (std::size_t i = 0; i < samples; ++i) {
        normal.reset();
        xa[i] = normal(ra);
        normal.reset();
        xb[i] = phi + normal(rb);
      }

      // Rejection r = E[1 - min(1, e^A)], A = phi (x_a - x_b); x_b carries
      // the score (x_b - phi) and A depends on phi directly.
      for (std::size_t i = 0; i < samples; ++i) {
        const double a = phi * (xa[i] - xb[i]);
        score[i] = xb[i] - phi;
        rej[i] = 1.0 - std::exp(std::min(0.0, a));
        pathwise[i] = a < 0.0 ? -std::exp(a) * (xa[i] - xb[i]) : 0.0;
      }
      rejection_grad.add(sample_covariance(score, rej) + mean_of(pathwise));

      // SKL = E_a[-(phi x - phi^2/2)] + E_b[phi x - phi^2/2].
      double term_a = 0.0;
      double term_b = 0.0;
      for (std::size_t i = 0; i < samples; ++i) {
        term_a += -(xa[i] - phi);
        term_b += xb[i] - phi;
        log_ratio[i] = phi * xb[i] - 0.5 * phi * phi;
      }
      skl_grad.add(term_a / samples + sample_covariance(score, log_ratio) +
                   term_b / samples);
    }
    rows.push_back(summarize(phi, "rejection", rejection_grad));
    rows.push_back(summarize(phi, "skl", skl_grad));
  }
  return rows;
}

}  // namespace ptpath
