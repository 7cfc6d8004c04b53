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

#ifndef PTPATH_MODELS_HPP
#define PTPATH_MODELS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ptpath/paths.hpp"
#include "ptpath/rng.hpp"

namespace ptpath {

/// Model states are flat real vectors; each model documents its layout.
using State = std::vector<double>;

enum class KernelKind { iid_closed_form, random_walk_metropolis, gibbs_composite };

struct StateSpace {
  std::size_t dimension = 0;
  std::string support;
};

/// A reference/target pair W(x) = (W0(x), W1(x)) together with the local
/// exploration kernel that targets pi_eta ∝ exp(eta . W) for any normalizable
/// eta. Implementations are immutable after construction and safe to share
/// between threads.
class LogDensityPair {
 public:
  virtual ~LogDensityPair() = default;

  virtual std::string name() const = 0;
  virtual StateSpace state_space() const = 0;
  virtual LogWeights log_weights(const State& x) const = 0;
  /// Membership of eta in the normalizable set of this model.
  virtual bool normalizable(AnnealingCoordinates eta) const = 0;
  virtual KernelKind kernel_kind() const = 0;
  virtual State initial_state() const = 0;

  /// One kernel application; `eta` must be normalizable.
  virtual void explore_unchecked(AnnealingCoordinates eta, State& x,
                                 RandomStream& rng) const = 0;
};

/// Applies the model's exploration kernel at `eta`, throwing
/// NonNormalizableError when eta is outside the normalizable set.
void explore(const LogDensityPair& model, AnnealingCoordinates eta,
             State& state, RandomStream& rng);

/// Random-walk Metropolis step on exp(eta . W) with isotropic Gaussian
/// proposals. States where W is not finite are treated as outside the support.
void random_walk_metropolis_step(const LogDensityPair& model,
                                 AnnealingCoordinates eta, State& x,
                                 double step_size, RandomStream& rng);

/// W_i(x) = -|x - mu_i 1|^2 / (2 sigma^2) in d dimensions. The tempered law is
/// N(mean(eta) 1, var(eta) I) with mean = (eta0 mu0 + eta1 mu1)/(eta0+eta1)
/// and var = sigma^2/(eta0+eta1).
class GaussianPair final : public LogDensityPair {
 public:
  GaussianPair(double mu0, double mu1, double sigma, int dimension,
               KernelKind kernel = KernelKind::iid_closed_form,
               double rwm_step = 0.0);

  std::string name() const override { return "gaussian"; }
  StateSpace state_space() const override;
  LogWeights log_weights(const State& x) const override;
  bool normalizable(AnnealingCoordinates eta) const override;
  KernelKind kernel_kind() const override { return kernel_; }
  State initial_state() const override;
  void explore_unchecked(AnnealingCoordinates eta, State& x,
                         RandomStream& rng) const override;

  double tempered_mean(AnnealingCoordinates eta) const;
  double tempered_variance(AnnealingCoordinates eta) const;

  double mu0() const { return mu0_; }
  double mu1() const { return mu1_; }
  double sigma() const { return sigma_; }
  int dimension() const { return dimension_; }

 private:
  double mu0_;
  double mu1_;
  double sigma_;
  int dimension_;
  KernelKind kernel_;
  double rwm_step_;
};

GaussianPair gaussian_pair(double mu0, double mu1, double sigma, int dimension);

/// Beta(a0,b0) prior (reference) and its conjugate posterior after S successes
/// in R Bernoulli trials (target). State layout: [p].
class BetaBinomialPair final : public LogDensityPair {
 public:
  struct BetaParameters {
    double alpha = 1.0;
    double beta = 1.0;
  };

  BetaBinomialPair(double a0, double b0, std::int64_t successes,
                   std::int64_t trials,
                   KernelKind kernel = KernelKind::iid_closed_form,
                   double rwm_step = 0.0);

  std::string name() const override { return "beta_binomial"; }
  StateSpace state_space() const override;
  LogWeights log_weights(const State& x) const override;
  bool normalizable(AnnealingCoordinates eta) const override;
  KernelKind kernel_kind() const override { return kernel_; }
  State initial_state() const override { return {0.5}; }
  void explore_unchecked(AnnealingCoordinates eta, State& x,
                         RandomStream& rng) const override;

  /// Beta(alpha(eta), beta(eta)), affine in eta.
  BetaParameters tempered(AnnealingCoordinates eta) const;

 private:
  double a0_;
  double b0_;
  std::int64_t successes_;
  std::int64_t trials_;
  KernelKind kernel_;
  double rwm_step_;
};

BetaBinomialPair beta_binomial_pair(double a0, double b0,
                                    std::int64_t successes,
                                    std::int64_t trials);

/// Bayesian Gaussian mixture with unmarginalized labels. Reference is the
/// prior (Dirichlet(1) proportions, N(prior_mean, prior_sd^2) means, uniform
/// labels); target adds the complete-data likelihood
/// sum_j log w_{z_j} + log N(x_j; mu_{z_j}, component_sd^2).
/// State layout: [w_0..w_{C-1}, mu_0..mu_{C-1}, z_0..z_{n-1}].
class GmmPair final : public LogDensityPair {
 public:
  struct MeanConditional {
    double mean = 0.0;
    double precision = 0.0;
  };

  GmmPair(std::vector<double> data, int components, double prior_mean,
          double component_sd, double prior_sd = 1.0,
          bool proportion_mh_move = true);

  std::string name() const override { return "gmm"; }
  StateSpace state_space() const override;
  LogWeights log_weights(const State& x) const override;
  bool normalizable(AnnealingCoordinates eta) const override;
  KernelKind kernel_kind() const override { return KernelKind::gibbs_composite; }
  /// Proportions 1/C, means 0, labels 0.
  State initial_state() const override;
  void explore_unchecked(AnnealingCoordinates eta, State& x,
                         RandomStream& rng) const override;

  int components() const { return components_; }
  std::span<const double> data() const { return data_; }

  /// Full conditional of mean c given the labels (tempered by eta).
  MeanConditional mean_conditional(AnnealingCoordinates eta, const State& x,
                                   int c) const;
  /// Full conditional probabilities of label j given proportions and means.
  std::vector<double> label_probabilities(AnnealingCoordinates eta,
                                          const State& x, std::size_t j) const;

  void gibbs_labels(AnnealingCoordinates eta, State& x, RandomStream& rng) const;
  void gibbs_means(AnnealingCoordinates eta, State& x, RandomStream& rng) const;
  void gibbs_proportions(AnnealingCoordinates eta, State& x,
                         RandomStream& rng) const;
  /// Joint (proportions, labels) Metropolis-Hastings move: proportions are
  /// proposed from a Dirichlet built from label responsibilities (labels
  /// marginalized at the current means), labels are then redrawn from their
  /// conditional. Returns whether the move was accepted.
  bool proportion_mh(AnnealingCoordinates eta, State& x,
                     RandomStream& rng) const;

 private:
  double log_component_density(double x, double mu) const;
  std::size_t label_offset() const { return 2 * components_; }

  std::vector<double> data_;
  int components_;
  double prior_mean_;
  double component_sd_;
  double prior_sd_;
  bool proportion_mh_move_;
};

GmmPair gmm_pair(std::vector<double> data, int components, double prior_mean,
                 double component_sd);

/// Reads one real per row. Blank lines, '#' comments and a non-numeric
/// header row are skipped.
std::vector<double> load_observations_csv(const std::filesystem::path& path);

/// n draws from 0.3 N(100, 10^2) + 0.7 N(200, 10^2).
std::vector<double> simulate_two_component_mixture(std::size_t n,
                                                   std::uint64_t seed);

}  // namespace ptpath

#endif  // PTPATH_MODELS_HPP
