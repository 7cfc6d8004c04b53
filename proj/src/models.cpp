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

#include "ptpath/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "ptpath/errors.hpp"

namespace ptpath {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

double standard_normal(RandomStream& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

double gamma_draw(double shape, RandomStream& rng) {
  std::gamma_distribution<double> gamma(shape, 1.0);
  return gamma(rng);
}

std::vector<double> dirichlet_draw(std::span<const double> alpha,
                                   RandomStream& rng) {
  std::vector<double> w(alpha.size());
  double total = 0.0;
  for (std::size_t c = 0; c < alpha.size(); ++c) {
    w[c] = gamma_draw(alpha[c], rng);
    total += w[c];
  }
  for (double& v : w) v /= total;
  return w;
}

double log_dirichlet_density(std::span<const double> w,
                             std::span<const double> alpha) {
  double alpha_sum = 0.0;
  double out = 0.0;
  for (std::size_t c = 0; c < alpha.size(); ++c) {
    alpha_sum += alpha[c];
    out += (alpha[c] - 1.0) * std::log(w[c]) - std::lgamma(alpha[c]);
  }
  return out + std::lgamma(alpha_sum);
}

// Samples an index from unnormalized log-probabilities.
std::size_t categorical_from_logits(std::span<double> logits,
                                    RandomStream& rng) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& v : logits) {
    v = std::exp(v - top);
    total += v;
  }
  double u = rng.uniform() * total;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    u -= logits[c];
    if (u <= 0.0) return c;
  }
  return logits.size() - 1;
}

double log_sum_exp(std::span<const double> v) {
  const double top = *std::max_element(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) total += std::exp(x - top);
  return top + std::log(total);
}

}  // namespace

void explore(const LogDensityPair& model, AnnealingCoordinates eta,
             State& state, RandomStream& rng) {
  if (!eta.finite() || !model.normalizable(eta)) {
    throw NonNormalizableError("coordinates (" + std::to_string(eta.eta0) +
                               ", " + std::to_string(eta.eta1) +
                               ") are not normalizable for model " +
                               model.name());
  }
  model.explore_unchecked(eta, state, rng);
}

void random_walk_metropolis_step(const LogDensityPair& model,
                                 AnnealingCoordinates eta, State& x,
                                 double step_size, RandomStream& rng) {
  State proposal = x;
  for (double& v : proposal) v += step_size * standard_normal(rng);
  const LogWeights w_new = model.log_weights(proposal);
  const double u = rng.uniform();
  if (!std::isfinite(w_new.w0) || !std::isfinite(w_new.w1)) return;
  const double log_ratio = dot(eta, w_new) - dot(eta, model.log_weights(x));
  if (std::log(u) <= log_ratio) x = std::move(proposal);
}

// --- Gaussian -------------------------------------------------------------

GaussianPair::GaussianPair(double mu0, double mu1, double sigma, int dimension,
                           KernelKind kernel, double rwm_step)
    : mu0_(mu0),
      mu1_(mu1),
      sigma_(sigma),
      dimension_(dimension),
      kernel_(kernel),
      rwm_step_(rwm_step) {
  if (!(sigma > 0.0)) throw ConstraintError("gaussian sigma must be > 0");
  if (dimension < 1) throw ConstraintError("gaussian dimension must be >= 1");
  if (kernel == KernelKind::gibbs_composite) {
    throw ConstraintError("gaussian model has no gibbs kernel");
  }
  if (kernel == KernelKind::random_walk_metropolis && !(rwm_step > 0.0)) {
    throw ConstraintError("random-walk step size must be > 0");
  }
}

StateSpace GaussianPair::state_space() const {
  return {static_cast<std::size_t>(dimension_), "real"};
}

LogWeights GaussianPair::log_weights(const State& x) const {
  double s0 = 0.0;
  double s1 = 0.0;
  for (double v : x) {
    s0 += (v - mu0_) * (v - mu0_);
    s1 += (v - mu1_) * (v - mu1_);
  }
  const double scale = -0.5 / (sigma_ * sigma_);
  return {scale * s0, scale * s1};
}

bool GaussianPair::normalizable(AnnealingCoordinates eta) const {
  return eta.sum() > 0.0;
}

State GaussianPair::initial_state() const {
  return State(static_cast<std::size_t>(dimension_), 0.0);
}

double GaussianPair::tempered_mean(AnnealingCoordinates eta) const {
  if (!normalizable(eta)) {
    throw NonNormalizableError("gaussian tempering needs eta0 + eta1 > 0");
  }
  return (eta.eta0 * mu0_ + eta.eta1 * mu1_) / eta.sum();
}

double GaussianPair::tempered_variance(AnnealingCoordinates eta) const {
  if (!normalizable(eta)) {
    throw NonNormalizableError("gaussian tempering needs eta0 + eta1 > 0");
  }
  return sigma_ * sigma_ / eta.sum();
}

void GaussianPair::explore_unchecked(AnnealingCoordinates eta, State& x,
                                     RandomStream& rng) const {
  if (kernel_ == KernelKind::random_walk_metropolis) {
    random_walk_metropolis_step(*this, eta, x, rwm_step_, rng);
    return;
  }
  const double mean = tempered_mean(eta);
  const double sd = std::sqrt(tempered_variance(eta));
  x.resize(static_cast<std::size_t>(dimension_));
  for (double& v : x) v = mean + sd * standard_normal(rng);
}

GaussianPair gaussian_pair(double mu0, double mu1, double sigma,
                           int dimension) {
  return GaussianPair(mu0, mu1, sigma, dimension);
}

// --- Beta-binomial --------------------------------------------------------

BetaBinomialPair::BetaBinomialPair(double a0, double b0,
                                   std::int64_t successes, std::int64_t trials,
                                   KernelKind kernel, double rwm_step)
    : a0_(a0),
      b0_(b0),
      successes_(successes),
      trials_(trials),
      kernel_(kernel),
      rwm_step_(rwm_step) {
  if (!(a0 > 0.0) || !(b0 > 0.0)) {
    throw ConstraintError("beta prior parameters must be > 0");
  }
  if (successes < 0 || successes > trials) {
    throw ConstraintError("beta-binomial needs 0 <= S <= R");
  }
  if (kernel == KernelKind::gibbs_composite) {
    throw ConstraintError("beta-binomial model has no gibbs kernel");
  }
  if (kernel == KernelKind::random_walk_metropolis && !(rwm_step > 0.0)) {
    throw ConstraintError("random-walk step size must be > 0");
  }
}

StateSpace BetaBinomialPair::state_space() const { return {1, "(0,1)"}; }

LogWeights BetaBinomialPair::log_weights(const State& x) const {
  const double p = x.at(0);
  if (!(p > 0.0 && p < 1.0)) {
    const double inf = -std::numeric_limits<double>::infinity();
    return {inf, inf};
  }
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double s = static_cast<double>(successes_);
  const double f = static_cast<double>(trials_ - successes_);
  return {(a0_ - 1.0) * lp + (b0_ - 1.0) * lq,
          (a0_ + s - 1.0) * lp + (b0_ + f - 1.0) * lq};
}

BetaBinomialPair::BetaParameters BetaBinomialPair::tempered(
    AnnealingCoordinates eta) const {
  const double s = static_cast<double>(successes_);
  const double f = static_cast<double>(trials_ - successes_);
  return {(a0_ - 1.0) * eta.eta0 + (a0_ + s - 1.0) * eta.eta1 + 1.0,
          (b0_ - 1.0) * eta.eta0 + (b0_ + f - 1.0) * eta.eta1 + 1.0};
}

bool BetaBinomialPair::normalizable(AnnealingCoordinates eta) const {
  const BetaParameters b = tempered(eta);
  return b.alpha > 0.0 && b.beta > 0.0;
}

void BetaBinomialPair::explore_unchecked(AnnealingCoordinates eta, State& x,
                                         RandomStream& rng) const {
  if (kernel_ == KernelKind::random_walk_metropolis) {
    random_walk_metropolis_step(*this, eta, x, rwm_step_, rng);
    return;
  }
  const BetaParameters b = tempered(eta);
  double p = 0.0;
  do {
    const double g0 = gamma_draw(b.alpha, rng);
    const double g1 = gamma_draw(b.beta, rng);
    p = g0 / (g0 + g1);
  } while (!(p > 0.0 && p < 1.0));
  x.assign(1, p);
}

BetaBinomialPair beta_binomial_pair(double a0, double b0,
                                    std::int64_t successes,
                                    std::int64_t trials) {
  return BetaBinomialPair(a0, b0, successes, trials);
}

// --- Gaussian mixture -----------------------------------------------------

GmmPair::GmmPair(std::vector<double> data, int components, double prior_mean,
                 double component_sd, double prior_sd, bool proportion_mh_move)
    : data_(std::move(data)),
      components_(components),
      prior_mean_(prior_mean),
      component_sd_(component_sd),
      prior_sd_(prior_sd),
      proportion_mh_move_(proportion_mh_move) {
  if (components_ < 2) throw ConstraintError("mixture needs C >= 2");
  if (data_.empty()) throw ConstraintError("mixture needs data");
  if (!(component_sd > 0.0) || !(prior_sd > 0.0)) {
    throw ConstraintError("mixture standard deviations must be > 0");
  }
}

StateSpace GmmPair::state_space() const {
  return {label_offset() + data_.size(),
          "simplex^C x R^C x {0..C-1}^n"};
}

double GmmPair::log_component_density(double x, double mu) const {
  const double r = (x - mu) / component_sd_;
  return -0.5 * r * r - std::log(component_sd_) - 0.5 * kLogTwoPi;
}

LogWeights GmmPair::log_weights(const State& x) const {
  const std::size_t C = static_cast<std::size_t>(components_);
  double prior = std::lgamma(static_cast<double>(C));  // Dirichlet(1) density
  for (std::size_t c = 0; c < C; ++c) {
    const double r = (x[C + c] - prior_mean_) / prior_sd_;
    prior += -0.5 * r * r - std::log(prior_sd_) - 0.5 * kLogTwoPi;
  }
  double lik = 0.0;
  for (std::size_t j = 0; j < data_.size(); ++j) {
    const auto c = static_cast<std::size_t>(x[label_offset() + j]);
    lik += std::log(x[c]) + log_component_density(data_[j], x[C + c]);
  }
  return {prior, prior + lik};
}

bool GmmPair::normalizable(AnnealingCoordinates eta) const {
  return eta.eta1 >= 0.0 && eta.sum() > 0.0;
}

State GmmPair::initial_state() const {
  State x(label_offset() + data_.size(), 0.0);
  std::fill_n(x.begin(), components_, 1.0 / components_);
  return x;
}

GmmPair::MeanConditional GmmPair::mean_conditional(AnnealingCoordinates eta,
                                                   const State& x,
                                                   int c) const {
  double count = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < data_.size(); ++j) {
    if (static_cast<int>(x[label_offset() + j]) == c) {
      count += 1.0;
      total += data_[j];
    }
  }
  const double prior_precision = eta.sum() / (prior_sd_ * prior_sd_);
  const double lik_precision = eta.eta1 / (component_sd_ * component_sd_);
  const double precision = prior_precision + lik_precision * count;
  const double mean =
      (prior_precision * prior_mean_ + lik_precision * total) / precision;
  return {mean, precision};
}

std::vector<double> GmmPair::label_probabilities(AnnealingCoordinates eta,
                                                 const State& x,
                                                 std::size_t j) const {
  const std::size_t C = static_cast<std::size_t>(components_);
  std::vector<double> logits(C);
  for (std::size_t c = 0; c < C; ++c) {
    logits[c] =
        eta.eta1 * (std::log(x[c]) + log_component_density(data_[j], x[C + c]));
  }
  const double norm = log_sum_exp(logits);
  for (double& v : logits) v = std::exp(v - norm);
  return logits;
}

void GmmPair::gibbs_labels(AnnealingCoordinates eta, State& x,
                           RandomStream& rng) const {
  const std::size_t C = static_cast<std::size_t>(components_);
  std::vector<double> logits(C);
  std::vector<double> log_w(C);
  for (std::size_t c = 0; c < C; ++c) log_w[c] = std::log(x[c]);
  for (std::size_t j = 0; j < data_.size(); ++j) {
    for (std::size_t c = 0; c < C; ++c) {
      logits[c] =
          eta.eta1 * (log_w[c] + log_component_density(data_[j], x[C + c]));
    }
    x[label_offset() + j] =
        static_cast<double>(categorical_from_logits(logits, rng));
  }
}

void GmmPair::gibbs_means(AnnealingCoordinates eta, State& x,
                          RandomStream& rng) const {
  const std::size_t C = static_cast<std::size_t>(components_);
  for (std::size_t c = 0; c < C; ++c) {
    const MeanConditional mc = mean_conditional(eta, x, static_cast<int>(c));
    x[C + c] = mc.mean + standard_normal(rng) / std::sqrt(mc.precision);
  }
}

void GmmPair::gibbs_proportions(AnnealingCoordinates eta, State& x,
                                RandomStream& rng) const {
  const std::size_t C = static_cast<std::size_t>(components_);
  std::vector<double> alpha(C, 1.0);
  for (std::size_t j = 0; j < data_.size(); ++j) {
    alpha[static_cast<std::size_t>(x[label_offset() + j])] += eta.eta1;
  }
  const std::vector<double> w = dirichlet_draw(alpha, rng);
  std::copy(w.begin(), w.end(), x.begin());
}

bool GmmPair::proportion_mh(AnnealingCoordinates eta, State& x,
                            RandomStream& rng) const {
  const std::size_t C = static_cast<std::size_t>(components_);
  const std::size_t n = data_.size();

  std::vector<double> log_dens(n * C);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t c = 0; c < C; ++c) {
      log_dens[j * C + c] = log_component_density(data_[j], x[C + c]);
    }
  }

  // Tempered log-marginal of the proportions (labels summed out) and the
  // expected label counts that parameterize the Dirichlet proposal.
  std::vector<double> logits(C);
  auto marginal = [&](std::span<const double> w, std::vector<double>& counts) {
    counts.assign(C, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t c = 0; c < C; ++c) {
        logits[c] = eta.eta1 * (std::log(w[c]) + log_dens[j * C + c]);
      }
      const double lse = log_sum_exp(logits);
      total += lse;
      for (std::size_t c = 0; c < C; ++c) counts[c] += std::exp(logits[c] - lse);
    }
    return total;
  };
  auto proposal_alpha = [&](const std::vector<double>& counts) {
    std::vector<double> alpha(C);
    for (std::size_t c = 0; c < C; ++c) alpha[c] = 1.0 + eta.eta1 * counts[c];
    return alpha;
  };

  const std::vector<double> w_cur(x.begin(), x.begin() + C);
  std::vector<double> counts_cur;
  const double f_cur = marginal(w_cur, counts_cur);
  const std::vector<double> alpha_fwd = proposal_alpha(counts_cur);
  const std::vector<double> w_new = dirichlet_draw(alpha_fwd, rng);

  std::vector<double> counts_new;
  const double f_new = marginal(w_new, counts_new);
  const std::vector<double> alpha_rev = proposal_alpha(counts_new);

  const double log_accept = f_new - f_cur +
                            log_dirichlet_density(w_cur, alpha_rev) -
                            log_dirichlet_density(w_new, alpha_fwd);
  const double u = rng.uniform();
  if (!std::isfinite(log_accept) || std::log(u) > log_accept) return false;

  std::copy(w_new.begin(), w_new.end(), x.begin());
  gibbs_labels(eta, x, rng);
  return true;
}

void GmmPair::explore_unchecked(AnnealingCoordinates eta, State& x,
                                RandomStream& rng) const {
  gibbs_labels(eta, x, rng);
  gibbs_means(eta, x, rng);
  gibbs_proportions(eta, x, rng);
  if (proportion_mh_move_ && eta.eta1 > 0.0) proportion_mh(eta, x, rng);
}

GmmPair gmm_pair(std::vector<double> data, int components, double prior_mean,
                 double component_sd) {
  return GmmPair(std::move(data), components, prior_mean, component_sd);
}

// --- data -----------------------------------------------------------------

std::vector<double> load_observations_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file " + path.string());
  std::vector<double> out;
  std::string line;
  bool first_row = true;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::string cell = line.substr(start, line.find(',', start) - start);
    std::istringstream parse(cell);
    double v = 0.0;
    if (!(parse >> v)) {
      if (first_row) {
        first_row = false;
        continue;
      }
      throw ConfigError("non-numeric observation '" + cell + "' in " +
                               path.string());
    }
    first_row = false;
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("no observations in " + path.string());
  return out;
}

std::vector<double> simulate_two_component_mixture(std::size_t n,
                                                   std::uint64_t seed) {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    PhiloxStream rng(seed, StreamPurpose::data, 0, j);
    const double mean = rng.uniform() < 0.3 ? 100.0 : 200.0;
    out[j] = mean + 10.0 * standard_normal(rng);
  }
  return out;
}

}  // namespace ptpath
