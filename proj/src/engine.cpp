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

#include "ptpath/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <exception>
#include <numeric>

#include "ptpath/errors.hpp"
#include "ptpath/rng.hpp"

namespace ptpath {

Ensemble Ensemble::initial(const LogDensityPair& model, int chains) {
  if (chains < 2) throw ConstraintError("ensemble needs at least 2 chains");
  return from_states(std::vector<State>(static_cast<std::size_t>(chains),
                                        model.initial_state()));
}

Ensemble Ensemble::from_states(std::vector<State> states) {
  if (states.size() < 2) {
    throw ConstraintError("ensemble needs at least 2 chains");
  }
  Ensemble e;
  e.replica_of_chain.resize(states.size());
  std::iota(e.replica_of_chain.begin(), e.replica_of_chain.end(), 0);
  e.direction_of_replica.assign(states.size(), Direction::up);
  e.states = std::move(states);
  return e;
}

Parity Ensemble::next_parity() const {
  return (sweeps_done + 1) % 2 == 0 ? Parity::even : Parity::odd;
}

bool Ensemble::is_permutation() const {
  std::vector<bool> seen(replica_of_chain.size(), false);
  for (int r : replica_of_chain) {
    if (r < 0 || static_cast<std::size_t>(r) >= seen.size() || seen[r]) {
      return false;
    }
    seen[r] = true;
  }
  return true;
}

std::vector<double> RejectionStats::mean() const {
  std::vector<double> out(sum_rejection.size(), 0.0);
  if (sweeps == 0) return out;
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = sum_rejection[n] / static_cast<double>(sweeps);
  }
  return out;
}

double NrptResult::round_trip_rate() const {
  if (stats.sweeps == 0) return 0.0;
  return static_cast<double>(round_trips.completed_round_trips) /
         static_cast<double>(stats.sweeps);
}

double swap_log_accept(AnnealingCoordinates eta_lo, AnnealingCoordinates eta_hi,
                       LogWeights w_lo, LogWeights w_hi) {
  const double proposed = dot(eta_lo, w_hi) + dot(eta_hi, w_lo);
  const double current = dot(eta_lo, w_lo) + dot(eta_hi, w_hi);
  const double log_ratio = proposed - current;
  if (std::isnan(log_ratio) || !std::isfinite(proposed) ||
      !std::isfinite(current)) {
    throw EvaluationError("non-finite swap acceptance ratio");
  }
  return std::min(0.0, log_ratio);
}

double swap_log_accept(const PathDescriptor& path, double t_lo, double t_hi,
                       LogWeights w_lo, LogWeights w_hi) {
  if (!(t_lo <= t_hi)) throw DomainError("swap_log_accept needs t_lo <= t_hi");
  if (t_lo == t_hi) {
    // Identical coordinates; still reject non-finite inputs.
    if (!std::isfinite(w_lo.w0) || !std::isfinite(w_lo.w1) ||
        !std::isfinite(w_hi.w0) || !std::isfinite(w_hi.w1)) {
      throw EvaluationError("non-finite swap acceptance ratio");
    }
    return 0.0;
  }
  return swap_log_accept(path.eta(t_lo), path.eta(t_hi), w_lo, w_hi);
}

double predicted_round_trip_rate(std::span<const double> rejections) {
  double inefficiency = 0.0;
  for (double r : rejections) {
    if (r >= 1.0) return 0.0;
    inefficiency += r / (1.0 - r);
  }
  return 1.0 / (2.0 + 2.0 * inefficiency);
}

Nrpt::Nrpt(const LogDensityPair& model, PathDescriptor path, Schedule schedule,
           NrptOptions options)
    : model_(model),
      path_(std::move(path)),
      schedule_(std::move(schedule)),
      options_(options) {
  etas_.reserve(schedule_.size());
  for (double t : schedule_.points()) {
    const AnnealingCoordinates eta = path_.eta(t);
    if (!eta.finite() || !model_.normalizable(eta)) {
      throw NonNormalizableError("path leaves the normalizable set at t=" +
                                 std::to_string(t));
    }
    etas_.push_back(eta);
  }
}

SweepResult Nrpt::sweep(Ensemble& ensemble, RejectionStats& stats) const {
  const std::size_t chains = etas_.size();
  if (ensemble.chains() != chains) {
    throw ConstraintError("ensemble size does not match the schedule");
  }
  if (stats.sum_rejection.size() != chains - 1) {
    stats.sum_rejection.assign(chains - 1, 0.0);
    stats.sweeps = 0;
  }
  const std::uint64_t m = ensemble.sweeps_done + 1;

  SweepResult out;
  out.weights.resize(chains);

  // Local exploration; chains are independent and each owns its stream.
  std::exception_ptr failure;
  const int chain_count = static_cast<int>(chains);
#pragma omp parallel for num_threads(std::max(1, options_.threads)) \
    schedule(static) if (options_.threads > 1)
  for (int n = 0; n < chain_count; ++n) {
    try {
      PhiloxStream rng(options_.seed, StreamPurpose::explore,
                       static_cast<std::uint32_t>(n), m);
      model_.explore_unchecked(etas_[n], ensemble.states[n], rng);
      out.weights[n] = model_.log_weights(ensemble.states[n]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  if (options_.scheme == CommunicationScheme::reversible) {
    PhiloxStream rng(options_.seed, StreamPurpose::parity, 0, m);
    out.parity = (rng() & 1u) ? Parity::odd : Parity::even;
  } else {
    out.parity = (m % 2 == 0) ? Parity::even : Parity::odd;
  }
  const std::size_t first = out.parity == Parity::even ? 0 : 1;

  // Acceptance of every pair is computed on the post-exploration states.
  out.acceptance.resize(chains - 1);
  for (std::size_t n = 0; n + 1 < chains; ++n) {
    const double log_alpha = swap_log_accept(etas_[n], etas_[n + 1],
                                             out.weights[n], out.weights[n + 1]);
    out.acceptance[n] = std::exp(log_alpha);
    stats.sum_rejection[n] += 1.0 - out.acceptance[n];
  }
  ++stats.sweeps;

  for (std::size_t n = first; n + 1 < chains; n += 2) {
    PhiloxStream rng(options_.seed, StreamPurpose::swap,
                     static_cast<std::uint32_t>(n), m);
    if (rng.uniform() <= out.acceptance[n]) {
      std::swap(ensemble.states[n], ensemble.states[n + 1]);
      std::swap(ensemble.replica_of_chain[n], ensemble.replica_of_chain[n + 1]);
    }
  }
  assert(ensemble.is_permutation());

  const int top = ensemble.replica_of_chain.back();
  ensemble.direction_of_replica[top] = Direction::down;
  const int bottom = ensemble.replica_of_chain.front();
  if (ensemble.direction_of_replica[bottom] == Direction::down) {
    ensemble.direction_of_replica[bottom] = Direction::up;
    out.round_trips = 1;
  }

  ensemble.sweeps_done = m;
  return out;
}

NrptResult Nrpt::run(Ensemble init, std::uint64_t sweeps) const {
  if (sweeps < 1) throw ConstraintError("run needs at least one sweep");
  NrptResult result;
  result.final_ensemble = std::move(init);
  result.stats = RejectionStats(schedule_.intervals());
  result.round_trips.cumulative.reserve(sweeps);
  const std::size_t chains = etas_.size();
  if (options_.record_log_weights) {
    result.log_weights.assign(chains, {});
    for (auto& v : result.log_weights) v.reserve(sweeps);
  }
  if (options_.record_target_trace) result.target_trace.reserve(sweeps);
  if (options_.record_replica_trajectory) {
    result.replica_trajectory.reserve(sweeps + 1);
    result.replica_trajectory.push_back(result.final_ensemble.replica_of_chain);
  }

  for (std::uint64_t s = 0; s < sweeps; ++s) {
    SweepResult sr = sweep(result.final_ensemble, result.stats);
    result.exploration_steps += chains;
    result.round_trips.completed_round_trips += sr.round_trips;
    result.round_trips.cumulative.push_back(
        result.round_trips.completed_round_trips);
    if (options_.record_log_weights) {
      for (std::size_t n = 0; n < chains; ++n) {
        result.log_weights[n].push_back(sr.weights[n]);
      }
    }
    if (options_.record_target_trace) {
      result.target_trace.push_back(result.final_ensemble.states.back());
    }
    if (options_.record_replica_trajectory) {
      result.replica_trajectory.push_back(
          result.final_ensemble.replica_of_chain);
    }
  }
  return result;
}

SweepResult deo_sweep(Ensemble& ensemble, const Schedule& schedule,
                      const PathDescriptor& path, const LogDensityPair& model,
                      RejectionStats& stats, const NrptOptions& options) {
  return Nrpt(model, path, schedule, options).sweep(ensemble, stats);
}

NrptResult run_nrpt(Ensemble init, const PathDescriptor& path,
                    const Schedule& schedule, std::uint64_t sweeps,
                    const LogDensityPair& model, const NrptOptions& options) {
  return Nrpt(model, path, schedule, options).run(std::move(init), sweeps);
}

}  // namespace ptpath
