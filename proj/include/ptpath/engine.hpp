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

#ifndef PTPATH_ENGINE_HPP
#define PTPATH_ENGINE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ptpath/models.hpp"
#include "ptpath/paths.hpp"
#include "ptpath/schedule.hpp"

namespace ptpath {

enum class Direction : std::uint8_t { up, down };
enum class Parity { even, odd };

/// Deterministic even-odd (non-reversible) or uniformly random parity per
/// sweep (reversible baseline).
enum class CommunicationScheme { deterministic_even_odd, reversible };

/// The N+1 chain states and the replica bookkeeping used for round trips.
struct Ensemble {
  std::vector<State> states;
  std::vector<int> replica_of_chain;
  std::vector<Direction> direction_of_replica;
  /// Number of sweeps performed so far; the next sweep has index m =
  /// sweeps_done + 1 and uses the even swap set when m is even.
  std::uint64_t sweeps_done = 0;

  /// Every chain starts from model.initial_state(), replica n in chain n,
  /// all directions up.
  static Ensemble initial(const LogDensityPair& model, int chains);
  static Ensemble from_states(std::vector<State> states);

  std::size_t chains() const { return states.size(); }
  Parity next_parity() const;
  bool is_permutation() const;
};

struct RejectionStats {
  std::vector<double> sum_rejection;
  std::uint64_t sweeps = 0;

  explicit RejectionStats(int intervals = 0)
      : sum_rejection(static_cast<std::size_t>(intervals), 0.0) {}

  /// r_n = sum_rejection[n] / sweeps.
  std::vector<double> mean() const;
};

struct RoundTripLog {
  std::uint64_t completed_round_trips = 0;
  /// Cumulative completed round trips after each sweep of the run.
  std::vector<std::uint64_t> cumulative;
};

struct SweepResult {
  /// Swap acceptance probability for every neighbour pair.
  std::vector<double> acceptance;
  /// W(x) of each chain's state after exploration, before swaps.
  std::vector<LogWeights> weights;
  Parity parity = Parity::odd;
  int round_trips = 0;
};

struct NrptOptions {
  std::uint64_t seed = 1;
  CommunicationScheme scheme = CommunicationScheme::deterministic_even_odd;
  int threads = 1;
  bool record_target_trace = false;
  bool record_log_weights = false;
  bool record_replica_trajectory = false;
};

struct NrptResult {
  Ensemble final_ensemble;
  RejectionStats stats;
  RoundTripLog round_trips;
  /// Chain-N state after each sweep (when recorded).
  std::vector<State> target_trace;
  /// log_weights[n][m]: post-exploration W at chain n, sweep m.
  std::vector<std::vector<LogWeights>> log_weights;
  /// replica_trajectory[m]: replica_of_chain after sweep m; entry 0 is the
  /// initial assignment.
  std::vector<std::vector<int>> replica_trajectory;
  std::uint64_t exploration_steps = 0;

  std::vector<double> rejection() const { return stats.mean(); }
  double round_trip_rate() const;
};

/// log of the swap acceptance probability between chains at t_lo and t_hi
/// holding states with weights w_lo and w_hi.
double swap_log_accept(AnnealingCoordinates eta_lo, AnnealingCoordinates eta_hi,
                       LogWeights w_lo, LogWeights w_hi);
double swap_log_accept(const PathDescriptor& path, double t_lo, double t_hi,
                       LogWeights w_lo, LogWeights w_hi);

/// (2 + 2 sum r/(1-r))^{-1}; zero when any r_n reaches 1.
double predicted_round_trip_rate(std::span<const double> rejections);

/// Non-reversible parallel tempering over a fixed path and schedule.
class Nrpt {
 public:
  Nrpt(const LogDensityPair& model, PathDescriptor path, Schedule schedule,
       NrptOptions options = {});

  /// One local exploration of every chain followed by one communication
  /// step. Acceptance is computed for every pair and accumulated into
  /// `stats`; only pairs in the active parity set may swap.
  SweepResult sweep(Ensemble& ensemble, RejectionStats& stats) const;

  NrptResult run(Ensemble init, std::uint64_t sweeps) const;

  const Schedule& schedule() const { return schedule_; }
  const PathDescriptor& path() const { return path_; }
  std::span<const AnnealingCoordinates> chain_coordinates() const {
    return etas_;
  }

 private:
  const LogDensityPair& model_;
  PathDescriptor path_;
  Schedule schedule_;
  NrptOptions options_;
  std::vector<AnnealingCoordinates> etas_;
};

SweepResult deo_sweep(Ensemble& ensemble, const Schedule& schedule,
                      const PathDescriptor& path, const LogDensityPair& model,
                      RejectionStats& stats, const NrptOptions& options = {});

NrptResult run_nrpt(Ensemble init, const PathDescriptor& path,
                    const Schedule& schedule, std::uint64_t sweeps,
                    const LogDensityPair& model,
                    const NrptOptions& options = {});

}  // namespace ptpath

#endif  // PTPATH_ENGINE_HPP
