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

#ifndef PTPATH_TUNER_HPP
#define PTPATH_TUNER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptpath/diagnostics.hpp"
#include "ptpath/engine.hpp"
#include "ptpath/models.hpp"
#include "ptpath/objective.hpp"
#include "ptpath/paths.hpp"
#include "ptpath/schedule.hpp"

namespace ptpath {

enum class InitialPath { linear, spline };

struct TuningConfig {
  int intervals = 50;  ///< N; the ensemble has N + 1 chains.
  int knots = 4;       ///< K spline segments.
  int rounds = 50;     ///< S.
  std::uint64_t sweeps_per_round = 300;  ///< M.
  double learning_rate = 0.2;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;
  std::string model_id = "gaussian";
  InitialPath initial_path = InitialPath::spline;
  bool adapt_schedule = true;
  /// Ignored unless the path is a spline with interior knots.
  bool adapt_path = true;
  CommunicationScheme scheme = CommunicationScheme::deterministic_even_odd;
  int threads = 1;

  void validate() const;
};

struct TuningRound {
  int index = 0;
  /// Schedule and knots the round's NRPT run used.
  Schedule schedule = Schedule::uniform(1);
  std::optional<SplineKnots> knots;
  std::vector<double> rejections;
  std::uint64_t round_trips = 0;
  std::uint64_t cumulative_round_trips = 0;
  double round_trip_rate = 0.0;
  double skl = 0.0;
  BarrierReport barrier;
  double gradient_norm = 0.0;
  bool step_applied = false;
};

struct TuningTrace {
  std::vector<TuningRound> rounds;
  Schedule final_schedule = Schedule::uniform(1);
  std::optional<SplineKnots> final_knots;
  std::optional<Ensemble> final_ensemble;
  std::uint64_t exploration_steps = 0;
  /// Set when a sub-operation failed; `rounds` then holds the completed
  /// prefix.
  std::optional<std::string> error;

  PathDescriptor final_path() const;
};

/// Alternates NRPT runs, schedule updates and SKL gradient steps on the
/// spline knots for `config.rounds` rounds, carrying the ensemble across
/// rounds. Adaptation stops after the last round.
TuningTrace path_opt_nrpt(const LogDensityPair& model,
                          const TuningConfig& config);

struct BenchmarkCurve {
  std::string method;
  /// Cumulative round trips after each round.
  std::vector<std::uint64_t> cumulative_round_trips;
  TuningTrace trace;
};

struct BenchmarkTable {
  std::vector<BenchmarkCurve> curves;
  /// Barrier used for the reference line; absent when unknown.
  std::optional<double> linear_barrier;
  /// rate * sweeps for the linear-path bound 1/(2 + 2 Lambda), per round.
  std::vector<double> bound_line;
};

/// Known comparator names: "spline", "nrpt-linear", "reversible-linear".
/// "nrpt-linear" adapts the schedule of a linear path; "reversible-linear"
/// uses a uniform schedule and random parity. All methods share the seed and
/// the budget in `config`. When `linear_barrier` is absent, the final-round
/// rejection sum of "nrpt-linear" is used if that method ran.
BenchmarkTable run_benchmark(const LogDensityPair& model,
                             const TuningConfig& config,
                             const std::vector<std::string>& methods,
                             std::optional<double> linear_barrier = {});

}  // namespace ptpath

#endif  // PTPATH_TUNER_HPP
