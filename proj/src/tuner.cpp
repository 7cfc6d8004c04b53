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

#include "ptpath/tuner.hpp"

#include <cmath>
#include <exception>

#include "ptpath/errors.hpp"

namespace ptpath {

void TuningConfig::validate() const {
  if (intervals < 1) throw ConstraintError("tuning: N must be >= 1");
  if (knots < 1) throw ConstraintError("tuning: K must be >= 1");
  if (rounds < 1) throw ConstraintError("tuning: S must be >= 1");
  if (sweeps_per_round < 2) {
    throw ConstraintError("tuning: M must be >= 2 for gradient estimates");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConstraintError("tuning: learning rate must be positive");
  }
  if (!(epsilon > 0.0)) throw ConstraintError("tuning: epsilon must be > 0");
  if (threads < 1) throw ConstraintError("tuning: threads must be >= 1");
}

PathDescriptor TuningTrace::final_path() const {
  return final_knots ? PathDescriptor::spline(*final_knots)
                     : PathDescriptor::linear();
}

TuningTrace path_opt_nrpt(const LogDensityPair& model,
                          const TuningConfig& config) {
  config.validate();
  TuningTrace trace;
  Schedule schedule = Schedule::uniform(config.intervals);
  std::optional<SplineKnots> knots;
  if (config.initial_path == InitialPath::spline) {
    knots = SplineKnots::linear(config.knots);
  }
  trace.final_schedule = schedule;
  trace.final_knots = knots;

  NrptOptions options;
  options.seed = config.seed;
  options.scheme = config.scheme;
  options.threads = config.threads;
  options.record_log_weights = true;

  OptimizerState optimizer;
  optimizer.learning_rate = config.learning_rate;
  optimizer.epsilon = config.epsilon;

  try {
    Ensemble ensemble = Ensemble::initial(model, config.intervals + 1);
    std::uint64_t cumulative = 0;
    for (int s = 0; s < config.rounds; ++s) {
      const PathDescriptor path = knots ? PathDescriptor::spline(*knots)
                                        : PathDescriptor::linear();
      const Nrpt sampler(model, path, schedule, options);
      NrptResult result = sampler.run(std::move(ensemble),
                                      config.sweeps_per_round);
      ensemble = std::move(result.final_ensemble);
      trace.exploration_steps += result.exploration_steps;

      TuningRound round;
      round.index = s;
      round.schedule = schedule;
      round.knots = knots;
      round.rejections = result.rejection();
      round.round_trips = result.round_trips.completed_round_trips;
      cumulative += round.round_trips;
      round.cumulative_round_trips = cumulative;
      round.round_trip_rate = result.round_trip_rate();
      round.barrier = barrier_report(round.rejections, round.round_trip_rate);

      Schedule next_schedule = schedule;
      if (config.adapt_schedule) {
        next_schedule = update_schedule(
            fit_cumulative_barrier(schedule, round.rejections),
            config.intervals);
      }

      // The batches were drawn under the round's schedule, so the gradient
      // is taken there as well.
      std::optional<SplineKnots> next_knots = knots;
      if (knots && config.adapt_path && knots->segments() > 1) {
        const SklGradientEstimate grad =
            estimate_skl_gradient(*knots, schedule, result.log_weights);
        round.skl = grad.value;
        double norm2 = 0.0;
        for (double g : grad.gradient) norm2 += g * g;
        round.gradient_norm = std::sqrt(norm2);
        const std::vector<double> psi = log_knot_coordinates(*knots);
        const AdagradStep step = adagrad_step(optimizer, psi, grad.gradient);
        round.step_applied = step.applied;
        if (step.applied) next_knots = apply_knot_update(*knots, step.psi);
      } else {
        round.skl = estimate_skl(path, schedule, result.log_weights);
      }

      trace.rounds.push_back(std::move(round));
      schedule = std::move(next_schedule);
      knots = std::move(next_knots);
      trace.final_schedule = schedule;
      trace.final_knots = knots;
      trace.final_ensemble = ensemble;
    }
  } catch (const std::exception& e) {
    trace.error = e.what();
  }
  return trace;
}

BenchmarkTable run_benchmark(const LogDensityPair& model,
                             const TuningConfig& config,
                             const std::vector<std::string>& methods,
                             std::optional<double> linear_barrier) {
  config.validate();
  BenchmarkTable table;
  for (const std::string& method : methods) {
    TuningConfig c = config;
    if (method == "spline") {
      c.initial_path = InitialPath::spline;
    } else if (method == "nrpt-linear") {
      c.initial_path = InitialPath::linear;
      c.adapt_path = false;
    } else if (method == "reversible-linear") {
      c.initial_path = InitialPath::linear;
      c.adapt_path = false;
      c.adapt_schedule = false;
      c.scheme = CommunicationScheme::reversible;
    } else {
      throw ConstraintError("unknown comparator: " + method);
    }
    BenchmarkCurve curve;
    curve.method = method;
    curve.trace = path_opt_nrpt(model, c);
    for (const TuningRound& r : curve.trace.rounds) {
      curve.cumulative_round_trips.push_back(r.cumulative_round_trips);
    }
    if (!linear_barrier && method == "nrpt-linear" &&
        !curve.trace.rounds.empty()) {
      linear_barrier = curve.trace.rounds.back().barrier.rejection_sum;
    }
    table.curves.push_back(std::move(curve));
  }
  table.linear_barrier = linear_barrier;
  if (linear_barrier) {
    const double rate = asymptotic_round_trip_rate(*linear_barrier);
    for (int s = 1; s <= config.rounds; ++s) {
      table.bound_line.push_back(rate * static_cast<double>(s) *
                                 static_cast<double>(config.sweeps_per_round));
    }
  }
  return table;
}

}  // namespace ptpath
