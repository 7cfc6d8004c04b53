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

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptpath/diagnostics.hpp"
#include "ptpath/engine.hpp"
#include "ptpath/errors.hpp"
#include "ptpath/io.hpp"
#include "ptpath/tuner.hpp"

namespace ptpath::cli {

namespace {

using nlohmann::json;

bool wants(const RunConfig& c, std::string_view format) {
  for (const std::string& f : c.output.formats) {
    if (f == format) return true;
  }
  return false;
}

void prepare_output(const Invocation& inv) {
  std::filesystem::create_directories(inv.out_dir);
  write_file_atomic(inv.out_dir / "effective_config.toml",
                    emit_config(inv.config));
}

std::string json_text(const json& doc) { return doc.dump(2) + "\n"; }

json barrier_json(const BarrierReport& b) {
  return {{"rejection_sum", b.rejection_sum},
          {"eq8_objective", b.eq8_objective},
          {"predicted_rate", b.predicted_rate},
          {"measured_rate", b.measured_rate}};
}

std::string compact_knots(const std::optional<SplineKnots>& knots) {
  if (!knots) return "";
  json arr = json::array();
  for (const AnnealingCoordinates& k : knots->knots()) {
    arr.push_back({k.eta0, k.eta1});
  }
  return arr.dump();
}

/// Analytic linear-path barrier when the model is the one-dimensional
/// Gaussian pair.
std::optional<double> analytic_linear_barrier(const ModelConfig& m) {
  if (m.id != "gaussian" || m.dimension != 1) return std::nullopt;
  const double z = std::abs(m.mu1 - m.mu0) / m.sigma;
  if (!(z > 0.0)) return 0.0;
  return lambda_linear_gaussian(z);
}

std::string round_tag(int index) {
  std::ostringstream s;
  s << "round_" << std::setw(4) << std::setfill('0') << index;
  return s.str();
}

void write_benchmark(const Invocation& inv, const BenchmarkTable& table,
                     const std::filesystem::path& file) {
  const auto M = static_cast<std::uint64_t>(inv.config.tuning.M);
  CsvWriter csv("benchmark", {"method", "round", "sweeps",
                              "cumulative_round_trips"});
  for (const BenchmarkCurve& curve : table.curves) {
    for (std::size_t r = 0; r < curve.cumulative_round_trips.size(); ++r) {
      csv.field(curve.method).field(r).field((r + 1) * M);
      csv.field(static_cast<double>(curve.cumulative_round_trips[r]));
      csv.end_row();
    }
  }
  for (std::size_t r = 0; r < table.bound_line.size(); ++r) {
    csv.field("bound-linear").field(r).field((r + 1) * M);
    csv.field(table.bound_line[r]);
    csv.end_row();
  }
  csv.save(file);
}

}  // namespace

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  auto parse_one = [&](const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size() || s.front() == '-') {
      throw ConfigError("invalid seed range '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {parse_one(text)};
  const std::uint64_t a = parse_one(text.substr(0, dots));
  const std::uint64_t b = parse_one(text.substr(dots + 2));
  if (b < a) throw ConfigError("empty seed range '" + text + "'");
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
  return out;
}

int cmd_run(const Invocation& inv) {
  const RunConfig& c = inv.config;
  const auto model = make_model(c.model, inv.base_dir);

  PathDescriptor path = PathDescriptor::linear();
  if (c.path.kind == "spline") {
    path = PathDescriptor::spline(
        c.path.knots_file.empty()
            ? SplineKnots::linear(c.path.knots)
            : knots_from_json(read_text_file(inv.base_dir / c.path.knots_file)));
  }
  const Schedule schedule =
      c.path.schedule_file.empty()
          ? Schedule::uniform(c.tuning.N)
          : schedule_from_json(
                read_text_file(inv.base_dir / c.path.schedule_file));

  const TuningConfig tc = c.tuning_config();
  NrptOptions options;
  options.seed = tc.seed;
  options.scheme = tc.scheme;
  options.threads = tc.threads;
  options.record_target_trace = true;
  const std::uint64_t sweeps =
      static_cast<std::uint64_t>(c.tuning.S) * tc.sweeps_per_round;
  const Nrpt sampler(*model, path, schedule, options);
  const NrptResult result = sampler.run(
      Ensemble::initial(*model, schedule.intervals() + 1), sweeps);

  prepare_output(inv);
  const BarrierReport report =
      barrier_report(result.rejection(), result.round_trip_rate());
  if (wants(c, "csv")) {
    CsvWriter trace("run_trace",
                    {"sweep", "cumulative_round_trips", "target_x0"});
    for (std::size_t m = 0; m < result.target_trace.size(); ++m) {
      trace.field(m + 1)
          .field(result.round_trips.cumulative[m])
          .field(result.target_trace[m].front())
          .end_row();
    }
    trace.save(inv.out_dir / "run_trace.csv");

    CsvWriter rej("rejections", {"pair", "t_lo", "t_hi", "rejection"});
    const std::vector<double> r = result.rejection();
    for (std::size_t n = 0; n < r.size(); ++n) {
      rej.field(n).field(schedule[n]).field(schedule[n + 1]).field(r[n]);
      rej.end_row();
    }
    rej.save(inv.out_dir / "rejections.csv");
  }
  if (wants(c, "json")) {
    json doc = barrier_json(report);
    doc["sweeps"] = sweeps;
    doc["chains"] = schedule.size();
    doc["round_trips"] = result.round_trips.completed_round_trips;
    write_file_atomic(inv.out_dir / "barrier_report.json", json_text(doc));
  }
  return kExitOk;
}

int cmd_tune(const Invocation& inv) {
  const RunConfig& c = inv.config;
  const auto model = make_model(c.model, inv.base_dir);
  const TuningTrace trace = path_opt_nrpt(*model, c.tuning_config());

  prepare_output(inv);
  if (wants(c, "csv")) {
    CsvWriter csv("tune_trace",
                  {"round", "skl", "rejection_sum", "eq8_objective",
                   "predicted_rate", "round_trip_rate", "round_trips",
                   "cumulative_round_trips", "gradient_norm", "step_applied",
                   "knots"});
    for (const TuningRound& r : trace.rounds) {
      csv.field(r.index)
          .field(r.skl)
          .field(r.barrier.rejection_sum)
          .field(r.barrier.eq8_objective)
          .field(r.barrier.predicted_rate)
          .field(r.round_trip_rate)
          .field(r.round_trips)
          .field(r.cumulative_round_trips)
          .field(r.gradient_norm)
          .field(r.step_applied ? 1 : 0)
          .field(compact_knots(r.knots))
          .end_row();
    }
    csv.save(inv.out_dir / "tune_trace.csv");
  }
  if (wants(c, "json")) {
    const auto snapshots = inv.out_dir / "snapshots";
    std::filesystem::create_directories(snapshots);
    for (const TuningRound& r : trace.rounds) {
      const std::string tag = round_tag(r.index);
      write_file_atomic(snapshots / (tag + "_schedule.json"),
                        schedule_to_json(r.schedule));
      if (r.knots) {
        write_file_atomic(snapshots / (tag + "_knots.json"),
                          knots_to_json(*r.knots));
      }
    }
    write_file_atomic(inv.out_dir / "final_schedule.json",
                      schedule_to_json(trace.final_schedule));
    if (trace.final_knots) {
      write_file_atomic(inv.out_dir / "final_knots.json",
                        knots_to_json(*trace.final_knots));
    }
  }
  if (trace.error) {
    std::cerr << "tune: aborted after " << trace.rounds.size()
              << " rounds: " << *trace.error << "\n";
    return kExitFailure;
  }

  if (!inv.comparators.empty()) {
    const BenchmarkTable table =
        run_benchmark(*model, c.tuning_config(), inv.comparators,
                      analytic_linear_barrier(c.model));
    BenchmarkTable combined = table;
    BenchmarkCurve own;
    own.method = c.path.kind == "spline" ? "spline" : "linear";
    for (const TuningRound& r : trace.rounds) {
      own.cumulative_round_trips.push_back(r.cumulative_round_trips);
    }
    combined.curves.insert(combined.curves.begin(), std::move(own));
    write_benchmark(inv, combined, inv.out_dir / "comparators.csv");
  }
  return kExitOk;
}

int cmd_snr(const Invocation& inv) {
  const RunConfig& c = inv.config;
  const std::vector<SnrRow> rows = snr_experiment(
      c.snr.grid, static_cast<std::size_t>(c.snr.samples),
      static_cast<std::size_t>(c.snr.replicates), c.tuning.seed);
  prepare_output(inv);
  CsvWriter csv("snr", {"phi", "objective", "mean", "sd", "snr"});
  for (const SnrRow& r : rows) {
    csv.field(r.phi).field(r.objective).field(r.mean).field(r.sd).field(r.snr);
    csv.end_row();
  }
  csv.save(inv.out_dir / "snr.csv");
  return kExitOk;
}

int cmd_oracle(const Invocation& inv) {
  const RunConfig& c = inv.config;
  json doc = {{"model", c.model.id}};
  if (const auto barrier = analytic_linear_barrier(c.model)) {
    const double z = std::abs(c.model.mu1 - c.model.mu0) / c.model.sigma;
    doc["z"] = z;
    doc["lambda_linear"] = *barrier;
    doc["predicted_rate"] = asymptotic_round_trip_rate(*barrier);
    if (z > 0.0) {
      doc["fisher_length"] = fisher_length_gaussian(z);
      doc["geodesic_rate"] = geodesic_bound_rate(z);
    }
    doc["skl_endpoints"] =
        gaussian_skl(c.model.mu0, c.model.sigma * c.model.sigma, c.model.mu1,
                     c.model.sigma * c.model.sigma);
  } else {
    const auto model = make_model(c.model, inv.base_dir);
    if (model->kernel_kind() != KernelKind::iid_closed_form) {
      throw ConfigError("oracle needs a model with an iid kernel");
    }
    // Midpoint rule over the linear path with Monte Carlo lambda(t).
    constexpr int kNodes = 64;
    constexpr std::size_t kSamples = 4000;
    double estimate = 0.0;
    double var = 0.0;
    const PathDescriptor linear = PathDescriptor::linear();
    for (int j = 0; j < kNodes; ++j) {
      const MonteCarloEstimate e = empirical_instantaneous_rate(
          linear, (j + 0.5) / kNodes, *model, kSamples, c.tuning.seed + j);
      estimate += e.mean / kNodes;
      var += e.standard_error * e.standard_error / (kNodes * kNodes);
    }
    doc["lambda_linear"] = estimate;
    doc["lambda_linear_se"] = std::sqrt(var);
    doc["predicted_rate"] = asymptotic_round_trip_rate(estimate);
  }
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_benchmark(const Invocation& inv) {
  const RunConfig& c = inv.config;
  const auto model = make_model(c.model, inv.base_dir);
  std::vector<std::string> methods = {"spline"};
  const std::vector<std::string> baselines =
      inv.comparators.empty()
          ? std::vector<std::string>{"nrpt-linear", "reversible-linear"}
          : inv.comparators;
  methods.insert(methods.end(), baselines.begin(), baselines.end());
  const BenchmarkTable table = run_benchmark(
      *model, c.tuning_config(), methods, analytic_linear_barrier(c.model));

  prepare_output(inv);
  if (wants(c, "csv")) {
    write_benchmark(inv, table, inv.out_dir / "benchmark.csv");
  }
  if (wants(c, "json")) {
    json doc = {{"linear_barrier", table.linear_barrier
                                       ? json(*table.linear_barrier)
                                       : json(nullptr)}};
    json methods_doc = json::object();
    for (const BenchmarkCurve& curve : table.curves) {
      methods_doc[curve.method] = {
          {"total_round_trips", curve.cumulative_round_trips.empty()
                                    ? 0
                                    : curve.cumulative_round_trips.back()},
          {"error", curve.trace.error ? json(*curve.trace.error)
                                      : json(nullptr)}};
    }
    doc["methods"] = methods_doc;
    write_file_atomic(inv.out_dir / "benchmark.json", json_text(doc));
  }
  for (const BenchmarkCurve& curve : table.curves) {
    if (curve.trace.error) {
      std::cerr << "benchmark: " << curve.method
                << " failed: " << *curve.trace.error << "\n";
      return kExitFailure;
    }
  }
  return kExitOk;
}

namespace {

using Command = int (*)(const Invocation&);

int dispatch(Command command, Invocation inv,
             const std::optional<std::string>& seeds) {
  if (!seeds) return command(inv);
  const std::vector<std::uint64_t> list = parse_seed_range(*seeds);
  std::vector<int> codes(list.size(), kExitOk);
  std::vector<std::string> errors(list.size());
  const int count = static_cast<int>(list.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    Invocation local = inv;
    local.config.tuning.seed = list[i];
    local.out_dir = inv.out_dir / ("seed_" + std::to_string(list[i]));
    try {
      codes[i] = command(local);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      codes[i] = dynamic_cast<const IoError*>(&e) ||
                         dynamic_cast<const ConfigError*>(&e)
                     ? kExitUsage
                     : kExitFailure;
    }
  }
  int worst = kExitOk;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (!errors[i].empty()) {
      std::cerr << "seed " << list[i] << ": " << errors[i] << "\n";
    }
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel tempering with tuned spline annealing paths"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::string> seeds;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> replicates;
  std::vector<std::string> comparators;

  struct Sub {
    const char* name;
    const char* help;
    Command command;
    bool takes_seeds;
    bool takes_comparators;
  };
  const Sub subs[] = {
      {"run", "Run NRPT on a fixed path and schedule", cmd_run, true, false},
      {"tune", "Tune the schedule and spline path", cmd_tune, true, true},
      {"snr", "Gradient signal-to-noise experiment", cmd_snr, false, false},
      {"oracle", "Print analytic barrier and rate oracles as JSON", cmd_oracle,
       false, false},
      {"benchmark", "Compare the tuned spline path with linear baselines",
       cmd_benchmark, true, true},
  };
  std::vector<std::pair<CLI::App*, Command>> registered;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("-c,--config", config_path, "TOML config file")
        ->required();
    sub->add_option("-o,--out", out_dir, "Output directory (overrides config)");
    sub->add_option("--seed", seed, "Seed (overrides config)");
    if (s.takes_seeds) {
      sub->add_option("--seeds", seeds, "Inclusive seed range a..b");
    }
    if (s.takes_comparators) {
      sub->add_option("--comparators", comparators,
                      "Baselines: nrpt-linear, reversible-linear")
          ->delimiter(',');
    }
    if (std::string_view(s.name) == "snr") {
      sub->add_option("--replicates", replicates, "Replicates per grid point");
    }
    registered.emplace_back(sub, s.command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    Invocation inv;
    const std::filesystem::path cfg_file = config_path;
    inv.config = load_config(cfg_file);
    inv.base_dir = cfg_file.has_parent_path() ? cfg_file.parent_path()
                                              : std::filesystem::path(".");
    if (seed) inv.config.tuning.seed = *seed;
    if (replicates) inv.config.snr.replicates = *replicates;
    if (!out_dir.empty()) inv.config.output.directory = out_dir;
    inv.config.validate();
    inv.out_dir = inv.config.output.directory;
    inv.comparators = comparators;
    for (const std::string& m : inv.comparators) {
      if (m != "nrpt-linear" && m != "reversible-linear") {
        throw ConfigError("unknown comparator '" + m + "'");
      }
    }
    for (const auto& [sub, command] : registered) {
      if (sub->parsed()) return dispatch(command, inv, seeds);
    }
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace ptpath::cli
