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

#ifndef PTPATH_CONFIG_HPP
#define PTPATH_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ptpath/models.hpp"
#include "ptpath/tuner.hpp"

namespace ptpath {

struct ModelConfig {
  /// "gaussian", "beta_binomial" or "gmm". Only the keys of the chosen
  /// model are accepted.
  std::string id = "gaussian";

  double mu0 = -1.0;
  double mu1 = 1.0;
  double sigma = 0.2;
  int dimension = 1;
  /// "iid" or "rwm" (Gaussian and beta-binomial).
  std::string kernel = "iid";
  double rwm_step = 0.5;

  double a0 = 180.0;
  double b0 = 840.0;
  std::int64_t successes = 140000;
  std::int64_t trials = 200000;

  /// "simulated", "galaxy" (bundled file) or a CSV path.
  std::string data = "simulated";
  std::int64_t simulated_size = 1000;
  std::uint64_t data_seed = 1;
  double data_scale = 1.0;
  int components = 2;
  double prior_mean = 150.0;
  double prior_sd = 1.0;
  double component_sd = 10.0;
  bool proportion_mh = true;

  bool operator==(const ModelConfig&) const = default;
};

struct PathConfig {
  /// "linear" or "spline".
  std::string kind = "spline";
  int knots = 4;
  /// Optional knots JSON for `run`; empty means the linear spline.
  std::string knots_file;
  /// Optional schedule JSON for `run`; empty means uniform.
  std::string schedule_file;

  bool operator==(const PathConfig&) const = default;
};

struct TuningSection {
  int N = 50;
  int S = 50;
  std::int64_t M = 300;
  double gamma = 0.2;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;
  bool adapt_schedule = true;
  /// "deo" or "reversible".
  std::string scheme = "deo";
  int threads = 1;

  bool operator==(const TuningSection&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats = {"csv", "json"};

  bool operator==(const OutputConfig&) const = default;
};

struct SnrConfig {
  std::vector<double> grid = default_snr_grid();
  std::int64_t samples = 50;
  std::int64_t replicates = 1000;

  bool operator==(const SnrConfig&) const = default;
};

struct RunConfig {
  ModelConfig model;
  PathConfig path;
  TuningSection tuning;
  OutputConfig output;
  SnrConfig snr;

  bool operator==(const RunConfig&) const = default;

  /// Checks cross-field constraints; throws ConfigError.
  void validate() const;
  TuningConfig tuning_config() const;
};

/// Strict parse: unknown sections or keys and wrongly typed values raise
/// ConfigError. Missing keys take the defaults above.
RunConfig parse_config(std::string_view toml_text);

/// Reads and parses `path`; a missing file raises IoError naming it.
RunConfig load_config(const std::filesystem::path& path);

/// Every effective value, including defaults, as TOML that parse_config
/// reads back to an equal RunConfig.
std::string emit_config(const RunConfig& config);

/// Builds the model described by `config.model`. Relative data paths are
/// resolved against `base_dir`.
std::unique_ptr<LogDensityPair> make_model(
    const ModelConfig& config, const std::filesystem::path& base_dir = {});

/// Location of the bundled datasets.
std::filesystem::path bundled_data_dir();

}  // namespace ptpath

#endif  // PTPATH_CONFIG_HPP
