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

#include "ptpath/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <initializer_list>
#include <sstream>

#include <toml.hpp>

#include "ptpath/errors.hpp"
#include "ptpath/io.hpp"

#ifndef PTPATH_DATA_DIR
#define PTPATH_DATA_DIR "data"
#endif

namespace ptpath {

namespace {

std::string where(std::string_view section, std::string_view key) {
  return "[" + std::string(section) + "]." + std::string(key);
}

class SectionReader {
 public:
  SectionReader(const toml::table* table, std::string_view name)
      : table_(table), name_(name) {}

  /// Rejects keys not in `allowed`.
  void only(std::initializer_list<std::string_view> allowed) const {
    if (!table_) return;
    for (const auto& [key, value] : *table_) {
      if (std::find(allowed.begin(), allowed.end(), key.str()) ==
          allowed.end()) {
        throw ConfigError("unknown key " + where(name_, key.str()));
      }
    }
  }

  void get(std::string_view key, double& out) const {
    const toml::node* n = find(key);
    if (!n) return;
    if (auto v = n->value_exact<double>()) {
      out = *v;
    } else if (auto i = n->value_exact<std::int64_t>()) {
      out = static_cast<double>(*i);
    } else {
      throw type_error(key, "a number");
    }
  }

  void get(std::string_view key, std::int64_t& out) const {
    const toml::node* n = find(key);
    if (!n) return;
    auto v = n->value_exact<std::int64_t>();
    if (!v) throw type_error(key, "an integer");
    out = *v;
  }

  void get(std::string_view key, int& out) const {
    std::int64_t v = out;
    get(key, v);
    if (v < INT32_MIN || v > INT32_MAX) throw type_error(key, "a 32-bit integer");
    out = static_cast<int>(v);
  }

  void get(std::string_view key, std::uint64_t& out) const {
    const toml::node* n = find(key);
    if (!n) return;
    auto v = n->value_exact<std::int64_t>();
    if (!v || *v < 0) throw type_error(key, "a non-negative integer");
    out = static_cast<std::uint64_t>(*v);
  }

  void get(std::string_view key, bool& out) const {
    const toml::node* n = find(key);
    if (!n) return;
    auto v = n->value_exact<bool>();
    if (!v) throw type_error(key, "a boolean");
    out = *v;
  }

  void get(std::string_view key, std::string& out) const {
    const toml::node* n = find(key);
    if (!n) return;
    auto v = n->value_exact<std::string>();
    if (!v) throw type_error(key, "a string");
    out = *v;
  }

  void get(std::string_view key, std::vector<std::string>& out) const {
    const toml::node* n = find(key);
    if (!n) return;
    const toml::array* arr = n->as_array();
    if (!arr) throw type_error(key, "an array of strings");
    out.clear();
    for (const toml::node& e : *arr) {
      auto v = e.value_exact<std::string>();
      if (!v) throw type_error(key, "an array of strings");
      out.push_back(*v);
    }
  }

  void get(std::string_view key, std::vector<double>& out) const {
    const toml::node* n = find(key);
    if (!n) return;
    const toml::array* arr = n->as_array();
    if (!arr) throw type_error(key, "an array of numbers");
    out.clear();
    for (const toml::node& e : *arr) {
      if (auto v = e.value_exact<double>()) {
        out.push_back(*v);
      } else if (auto i = e.value_exact<std::int64_t>()) {
        out.push_back(static_cast<double>(*i));
      } else {
        throw type_error(key, "an array of numbers");
      }
    }
  }

 private:
  const toml::node* find(std::string_view key) const {
    return table_ ? table_->get(key) : nullptr;
  }

  ConfigError type_error(std::string_view key, std::string_view expected) const {
    return ConfigError(where(name_, key) + " must be " + std::string(expected));
  }

  const toml::table* table_;
  std::string_view name_;
};

const toml::table* section(const toml::table& root, std::string_view name) {
  const toml::node* n = root.get(name);
  if (!n) return nullptr;
  const toml::table* t = n->as_table();
  if (!t) throw ConfigError("[" + std::string(name) + "] must be a table");
  return t;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void RunConfig::validate() const {
  const ModelConfig& m = model;
  require(m.id == "gaussian" || m.id == "beta_binomial" || m.id == "gmm",
          "[model].id must be gaussian, beta_binomial or gmm");
  if (m.id == "gaussian") {
    require(m.sigma > 0.0, "[model].sigma must be positive");
    require(m.dimension >= 1, "[model].dimension must be >= 1");
  }
  if (m.id == "beta_binomial") {
    require(m.a0 > 0.0 && m.b0 > 0.0, "[model].a0 and b0 must be positive");
    require(m.successes >= 0 && m.successes <= m.trials,
            "[model] needs 0 <= successes <= trials");
  }
  if (m.id != "gmm") {
    require(m.kernel == "iid" || m.kernel == "rwm",
            "[model].kernel must be iid or rwm");
    require(m.kernel == "iid" || m.rwm_step > 0.0,
            "[model].rwm_step must be positive");
  } else {
    require(m.components >= 1, "[model].components must be >= 1");
    require(m.component_sd > 0.0 && m.prior_sd > 0.0,
            "[model] standard deviations must be positive");
    require(m.data_scale > 0.0, "[model].data_scale must be positive");
    require(m.simulated_size >= 1, "[model].simulated_size must be >= 1");
  }
  require(path.kind == "linear" || path.kind == "spline",
          "[path].kind must be linear or spline");
  require(path.knots >= 1, "[path].knots must be >= 1");
  require(tuning.N >= 1, "[tuning].N must be >= 1");
  require(tuning.S >= 1, "[tuning].S must be >= 1");
  require(tuning.M >= 2, "[tuning].M must be >= 2");
  require(tuning.gamma > 0.0, "[tuning].gamma must be positive");
  require(tuning.epsilon > 0.0, "[tuning].epsilon must be positive");
  require(tuning.scheme == "deo" || tuning.scheme == "reversible",
          "[tuning].scheme must be deo or reversible");
  require(tuning.threads >= 1, "[tuning].threads must be >= 1");
  require(!output.directory.empty(), "[output].directory must be set");
  for (const std::string& f : output.formats) {
    require(f == "csv" || f == "json", "[output].formats accepts csv, json");
  }
  require(!snr.grid.empty(), "[snr].grid must not be empty");
  require(snr.samples >= 1 && snr.replicates >= 1,
          "[snr] samples and replicates must be >= 1");
}

TuningConfig RunConfig::tuning_config() const {
  TuningConfig c;
  c.intervals = tuning.N;
  c.knots = path.knots;
  c.rounds = tuning.S;
  c.sweeps_per_round = static_cast<std::uint64_t>(tuning.M);
  c.learning_rate = tuning.gamma;
  c.epsilon = tuning.epsilon;
  c.seed = tuning.seed;
  c.model_id = model.id;
  c.initial_path =
      path.kind == "spline" ? InitialPath::spline : InitialPath::linear;
  c.adapt_schedule = tuning.adapt_schedule;
  c.scheme = tuning.scheme == "reversible"
                 ? CommunicationScheme::reversible
                 : CommunicationScheme::deterministic_even_odd;
  c.threads = tuning.threads;
  return c;
}

RunConfig parse_config(std::string_view toml_text) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML syntax error at line " << e.source().begin.line << ": "
        << e.description();
    throw ConfigError(msg.str());
  }
  for (const auto& [key, value] : root) {
    const std::string_view k = key.str();
    if (k != "model" && k != "path" && k != "tuning" && k != "output" &&
        k != "snr") {
      throw ConfigError("unknown section [" + std::string(k) + "]");
    }
  }

  RunConfig c;
  const SectionReader model(section(root, "model"), "model");
  model.get("id", c.model.id);
  if (c.model.id == "gaussian") {
    model.only({"id", "mu0", "mu1", "sigma", "dimension", "kernel", "rwm_step"});
    model.get("mu0", c.model.mu0);
    model.get("mu1", c.model.mu1);
    model.get("sigma", c.model.sigma);
    model.get("dimension", c.model.dimension);
  } else if (c.model.id == "beta_binomial") {
    model.only({"id", "a0", "b0", "successes", "trials", "kernel", "rwm_step"});
    model.get("a0", c.model.a0);
    model.get("b0", c.model.b0);
    model.get("successes", c.model.successes);
    model.get("trials", c.model.trials);
  } else if (c.model.id == "gmm") {
    model.only({"id", "data", "simulated_size", "data_seed", "data_scale",
                "components", "prior_mean", "prior_sd", "component_sd",
                "proportion_mh"});
    model.get("data", c.model.data);
    model.get("simulated_size", c.model.simulated_size);
    model.get("data_seed", c.model.data_seed);
    model.get("data_scale", c.model.data_scale);
    model.get("components", c.model.components);
    model.get("prior_mean", c.model.prior_mean);
    model.get("prior_sd", c.model.prior_sd);
    model.get("component_sd", c.model.component_sd);
    model.get("proportion_mh", c.model.proportion_mh);
  } else {
    throw ConfigError("[model].id must be gaussian, beta_binomial or gmm");
  }
  if (c.model.id != "gmm") {
    model.get("kernel", c.model.kernel);
    model.get("rwm_step", c.model.rwm_step);
  }

  const SectionReader path(section(root, "path"), "path");
  path.only({"kind", "knots", "knots_file", "schedule_file"});
  path.get("kind", c.path.kind);
  path.get("knots", c.path.knots);
  path.get("knots_file", c.path.knots_file);
  path.get("schedule_file", c.path.schedule_file);

  const SectionReader tuning(section(root, "tuning"), "tuning");
  tuning.only({"N", "S", "M", "gamma", "epsilon", "seed", "adapt_schedule",
               "scheme", "threads"});
  tuning.get("N", c.tuning.N);
  tuning.get("S", c.tuning.S);
  tuning.get("M", c.tuning.M);
  tuning.get("gamma", c.tuning.gamma);
  tuning.get("epsilon", c.tuning.epsilon);
  tuning.get("seed", c.tuning.seed);
  tuning.get("adapt_schedule", c.tuning.adapt_schedule);
  tuning.get("scheme", c.tuning.scheme);
  tuning.get("threads", c.tuning.threads);

  const SectionReader output(section(root, "output"), "output");
  output.only({"directory", "formats"});
  output.get("directory", c.output.directory);
  output.get("formats", c.output.formats);

  const SectionReader snr(section(root, "snr"), "snr");
  snr.only({"grid", "samples", "replicates"});
  snr.get("grid", c.snr.grid);
  snr.get("samples", c.snr.samples);
  snr.get("replicates", c.snr.replicates);

  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("config file not found: " + path.string());
  }
  return parse_config(read_text_file(path));
}

std::string emit_config(const RunConfig& c) {
  toml::table model{{"id", c.model.id}};
  if (c.model.id == "gaussian") {
    model.insert("mu0", c.model.mu0);
    model.insert("mu1", c.model.mu1);
    model.insert("sigma", c.model.sigma);
    model.insert("dimension", c.model.dimension);
  } else if (c.model.id == "beta_binomial") {
    model.insert("a0", c.model.a0);
    model.insert("b0", c.model.b0);
    model.insert("successes", c.model.successes);
    model.insert("trials", c.model.trials);
  } else {
    model.insert("data", c.model.data);
    model.insert("simulated_size", c.model.simulated_size);
    model.insert("data_seed", static_cast<std::int64_t>(c.model.data_seed));
    model.insert("data_scale", c.model.data_scale);
    model.insert("components", c.model.components);
    model.insert("prior_mean", c.model.prior_mean);
    model.insert("prior_sd", c.model.prior_sd);
    model.insert("component_sd", c.model.component_sd);
    model.insert("proportion_mh", c.model.proportion_mh);
  }
  if (c.model.id != "gmm") {
    model.insert("kernel", c.model.kernel);
    model.insert("rwm_step", c.model.rwm_step);
  }

  toml::table path{{"kind", c.path.kind},
                   {"knots", c.path.knots},
                   {"knots_file", c.path.knots_file},
                   {"schedule_file", c.path.schedule_file}};

  toml::table tuning{{"N", c.tuning.N},
                     {"S", c.tuning.S},
                     {"M", c.tuning.M},
                     {"gamma", c.tuning.gamma},
                     {"epsilon", c.tuning.epsilon},
                     {"seed", static_cast<std::int64_t>(c.tuning.seed)},
                     {"adapt_schedule", c.tuning.adapt_schedule},
                     {"scheme", c.tuning.scheme},
                     {"threads", c.tuning.threads}};

  toml::array formats;
  for (const std::string& f : c.output.formats) formats.push_back(f);
  toml::table output{{"directory", c.output.directory},
                     {"formats", formats}};

  toml::array grid;
  for (double g : c.snr.grid) grid.push_back(g);
  toml::table snr{{"grid", grid},
                  {"samples", c.snr.samples},
                  {"replicates", c.snr.replicates}};

  toml::table root{{"model", model},
                   {"path", path},
                   {"tuning", tuning},
                   {"output", output},
                   {"snr", snr}};
  std::ostringstream out;
  out << root << "\n";
  return out.str();
}

std::filesystem::path bundled_data_dir() {
  if (const char* env = std::getenv("PTPATH_DATA_DIR")) return env;
  return PTPATH_DATA_DIR;
}

std::unique_ptr<LogDensityPair> make_model(const ModelConfig& m,
                                           const std::filesystem::path& base_dir) {
  const KernelKind kernel = m.kernel == "rwm" ? KernelKind::random_walk_metropolis
                                              : KernelKind::iid_closed_form;
  if (m.id == "gaussian") {
    return std::make_unique<GaussianPair>(m.mu0, m.mu1, m.sigma, m.dimension,
                                          kernel, m.rwm_step);
  }
  if (m.id == "beta_binomial") {
    return std::make_unique<BetaBinomialPair>(m.a0, m.b0, m.successes,
                                              m.trials, kernel, m.rwm_step);
  }
  if (m.id == "gmm") {
    std::vector<double> data;
    if (m.data == "simulated") {
      data = simulate_two_component_mixture(
          static_cast<std::size_t>(m.simulated_size), m.data_seed);
    } else if (m.data == "galaxy") {
      data = load_observations_csv(bundled_data_dir() / "galaxy.csv");
    } else {
      std::filesystem::path p = m.data;
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      data = load_observations_csv(p);
    }
    for (double& x : data) x *= m.data_scale;
    return std::make_unique<GmmPair>(std::move(data), m.components,
                                     m.prior_mean, m.component_sd, m.prior_sd,
                                     m.proportion_mh);
  }
  throw ConfigError("unknown model id: " + m.id);
}

}  // namespace ptpath
