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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "ptpath/config.hpp"
#include "ptpath/errors.hpp"
#include "ptpath/io.hpp"

using namespace ptpath;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ptpath_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("io_config") {

TEST_CASE("knots JSON round trip is exact") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<AnnealingCoordinates> k{{1, 0}};
    double e0 = 1.0;
    double e1 = 0.0;
    for (int i = 0; i < 1 + trial % 6; ++i) {
      e0 *= u(gen);
      e1 += (1.0 - e1) * u(gen);
      k.push_back({e0, e1});
    }
    k.push_back({0, 1});
    const SplineKnots knots(k);
    CHECK(knots_from_json(knots_to_json(knots)) == knots);
  }
}

TEST_CASE("schedule JSON round trip is exact") {
  const Schedule s({0.0, 0.1 / 3.0, 0.2, 0.2, 0.7, 1.0});
  CHECK(schedule_from_json(schedule_to_json(s)) == s);
}

TEST_CASE("malformed snapshots raise ConfigError") {
  CHECK_THROWS_AS(knots_from_json("not json"), ConfigError);
  CHECK_THROWS_AS(knots_from_json(schedule_to_json(Schedule::uniform(2))),
                  ConfigError);
  CHECK_THROWS_AS(
      knots_from_json(R"({"format":"ptpath.knots","version":1,"knots":[[1,0],[0.5]]})"),
      ConfigError);
  CHECK_THROWS_AS(
      knots_from_json(R"({"format":"ptpath.knots","version":1,"knots":[[1,0],[0.2,0.5],[0.4,0.6],[0,1]]})"),
      ConstraintError);
  CHECK_THROWS_AS(
      schedule_from_json(R"({"format":"ptpath.schedule","version":1,"points":[0,0.6,0.5,1]})"),
      ConstraintError);
  CHECK_THROWS_AS(
      schedule_from_json(R"({"format":"ptpath.schedule","version":9,"points":[0,1]})"),
      ConfigError);
}

TEST_CASE("format_double round trips") {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(gen) * std::pow(10.0, i % 30 - 15);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("atomic write replaces content") {
  const fs::path dir = scratch_dir("atomic");
  const fs::path file = dir / "a.txt";
  write_file_atomic(file, "first");
  CHECK(read_text_file(file) == "first");
  write_file_atomic(file, "second");
  CHECK(read_text_file(file) == "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  CHECK_THROWS_AS(write_file_atomic(dir / "missing" / "b.txt", "x"), IoError);
  CHECK_THROWS_AS(read_text_file(dir / "nope.txt"), IoError);
}

TEST_CASE("csv writer header and quoting") {
  CsvWriter w("rounds", {"round", "label", "value"});
  w.field(1).field("a,b").field(0.25);
  w.end_row();
  w.field(2).field("say \"hi\"").field(-3.0);
  w.end_row();
  CHECK(w.str() ==
        "# ptpath rounds v1\n"
        "round,label,value\n"
        "1,\"a,b\",0.25\n"
        "2,\"say \"\"hi\"\"\",-3\n");
}

TEST_CASE("empty config takes defaults") {
  const RunConfig c = parse_config("");
  CHECK(c == RunConfig{});
  const TuningConfig t = c.tuning_config();
  CHECK(t.intervals == 50);
  CHECK(t.knots == 4);
  CHECK(t.rounds == 50);
  CHECK(t.sweeps_per_round == 300);
  CHECK(t.learning_rate == 0.2);
}

TEST_CASE("strict keys and types") {
  CHECK_THROWS_AS(parse_config("[bogus]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[tuning]\nNN = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[tuning]\nN = \"three\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nid = \"gaussian\"\na0 = 1.0\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nid = \"other\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[tuning]\nM = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[tuning\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[tuning]\nscheme = \"random\"\n"), ConfigError);
  try {
    parse_config("x = 1\n[tuning\n");
    FAIL("expected a syntax error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("emit then parse is the identity") {
  RunConfig a;
  a.model.id = "beta_binomial";
  a.model.kernel = "rwm";
  a.model.rwm_step = 0.003;
  a.tuning.N = 7;
  a.tuning.gamma = 0.05;
  a.tuning.seed = 123456789012ull;
  a.output.formats = {"csv"};
  a.snr.grid = {0.1, 1.0 / 3.0};
  CHECK(parse_config(emit_config(a)) == a);

  RunConfig g;
  g.model.id = "gmm";
  g.model.data = "galaxy";
  g.model.data_scale = 1e-3;
  g.path.kind = "linear";
  g.tuning.scheme = "reversible";
  CHECK(parse_config(emit_config(g)) == g);
  CHECK(parse_config(emit_config(RunConfig{})) == RunConfig{});
}

TEST_CASE("missing config file names the path") {
  try {
    load_config("/nonexistent/ptpath.toml");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/ptpath.toml") !=
          std::string::npos);
  }
}

TEST_CASE("make_model builds each model") {
  ModelConfig m;
  m.dimension = 3;
  auto g = make_model(m);
  CHECK(g->name() == "gaussian");
  CHECK(g->state_space().dimension == 3);

  m = ModelConfig{};
  m.id = "beta_binomial";
  CHECK(make_model(m)->name() == "beta_binomial");

  m = ModelConfig{};
  m.id = "gmm";
  m.simulated_size = 40;
  auto sim = make_model(m);
  CHECK(dynamic_cast<GmmPair&>(*sim).data().size() == 40);

  m.data = "galaxy";
  m.data_scale = 1e-3;
  auto galaxy = make_model(m);
  const auto data = dynamic_cast<GmmPair&>(*galaxy).data();
  REQUIRE(data.size() == 82);
  CHECK(data[0] == doctest::Approx(9.172));
}

TEST_CASE("relative data paths resolve against the base directory") {
  const fs::path dir = scratch_dir("data");
  write_file_atomic(dir / "obs.csv", "x\n1.5\n2.5\n3.5\n");
  ModelConfig m;
  m.id = "gmm";
  m.data = "obs.csv";
  auto model = make_model(m, dir);
  CHECK(dynamic_cast<GmmPair&>(*model).data().size() == 3);
  m.data = "absent.csv";
  CHECK_THROWS_AS(make_model(m, dir), IoError);
}

}  // TEST_SUITE
