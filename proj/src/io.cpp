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

#include "ptpath/io.hpp"

#include <unistd.h>

#include <charconv>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "ptpath/errors.hpp"

namespace ptpath {

namespace {

using nlohmann::json;

constexpr int kSnapshotVersion = 1;

json parse_snapshot(std::string_view text, std::string_view format) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != format) {
    throw ConfigError("expected a " + std::string(format) + " document");
  }
  if (doc.value("version", 0) != kSnapshotVersion) {
    throw ConfigError("unsupported " + std::string(format) + " version");
  }
  return doc;
}

}  // namespace

std::string knots_to_json(const SplineKnots& knots) {
  json arr = json::array();
  for (const AnnealingCoordinates& k : knots.knots()) {
    arr.push_back({k.eta0, k.eta1});
  }
  json doc = {{"format", "ptpath.knots"},
              {"version", kSnapshotVersion},
              {"knots", arr}};
  return doc.dump(2) + "\n";
}

SplineKnots knots_from_json(std::string_view text) {
  const json doc = parse_snapshot(text, "ptpath.knots");
  std::vector<AnnealingCoordinates> knots;
  try {
    for (const json& k : doc.at("knots")) {
      if (!k.is_array() || k.size() != 2) {
        throw ConfigError("each knot must be a [eta0, eta1] pair");
      }
      knots.push_back({k[0].get<double>(), k[1].get<double>()});
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed knots: ") + e.what());
  }
  return SplineKnots(std::move(knots));
}

std::string schedule_to_json(const Schedule& schedule) {
  json doc = {{"format", "ptpath.schedule"},
              {"version", kSnapshotVersion},
              {"points", schedule.points()}};
  return doc.dump(2) + "\n";
}

Schedule schedule_from_json(std::string_view text) {
  const json doc = parse_snapshot(text, "ptpath.schedule");
  try {
    return Schedule(doc.at("points").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed schedule: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::string_view schema,
                     std::initializer_list<std::string_view> columns) {
  out_ << "# ptpath " << schema << " v" << kCsvSchemaVersion << "\n";
  bool first = true;
  for (std::string_view c : columns) {
    if (!first) out_ << ',';
    out_ << c;
    first = false;
  }
  out_ << "\n";
}

void CsvWriter::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::field(std::string_view v) {
  separator();
  if (v.find_first_of(",\"\n") == std::string_view::npos) {
    out_ << v;
    return *this;
  }
  out_ << '"';
  for (char c : v) {
    if (c == '"') out_ << '"';
    out_ << c;
  }
  out_ << '"';
  return *this;
}

CsvWriter& CsvWriter::field(double v) {
  separator();
  out_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::field(long long v) {
  separator();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::field(unsigned long long v) {
  separator();
  out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  out_ << "\n";
  row_started_ = false;
}

void CsvWriter::save(const std::filesystem::path& path) const {
  write_file_atomic(path, out_.str());
}

}  // namespace ptpath
