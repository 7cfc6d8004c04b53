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

#ifndef PTPATH_IO_HPP
#define PTPATH_IO_HPP

#include <filesystem>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "ptpath/paths.hpp"
#include "ptpath/schedule.hpp"

namespace ptpath {

/// Column schema version written in every CSV header comment.
inline constexpr int kCsvSchemaVersion = 1;

std::string knots_to_json(const SplineKnots& knots);
SplineKnots knots_from_json(std::string_view text);

std::string schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// see either the old content or the complete new content.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Accumulates a CSV document whose first line is
/// "# ptpath <schema> v<version>".
class CsvWriter {
 public:
  CsvWriter(std::string_view schema, std::initializer_list<std::string_view> columns);

  /// Appends one field; strings containing ',', '"' or newlines are quoted.
  CsvWriter& field(std::string_view v);
  CsvWriter& field(double v);
  CsvWriter& field(long long v);
  CsvWriter& field(unsigned long long v);
  CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(std::size_t v) {
    return field(static_cast<unsigned long long>(v));
  }
  void end_row();

  std::string str() const { return out_.str(); }
  void save(const std::filesystem::path& path) const;

 private:
  void separator();

  std::ostringstream out_;
  bool row_started_ = false;
};

}  // namespace ptpath

#endif  // PTPATH_IO_HPP
