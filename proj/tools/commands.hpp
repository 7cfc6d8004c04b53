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

#ifndef PTPATH_TOOLS_COMMANDS_HPP
#define PTPATH_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ptpath/config.hpp"

namespace ptpath::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct Invocation {
  RunConfig config;
  /// Directory of the config file; relative data paths resolve against it.
  std::filesystem::path base_dir;
  std::filesystem::path out_dir;
  std::vector<std::string> comparators;
};

/// Parses "a..b" or a single integer into an inclusive seed range.
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

int cmd_run(const Invocation& inv);
int cmd_tune(const Invocation& inv);
int cmd_snr(const Invocation& inv);
int cmd_oracle(const Invocation& inv);
int cmd_benchmark(const Invocation& inv);

int main(int argc, char** argv);

}  // namespace ptpath::cli

#endif  // PTPATH_TOOLS_COMMANDS_HPP
