// Copyright 2026 The hinterf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef HINTERF_TOOLS_COMMANDS_H
#define HINTERF_TOOLS_COMMANDS_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace hinterf::cli {

struct CommandOptions {
    std::string config;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 0;
    std::optional<int> truncation_pairs;
    std::string format = "csv";
    std::optional<std::size_t> samples;  ///< Monte-Carlo sample override
    std::size_t oracle_cases = 200;
    std::size_t loss_cases = 50;
    std::optional<double> g2;
    std::optional<double> eta_signal;
};

/// Exit status: 0 success, 1 validation error, 2 numerical failure.
int run_command(const std::string &name, const CommandOptions &options, std::ostream &out, std::ostream &err);

}  // namespace hinterf::cli

#endif
