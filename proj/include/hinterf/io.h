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

#ifndef HINTERF_IO_H
#define HINTERF_IO_H

// Output writers. Every float leaves the program rounded to 12 significant
// digits so identical runs produce identical files.

#include <string>
#include <vector>

#include <json.hpp>

namespace hinterf {

inline constexpr int kOutputDigits = 12;

/// x rounded to kOutputDigits significant digits.
double round_output(double x);

/// Shortest text that reads back as round_output(x).
std::string format_number(double x);

/// Copy of `value` with every floating-point number passed through round_output.
nlohmann::json rounded(const nlohmann::json &value);

/// Pretty-printed JSON of rounded(value), newline terminated.
std::string dump_json(const nlohmann::json &value);

/// Header row then one row per entry; cells written with format_number.
std::string csv_text(const std::vector<std::string> &header, const std::vector<std::vector<double>> &rows);

/// Writes text to a file, creating parent directories. Throws on failure.
void write_text_file(const std::string &path, const std::string &text);

}  // namespace hinterf

#endif
