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

#include "hinterf/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hinterf {

double round_output(double x) {
    if (!std::isfinite(x) || x == 0.0) {
        return x == 0.0 ? 0.0 : x;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", kOutputDigits, x);
    return std::strtod(buf, nullptr);
}

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto result = std::to_chars(buf, buf + sizeof(buf), round_output(x));
    return std::string(buf, result.ptr);
}

nlohmann::json rounded(const nlohmann::json &value) {
    if (value.is_number_float()) {
        double d = value.get<double>();
        if (!std::isfinite(d)) {
            return nullptr;
        }
        return round_output(d);
    }
    if (value.is_array()) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto &v : value) {
            out.push_back(rounded(v));
        }
        return out;
    }
    if (value.is_object()) {
        nlohmann::json out = nlohmann::json::object();
        for (const auto &[k, v] : value.items()) {
            out[k] = rounded(v);
        }
        return out;
    }
    return value;
}

std::string dump_json(const nlohmann::json &value) { return rounded(value).dump(2) + "\n"; }

std::string csv_text(const std::vector<std::string> &header, const std::vector<std::vector<double>> &rows) {
    std::string out;
    for (std::size_t k = 0; k < header.size(); ++k) {
        out += (k ? "," : "") + header[k];
    }
    out += "\n";
    for (const auto &row : rows) {
        if (row.size() != header.size()) {
            throw std::invalid_argument("csv_text: row width differs from the header");
        }
        for (std::size_t k = 0; k < row.size(); ++k) {
            out += (k ? "," : "") + format_number(row[k]);
        }
        out += "\n";
    }
    return out;
}

void write_text_file(const std::string &path, const std::string &text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

}  // namespace hinterf
