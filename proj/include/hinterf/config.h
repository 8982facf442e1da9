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

#ifndef HINTERF_CONFIG_H
#define HINTERF_CONFIG_H

// JSON experiment configuration. Mode and source indices are 1-based in the
// file and 0-based once parsed. Wavelengths and bandwidths carry an `_nm`
// suffix; everything else is SI.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hinterf/experiment.h"
#include "hinterf/spectral.h"

namespace hinterf {

inline constexpr int kSchemaVersion = 1;

/// Thrown when a configuration fails validation; what() lists every error.
class ConfigError : public std::invalid_argument {
   public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string> &errors() const { return errors_; }

   private:
    std::vector<std::string> errors_;
};

struct ScanConfig {
    std::size_t points = 41;
    double span_coherence_times = 3.0;
    std::size_t delayed_source = 0;
    std::size_t landscape_source1 = 1;
    std::size_t landscape_source2 = 2;
};

struct UncertaintyConfig {
    ParameterUncertainty sigma;
    std::size_t samples = 1000;
};

struct CalibrationInput {
    std::optional<double> g2;
    std::optional<double> eta_signal;
    std::optional<double> coincidences;
    std::optional<double> partner_singles;
};

struct JsaConfig {
    PumpSpec pump;
    GridSpec grid;
    JsaOptions options;
    SellmeierModel sellmeier = SellmeierModel::fused_silica();
    double birefringence = 1.25e-4;
    std::optional<FilterWindow> signal_filter;
    std::optional<FilterWindow> idler_filter;
    std::vector<double> scan_bandwidths;  ///< m
    std::optional<std::string> measured_spectrum;  ///< CSV path, relative to the config
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::optional<ExperimentModel> model;
    std::vector<OccupationPattern> patterns;
    ScanConfig scan;
    UncertaintyConfig uncertainties;
    ClassicalOptions classical;
    std::uint64_t seed = 1;
    std::optional<JsaConfig> jsa;
    CalibrationInput calibration;
    std::optional<std::string> output_dir;
};

/// Schema and physical-range errors; empty when the document is valid.
std::vector<std::string> validate_config(const nlohmann::json &doc, const std::string &base_dir = ".");

/// Parses a validated document. Throws ConfigError listing every problem.
ExperimentConfig parse_config(const nlohmann::json &doc, const std::string &base_dir = ".");

/// Reads and parses a file. Throws std::runtime_error if it cannot be read
/// and ConfigError if it does not validate.
nlohmann::json read_json_file(const std::string &path);
ExperimentConfig load_config(const std::string &path);

}  // namespace hinterf

#endif
