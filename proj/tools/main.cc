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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.h"

int main(int argc, char **argv) {
    CLI::App app{"Multi-photon interference simulator for heralded sources"};
    app.require_subcommand(1);
    app.fallthrough();

    hinterf::cli::CommandOptions opt;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    int truncation_pairs = 0;
    double g2 = 0.0;
    double eta_signal = 0.0;

    app.add_option("--config", opt.config, "Experiment config (JSON)");
    auto *out_opt = app.add_option("--out-dir", out_dir, "Directory for output files");
    auto *seed_opt = app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--threads", opt.threads, "Worker threads (0 = available parallelism)");
    auto *trunc_opt = app.add_option("--truncation-pairs", truncation_pairs, "Override max_total_pairs");
    app.add_option("--format", opt.format, "Surface format")->check(CLI::IsMember({"csv", "json"}));
    auto *samples_opt = app.add_option("--samples", samples, "Override the Monte-Carlo sample count");
    app.add_option("--cases", opt.oracle_cases, "oracle-check: randomized engine cases");
    app.add_option("--loss-cases", opt.loss_cases, "oracle-check: randomized loss cases");
    auto *g2_opt = app.add_option("--g2", g2, "calibrate: heralded g2(0)");
    auto *eta_opt = app.add_option("--eta-signal", eta_signal, "calibrate: herald-arm efficiency");

    const char *names[][2] = {
        {"landscape", "Two-delay probability surfaces"},
        {"visibilities", "Visibilities, classical bounds, attribution and uncertainty"},
        {"classical-bounds", "Phase-averaged coherent-state visibility bounds"},
        {"attribute", "Split visibility loss into multi-pair and distinguishability parts"},
        {"jsa", "Joint spectral amplitude, purity and factorability scan"},
        {"enumerate-inputs", "List truncated multi-source input terms"},
        {"calibrate", "Squeezing from heralded g2"},
        {"oracle-check", "Compare the permanent engine with brute-force Fock evolution"},
        {"validate", "Check a config without running it"},
    };
    for (const auto &n : names) {
        app.add_subcommand(n[0], n[1]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (out_opt->count()) {
        opt.out_dir = out_dir;
    }
    if (seed_opt->count()) {
        opt.seed = seed;
    }
    if (trunc_opt->count()) {
        opt.truncation_pairs = truncation_pairs;
    }
    if (samples_opt->count()) {
        opt.samples = samples;
    }
    if (g2_opt->count()) {
        opt.g2 = g2;
    }
    if (eta_opt->count()) {
        opt.eta_signal = eta_signal;
    }
    std::string command = app.get_subcommands().front()->get_name();
    return hinterf::cli::run_command(command, opt, std::cout, std::cerr);
}
