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


#include "commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "hinterf/config.h"
#include "hinterf/errors.h"
#include "hinterf/experiment.h"
#include "hinterf/io.h"
#include "hinterf/oracle.h"
#include "hinterf/source.h"
#include "hinterf/spectral.h"

namespace hinterf::cli {

using nlohmann::json;

namespace {

std::string label(const OccupationPattern &p) {
    bool small = std::all_of(p.counts.begin(), p.counts.end(), [](int c) { return c < 10; });
    std::string out;
    for (std::size_t k = 0; k < p.counts.size(); ++k) {
        if (k && !small) {
            out += "-";
        }
        out += std::to_string(p.counts[k]);
    }
    return out;
}

struct Context {
    ExperimentConfig config;
    std::string out_dir = ".";
};

Context load(const CommandOptions &opt, bool required) {
    Context ctx;
    if (!opt.config.empty()) {
        ctx.config = load_config(opt.config);
    } else if (required) {
        throw std::invalid_argument("--config is required for this command");
    }
    if (opt.seed) {
        ctx.config.seed = *opt.seed;
        ctx.config.classical.seed = *opt.seed;
    }
    if (opt.samples) {
        ctx.config.uncertainties.samples = *opt.samples;
    }
    if (opt.truncation_pairs) {
        if (!ctx.config.model) {
            throw std::invalid_argument("--truncation-pairs needs a config with sources");
        }
        if (*opt.truncation_pairs < 1) {
            throw std::invalid_argument("--truncation-pairs must be positive");
        }
        ctx.config.model->truncation.max_total_pairs = *opt.truncation_pairs;
        ctx.config.model->validate();
    }
    if (opt.out_dir) {
        ctx.out_dir = *opt.out_dir;
    } else if (ctx.config.output_dir) {
        ctx.out_dir = *ctx.config.output_dir;
    }
    if (opt.format != "csv" && opt.format != "json") {
        throw std::invalid_argument("--format must be csv or json");
    }
    return ctx;
}

const ExperimentModel &require_model(const Context &ctx) {
    if (!ctx.config.model) {
        throw std::invalid_argument("config has no sources section");
    }
    return *ctx.config.model;
}

std::string path_in(const Context &ctx, const std::string &name) {
    return (std::filesystem::path(ctx.out_dir) / name).string();
}

// Writes the summary file and echoes it on stdout.
void emit_summary(const Context &ctx, const std::string &name, const json &summary, std::ostream &out) {
    std::string text = dump_json(summary);
    write_text_file(path_in(ctx, name), text);
    out << text;
}

json counts_json(const OccupationPattern &p) { return json(p.counts); }

// Probabilities are clamped only here, where they leave the program.
double reported(double p) { return std::clamp(p, 0.0, 1.0); }

double omega_width_to_nm(double center_omega, double width_omega) {
    double lambda = omega_to_wavelength(center_omega);
    return width_omega * lambda * lambda / (2.0 * std::numbers::pi * kSpeedOfLight) * 1e9;
}

int cmd_landscape(const CommandOptions &opt, std::ostream &out) {
    Context ctx = load(opt, true);
    const ExperimentModel &m = require_model(ctx);
    const auto &scan = ctx.config.scan;
    if (scan.landscape_source1 >= m.sources.size() || scan.landscape_source2 >= m.sources.size()) {
        throw std::invalid_argument("landscape sources outside the source list");
    }
    auto grid = default_delay_grid(m.spectrum, scan.points, scan.span_coherence_times);
    LandscapeSpec spec{grid, grid, scan.landscape_source1, scan.landscape_source2};
    Landscape l = landscape(m, spec, ctx.config.patterns, opt.threads);
    for (auto &surface : l.values) {
        std::transform(surface.begin(), surface.end(), surface.begin(), reported);
    }

    if (opt.format == "csv") {
        std::vector<std::string> header{"tau1_s", "tau2_s"};
        for (const auto &p : l.patterns) {
            header.push_back("P_" + label(p));
        }
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < l.tau1.size(); ++i) {
            for (std::size_t j = 0; j < l.tau2.size(); ++j) {
                std::vector<double> row{l.tau1[i], l.tau2[j]};
                for (const auto &v : l.values) {
                    row.push_back(v[i * l.tau2.size() + j]);
                }
                rows.push_back(std::move(row));
            }
        }
        write_text_file(path_in(ctx, "landscape.csv"), csv_text(header, rows));
    } else {
        json surface{{"tau1_s", l.tau1}, {"tau2_s", l.tau2}, {"values", json::object()}};
        for (std::size_t p = 0; p < l.patterns.size(); ++p) {
            surface["values"]["P_" + label(l.patterns[p])] = l.values[p];
        }
        write_text_file(path_in(ctx, "landscape.json"), dump_json(surface));
    }

    json summary{{"command", "landscape"},
                 {"sources", {scan.landscape_source1 + 1, scan.landscape_source2 + 1}},
                 {"points_per_axis", grid.size()},
                 {"coherence_time_s", coherence_time(m.spectrum)},
                 {"patterns", json::array()}};
    for (std::size_t p = 0; p < l.patterns.size(); ++p) {
        auto [lo, hi] = std::minmax_element(l.values[p].begin(), l.values[p].end());
        summary["patterns"].push_back(
            {{"pattern", label(l.patterns[p])}, {"counts", counts_json(l.patterns[p])}, {"P_min", *lo}, {"P_max", *hi}});
    }
    emit_summary(ctx, "landscape_summary.json", summary, out);
    return 0;
}

int cmd_visibilities(const CommandOptions &opt, std::ostream &out) {
    Context ctx = load(opt, true);
    const ExperimentModel &m = require_model(ctx);
    const auto &cfg = ctx.config;
    const std::size_t delayed = cfg.scan.delayed_source;
    if (delayed >= m.sources.size()) {
        throw std::invalid_argument("delayed source outside the source list");
    }

    // Probability against the delay of one source, the others held at zero.
    auto grid = default_delay_grid(m.spectrum, cfg.scan.points, cfg.scan.span_coherence_times);
    OutcomeEvaluator evaluator = OutcomeEvaluator::for_patterns(m, cfg.patterns);
    std::vector<std::vector<double>> scan_rows;
    for (double tau : grid) {
        std::vector<double> delays(m.sources.size(), 0.0);
        delays[delayed] = tau;
        std::vector<double> row{tau};
        for (double p : evaluator.probabilities(coherence_from_delays(m.spectrum, delays))) {
            row.push_back(reported(p));
        }
        scan_rows.push_back(std::move(row));
    }
    if (opt.format == "csv") {
        std::vector<std::string> header{"tau_s"};
        for (const auto &p : cfg.patterns) {
            header.push_back("P_" + label(p));
        }
        write_text_file(path_in(ctx, "visibility_scan.csv"), csv_text(header, scan_rows));
    } else {
        json surface{{"tau_s", grid}, {"values", json::object()}};
        for (std::size_t p = 0; p < cfg.patterns.size(); ++p) {
            std::vector<double> column;
            for (const auto &row : scan_rows) {
                column.push_back(row[p + 1]);
            }
            surface["values"]["P_" + label(cfg.patterns[p])] = column;
        }
        write_text_file(path_in(ctx, "visibility_scan.json"), dump_json(surface));
    }

    auto point = visibilities(m, cfg.patterns, delayed);
    MonteCarloSummary mc = monte_carlo_visibility(
        m, cfg.patterns, cfg.uncertainties.sigma, cfg.uncertainties.samples, cfg.seed, delayed, opt.threads);

    json summary{{"command", "visibilities"},
                 {"seed", cfg.seed},
                 {"samples", cfg.uncertainties.samples},
                 {"delayed_source", delayed + 1},
                 {"truncation", {{"max_total_pairs", m.truncation.max_total_pairs},
                                 {"max_total_photons", m.truncation.max_total_photons}}},
                 {"patterns", json::array()}};
    for (std::size_t p = 0; p < cfg.patterns.size(); ++p) {
        const auto &pattern = cfg.patterns[p];
        double v_classical = classical_bound(m, pattern, delayed, cfg.classical);
        Attribution a = attribute_visibility_loss(m, pattern, delayed);
        summary["patterns"].push_back({{"pattern", label(pattern)},
                                       {"counts", counts_json(pattern)},
                                       {"P_zero", reported(point[p].p_zero)},
                                       {"P_infinity", reported(point[p].p_infinity)},
                                       {"V", point[p].visibility},
                                       {"V_classical", v_classical},
                                       {"V_model_mean", mc.mean[p]},
                                       {"V_model_std", mc.stddev[p]},
                                       {"multi_pair_fraction", a.multi_pair_fraction},
                                       {"distinguishability_fraction", a.distinguishability_fraction}});
    }
    emit_summary(ctx, "visibilities.json", summary, out);
    return 0;
}

int cmd_classical_bounds(const CommandOptions &opt, std::ostream &out) {
    Context ctx = load(opt, true);
    const ExperimentModel &m = require_model(ctx);
    const auto &cfg = ctx.config;
    auto point = visibilities(m, cfg.patterns, cfg.scan.delayed_source);
    json summary{{"command", "classical-bounds"},
                 {"method", cfg.classical.method == PhaseAverage::kQuadrature ? "quadrature" : "monte_carlo"},
                 {"patterns", json::array()}};
    for (std::size_t p = 0; p < cfg.patterns.size(); ++p) {
        double v_classical = classical_bound(m, cfg.patterns[p], cfg.scan.delayed_source, cfg.classical);
        summary["patterns"].push_back({{"pattern", label(cfg.patterns[p])},
                                       {"counts", counts_json(cfg.patterns[p])},
                                       {"V", point[p].visibility},
                                       {"V_classical", v_classical},
                                       {"exceeds_classical", std::abs(point[p].visibility) > std::abs(v_classical)}});
    }
    emit_summary(ctx, "classical_bounds.json", summary, out);
    return 0;
}

int cmd_attribute(const CommandOptions &opt, std::ostream &out) {
    Context ctx = load(opt, true);
    const ExperimentModel &m = require_model(ctx);
    json summary{{"command", "attribute"}, {"patterns", json::array()}};
    for (const auto &pattern : ctx.config.patterns) {
        Attribution a = attribute_visibility_loss(m, pattern, ctx.config.scan.delayed_source);
        summary["patterns"].push_back({{"pattern", label(pattern)},
                                       {"counts", counts_json(pattern)},
                                       {"V_ideal", a.v_ideal},
                                       {"V_pairs", a.v_pairs},
                                       {"V_full", a.v_full},
                                       {"multi_pair_fraction", a.multi_pair_fraction},
                                       {"distinguishability_fraction", a.distinguishability_fraction}});
    }
    emit_summary(ctx, "attribution.json", summary, out);
    return 0;
}

void write_matrix(const Context &ctx, const std::string &stem, const std::string &format,
                  const JointSpectralAmplitude &jsa) {
    std::vector<double> signal_nm;
    std::vector<double> idler_nm;
    for (double w : jsa.grid.signal) {
        signal_nm.push_back(omega_to_wavelength(w) * 1e9);
    }
    for (double w : jsa.grid.idler) {
        idler_nm.push_back(omega_to_wavelength(w) * 1e9);
    }
    if (format == "csv") {
        std::vector<std::string> header{"signal_nm\\idler_nm"};
        for (double v : idler_nm) {
            header.push_back(format_number(v));
        }
        std::vector<std::vector<double>> rows;
        for (std::size_t a = 0; a < signal_nm.size(); ++a) {
            std::vector<double> row{signal_nm[a]};
            for (std::size_t b = 0; b < idler_nm.size(); ++b) {
                row.push_back(std::abs(jsa.amplitude(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))));
            }
            rows.push_back(std::move(row));
        }
        write_text_file(path_in(ctx, stem + ".csv"), csv_text(header, rows));
    } else {
        json magnitude = json::array();
        for (Eigen::Index a = 0; a < jsa.amplitude.rows(); ++a) {
            std::vector<double> row;
            for (Eigen::Index b = 0; b < jsa.amplitude.cols(); ++b) {
                row.push_back(std::abs(jsa.amplitude(a, b)));
            }
            magnitude.push_back(row);
        }
        write_text_file(path_in(ctx, stem + ".json"),
                        dump_json({{"signal_nm", signal_nm}, {"idler_nm", idler_nm}, {"magnitude", magnitude}}));
    }
}

void write_marginal(const Context &ctx, const std::string &name, std::span<const double> axis,
                    const std::vector<double> &values) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < axis.size(); ++k) {
        rows.push_back({omega_to_wavelength(axis[k]) * 1e9, values[k]});
    }
    write_text_file(path_in(ctx, name), csv_text({"wavelength_nm", "intensity"}, rows));
}

int cmd_jsa(const CommandOptions &opt, std::ostream &out) {
    Context ctx = load(opt, false);
    JsaConfig j = ctx.config.jsa.value_or(JsaConfig{});
    DispersionModel dispersion = calibrated_dispersion(j.sellmeier, j.birefringence, j.pump, j.grid);
    FrequencyGrid grid = make_grid(j.pump, j.grid);
    JointSpectralAmplitude jsa = build_jsa(j.pump, dispersion, grid, j.options);
    write_matrix(ctx, "jsa_magnitude", opt.format, jsa);

    JointSpectralAmplitude heralded = jsa;
    json summary{{"command", "jsa"},
                 {"pump_center_nm", j.pump.center_wavelength * 1e9},
                 {"pump_fwhm_nm", j.pump.bandwidth * 1e9},
                 {"signal_center_nm", j.grid.signal_center_wavelength * 1e9},
                 {"idler_center_nm", omega_to_wavelength(idler_center_omega(j.pump, j.grid.signal_center_wavelength)) * 1e9},
                 {"pump_wavenumber_offset_per_m", dispersion.pump_offset()},
                 {"purity_unfiltered", schmidt_purity(jsa)},
                 {"trace_purity_unfiltered", trace_purity(jsa)}};
    if (j.signal_filter || j.idler_filter) {
        FilteredJsa filtered = apply_filters(jsa, j.signal_filter, j.idler_filter);
        heralded = filtered.jsa;
        summary["purity_filtered"] = schmidt_purity(filtered.jsa);
        summary["trace_purity_filtered"] = trace_purity(filtered.jsa);
        summary["transmission"] = filtered.transmission;
        write_matrix(ctx, "jsa_filtered_magnitude", opt.format, filtered.jsa);
    }
    auto signal = marginal_spectrum(heralded, Arm::kSignal);
    auto idler = marginal_spectrum(heralded, Arm::kIdler);
    write_marginal(ctx, "marginal_signal.csv", grid.signal, signal);
    write_marginal(ctx, "marginal_idler.csv", grid.idler, idler);
    double ws = wavelength_to_omega(j.grid.signal_center_wavelength);
    double wi = idler_center_omega(j.pump, j.grid.signal_center_wavelength);
    summary["signal_fwhm_nm"] = omega_width_to_nm(ws, sampled_fwhm(grid.signal, signal));
    summary["idler_fwhm_nm"] = omega_width_to_nm(wi, sampled_fwhm(grid.idler, idler));

    if (!j.scan_bandwidths.empty()) {
        auto scan = factorability_scan(j.scan_bandwidths, j.pump, dispersion, j.grid, j.options, opt.threads);
        json points = json::array();
        std::vector<std::vector<double>> rows;
        const ScanPoint *best = &scan.front();
        for (const auto &p : scan) {
            points.push_back({{"pump_fwhm_nm", p.bandwidth * 1e9}, {"purity", p.purity}});
            rows.push_back({p.bandwidth * 1e9, p.purity});
            if (p.purity > best->purity) {
                best = &p;
            }
        }
        summary["scan"] = points;
        summary["scan_optimum_nm"] = best->bandwidth * 1e9;
        write_text_file(path_in(ctx, "factorability_scan.csv"), csv_text({"pump_fwhm_nm", "purity"}, rows));
    }
    if (j.measured_spectrum) {
        auto measured = read_spectrum_csv(*j.measured_spectrum, grid.idler);
        summary["measured_overlap"] = spectral_overlap(measured, idler);
    }
    emit_summary(ctx, "jsa_summary.json", summary, out);
    return 0;
}

int cmd_enumerate_inputs(const CommandOptions &opt, std::ostream &out) {
    Context ctx = load(opt, true);
    const ExperimentModel &m = require_model(ctx);
    auto terms = enumerate_inputs(m.sources, m.truncation);
    json list = json::array();
    double total = 0.0;
    for (const auto &t : terms) {
        list.push_back({{"occupation", t.occupation.counts}, {"weight", t.weight}, {"order", t.order}});
        total += t.weight;
    }
    json summary{{"command", "enumerate-inputs"},
                 {"truncation", {{"max_total_pairs", m.truncation.max_total_pairs},
                                 {"max_total_photons", m.truncation.max_total_photons}}},
                 {"count", terms.size()},
                 {"total_weight", total},
                 {"terms", list}};
    emit_summary(ctx, "enumerate_inputs.json", summary, out);
    return 0;
}

int cmd_calibrate(const CommandOptions &opt, std::ostream &out) {
    Context ctx = load(opt, false);
    const auto &cal = ctx.config.calibration;
    std::optional<double> g2 = opt.g2 ? opt.g2 : cal.g2;
    std::optional<double> eta = opt.eta_signal ? opt.eta_signal : cal.eta_signal;
    if (!g2 || !eta) {
        throw std::invalid_argument("calibrate needs g2 and eta_signal (flags or calibration section)");
    }
    json summary{{"command", "calibrate"}, {"g2", *g2}, {"eta_signal", *eta}, {"lambda_sq", lambda_sq_from_g2(*g2, *eta)}};
    if (cal.coincidences && cal.partner_singles) {
        summary["klyshko_efficiency"] = klyshko_efficiency(*cal.coincidences, *cal.partner_singles);
    }
    emit_summary(ctx, "calibration.json", summary, out);
    return 0;
}

json suite_json(const oracle::SuiteReport &r) {
    return {{"cases", r.cases}, {"max_deviation", r.max_deviation}, {"tolerance", r.tolerance}, {"passed", r.passed()}};
}

int cmd_oracle_check(const CommandOptions &opt, std::ostream &out) {
    Context ctx = load(opt, false);
    const std::uint64_t seed = opt.seed.value_or(ctx.config.seed);
    auto engine = oracle::engine_equivalence_suite(opt.oracle_cases, seed, opt.threads);
    auto loss = oracle::loss_equivalence_suite(opt.loss_cases, seed ^ 0x9e3779b97f4a7c15ULL, opt.threads);

    // Closed-form tritter values for three identical photons.
    UnitaryNetwork tritter = make_tritter();
    OccupationPattern ones(std::vector<int>{1, 1, 1});
    std::vector<PhotonMixture> identical(3, PhotonMixture::pure(InternalState(CVector::Ones(1))));
    struct Fixed {
        const char *name;
        OccupationPattern s;
        double expected;
    };
    std::vector<Fixed> fixed{{"tritter_111_to_111", ones, 1.0 / 3.0},
                             {"tritter_111_to_210", OccupationPattern(std::vector<int>{2, 1, 0}), 0.0},
                             {"tritter_111_to_300", OccupationPattern(std::vector<int>{3, 0, 0}), 2.0 / 9.0}};
    bool passed = engine.passed() && loss.passed();
    json fixed_json = json::array();
    for (const auto &f : fixed) {
        double o = oracle::oracle_event_probability(tritter, ones, f.s, identical);
        double e = mixed_event_probability(tritter, ones, f.s, identical);
        double dev = std::max(std::abs(o - f.expected), std::abs(e - f.expected));
        passed = passed && dev < 1e-12;
        fixed_json.push_back({{"name", f.name}, {"expected", f.expected}, {"oracle", reported(o)}, {"engine", reported(e)}, {"deviation", dev}});
    }
    json summary{{"command", "oracle-check"},
                 {"seed", seed},
                 {"engine_equivalence", suite_json(engine)},
                 {"loss_equivalence", suite_json(loss)},
                 {"fixed", fixed_json},
                 {"passed", passed}};
    emit_summary(ctx, "oracle_check.json", summary, out);
    return passed ? 0 : 2;
}

int cmd_validate(const CommandOptions &opt, std::ostream &out) {
    if (opt.config.empty()) {
        throw std::invalid_argument("--config is required for validate");
    }
    json doc = read_json_file(opt.config);
    auto dir = std::filesystem::path(opt.config).parent_path();
    auto errors = validate_config(doc, dir.empty() ? "." : dir.string());
    out << dump_json({{"config", opt.config}, {"valid", errors.empty()}, {"errors", errors}});
    return errors.empty() ? 0 : 1;
}

}  // namespace

int run_command(const std::string &name, const CommandOptions &options, std::ostream &out, std::ostream &err) {
    static const std::map<std::string, std::function<int(const CommandOptions &, std::ostream &)>> commands{
        {"landscape", cmd_landscape},
        {"visibilities", cmd_visibilities},
        {"classical-bounds", cmd_classical_bounds},
        {"attribute", cmd_attribute},
        {"jsa", cmd_jsa},
        {"enumerate-inputs", cmd_enumerate_inputs},
        {"calibrate", cmd_calibrate},
        {"oracle-check", cmd_oracle_check},
        {"validate", cmd_validate},
    };
    auto it = commands.find(name);
    if (it == commands.end()) {
        err << "unknown command: " << name << "\n";
        return 1;
    }
    try {
        return it->second(options, out);
    } catch (const NumericalError &e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError &e) {
        err << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hinterf::cli
