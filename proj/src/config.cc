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

#include "hinterf/config.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

namespace hinterf {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<std::string> &errors) {
    std::string out = "invalid configuration";
    for (const auto &e : errors) {
        out += "\n  " + e;
    }
    return out;
}

std::string format_value(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

class Reader {
   public:
    std::vector<std::string> errors;

    void add(const std::string &path, const std::string &message) { errors.push_back(path + ": " + message); }

    // Checks the type and rejects keys outside `allowed`.
    bool object(const json &j, const std::string &path, std::initializer_list<const char *> allowed) {
        if (!j.is_object()) {
            add(path, "expected an object");
            return false;
        }
        for (const auto &[key, value] : j.items()) {
            bool known = false;
            for (const char *a : allowed) {
                known = known || key == a;
            }
            if (!known) {
                add(path.empty() ? key : path + "." + key, "unknown key");
            }
        }
        return true;
    }

    std::optional<double> number(const json &obj, const char *key, const std::string &path) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        const json &v = obj.at(key);
        if (!v.is_number()) {
            add(child(path, key), "expected a number");
            return std::nullopt;
        }
        double d = v.get<double>();
        if (!std::isfinite(d)) {
            add(child(path, key), "must be finite");
            return std::nullopt;
        }
        return d;
    }

    // Optional number restricted to [lo, hi]; falls back to `fallback`.
    double ranged(const json &obj, const char *key, const std::string &path, double fallback, double lo, double hi,
                  bool open_low = false, bool open_high = false) {
        auto v = number(obj, key, path);
        if (!v) {
            return fallback;
        }
        bool low_ok = open_low ? *v > lo : *v >= lo;
        bool high_ok = open_high ? *v < hi : *v <= hi;
        if (!low_ok || !high_ok) {
            add(child(path, key), format_value(*v) + " outside " + (open_low ? "(" : "[") + format_value(lo) + ", " +
                                     format_value(hi) + (open_high ? ")" : "]"));
            return fallback;
        }
        return *v;
    }

    double required(const json &obj, const char *key, const std::string &path, double lo, double hi,
                    bool open_low = false, bool open_high = false) {
        if (!obj.contains(key)) {
            add(child(path, key), "required");
            return lo;
        }
        return ranged(obj, key, path, lo, lo, hi, open_low, open_high);
    }

    std::optional<long long> integer(const json &obj, const char *key, const std::string &path, long long lo,
                                     long long hi) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        const json &v = obj.at(key);
        if (!v.is_number_integer()) {
            add(child(path, key), "expected an integer");
            return std::nullopt;
        }
        long long i = v.get<long long>();
        if (i < lo || i > hi) {
            add(child(path, key), std::to_string(i) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            return std::nullopt;
        }
        return i;
    }

    std::optional<bool> boolean(const json &obj, const char *key, const std::string &path) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        if (!obj.at(key).is_boolean()) {
            add(child(path, key), "expected a boolean");
            return std::nullopt;
        }
        return obj.at(key).get<bool>();
    }

    std::optional<std::string> string(const json &obj, const char *key, const std::string &path) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        if (!obj.at(key).is_string()) {
            add(child(path, key), "expected a string");
            return std::nullopt;
        }
        return obj.at(key).get<std::string>();
    }

    std::optional<std::vector<double>> numbers(const json &obj, const char *key, const std::string &path) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        const json &v = obj.at(key);
        if (!v.is_array()) {
            add(child(path, key), "expected an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                add(child(path, key) + "[" + std::to_string(i) + "]", "expected a number");
                return std::nullopt;
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    static std::string child(const std::string &path, const char *key) {
        return path.empty() ? std::string(key) : path + "." + key;
    }
};

double nm(double v) { return v * 1e-9; }

std::optional<UnitaryNetwork> parse_network(Reader &rd, const json &j) {
    if (j.is_string()) {
        auto name = j.get<std::string>();
        if (name == "tritter" || name == "tritter+resolver") {
            return make_tritter();
        }
        if (name == "splitter") {
            return make_balanced_splitter();
        }
        rd.add("network", "unknown network '" + name + "' (tritter, tritter+resolver, splitter or {\"matrix\": ...})");
        return std::nullopt;
    }
    if (!rd.object(j, "network", {"matrix"})) {
        return std::nullopt;
    }
    if (!j.contains("matrix") || !j.at("matrix").is_array() || j.at("matrix").empty()) {
        rd.add("network.matrix", "expected a square array of [re, im] pairs");
        return std::nullopt;
    }
    const json &rows = j.at("matrix");
    const auto n = static_cast<Eigen::Index>(rows.size());
    CMatrix u(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const json &row = rows[static_cast<std::size_t>(a)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            rd.add("network.matrix", "rows must have one entry per mode");
            return std::nullopt;
        }
        for (Eigen::Index b = 0; b < n; ++b) {
            const json &e = row[static_cast<std::size_t>(b)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                rd.add("network.matrix", "entries must be [re, im] pairs");
                return std::nullopt;
            }
            u(a, b) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    try {
        return UnitaryNetwork(u);
    } catch (const std::exception &e) {
        rd.add("network.matrix", e.what());
        return std::nullopt;
    }
}

std::optional<FilterWindow> parse_filter(Reader &rd, const json &j, const std::string &path) {
    if (!rd.object(j, path, {"center_nm", "width_nm", "shape", "order"})) {
        return std::nullopt;
    }
    FilterWindow f;
    f.center = nm(rd.required(j, "center_nm", path, 210.0, 3710.0));
    f.width = nm(rd.required(j, "width_nm", path, 0.0, 1e4, true));
    if (auto shape = rd.string(j, "shape", path)) {
        if (*shape == "rectangular") {
            f.shape = FilterShape::kRectangular;
        } else if (*shape == "super_gaussian") {
            f.shape = FilterShape::kSuperGaussian;
        } else {
            rd.add(path + ".shape", "expected rectangular or super_gaussian");
        }
    }
    if (auto order = rd.integer(j, "order", path, 2, 100)) {
        f.order = static_cast<int>(*order);
    }
    return f;
}

JsaConfig parse_jsa(Reader &rd, const json &j, const std::string &base_dir) {
    JsaConfig c;
    const std::string p = "jsa";
    if (!rd.object(j, p,
                   {"pump_center_nm", "pump_fwhm_nm", "signal_center_nm", "grid_points", "grid_span_fwhm", "length_m",
                    "convolution_points", "convolution_span", "birefringence", "sellmeier", "filters", "scan_nm",
                    "measured_spectrum"})) {
        return c;
    }
    c.pump.center_wavelength = nm(rd.ranged(j, "pump_center_nm", p, 736.0, 210.0, 3710.0));
    c.pump.bandwidth = nm(rd.ranged(j, "pump_fwhm_nm", p, 4.5, 0.0, 1e3, true));
    c.grid.signal_center_wavelength = nm(rd.ranged(j, "signal_center_nm", p, 670.0, 210.0, 3710.0));
    if (auto n = rd.integer(j, "grid_points", p, 8, 4096)) {
        c.grid.points = static_cast<std::size_t>(*n);
    }
    c.grid.span_fwhm = rd.ranged(j, "grid_span_fwhm", p, 6.0, 0.0, 100.0, true);
    c.options.length = rd.ranged(j, "length_m", p, 0.023, 0.0, 10.0, true);
    if (auto n = rd.integer(j, "convolution_points", p, 3, 100001)) {
        c.options.convolution_points = static_cast<std::size_t>(*n);
    }
    c.options.convolution_span = rd.ranged(j, "convolution_span", p, 8.0, 0.0, 50.0, true);
    c.birefringence = rd.ranged(j, "birefringence", p, 1.25e-4, -0.1, 0.1);
    if (j.contains("sellmeier")) {
        const json &s = j.at("sellmeier");
        const std::string sp = p + ".sellmeier";
        if (rd.object(s, sp, {"b", "c_um2", "min_nm", "max_nm"})) {
            auto b = rd.numbers(s, "b", sp);
            auto cc = rd.numbers(s, "c_um2", sp);
            if (!b || !cc || b->size() != 3 || cc->size() != 3) {
                rd.add(sp, "b and c_um2 must each hold three numbers");
            } else {
                for (std::size_t k = 0; k < 3; ++k) {
                    c.sellmeier.b[k] = (*b)[k];
                    c.sellmeier.c_um2[k] = (*cc)[k];
                }
            }
            c.sellmeier.min_wavelength = nm(rd.ranged(s, "min_nm", sp, 210.0, 1.0, 1e5, true));
            c.sellmeier.max_wavelength = nm(rd.ranged(s, "max_nm", sp, 3710.0, 1.0, 1e5, true));
        }
    }
    if (j.contains("filters")) {
        const json &f = j.at("filters");
        const std::string fp = p + ".filters";
        if (rd.object(f, fp, {"signal", "idler"})) {
            if (f.contains("signal")) {
                c.signal_filter = parse_filter(rd, f.at("signal"), fp + ".signal");
            }
            if (f.contains("idler")) {
                c.idler_filter = parse_filter(rd, f.at("idler"), fp + ".idler");
            }
        }
    }
    if (auto scan = rd.numbers(j, "scan_nm", p)) {
        for (std::size_t k = 0; k < scan->size(); ++k) {
            if (!((*scan)[k] > 0.0)) {
                rd.add(p + ".scan_nm[" + std::to_string(k) + "]", "bandwidth must be positive");
            }
            c.scan_bandwidths.push_back(nm((*scan)[k]));
        }
    }
    if (auto path = rd.string(j, "measured_spectrum", p)) {
        std::filesystem::path file(*path);
        if (file.is_relative()) {
            file = std::filesystem::path(base_dir) / file;
        }
        if (!std::filesystem::exists(file)) {
            rd.add(p + ".measured_spectrum", "file not found: " + file.string());
        }
        c.measured_spectrum = file.string();
    }
    return c;
}

std::optional<ExperimentModel> parse_model(Reader &rd, const json &doc) {
    ExperimentModel m;
    if (doc.contains("network")) {
        auto net = parse_network(rd, doc.at("network"));
        if (!net) {
            return std::nullopt;
        }
        m.network = *net;
    }

    const json &src = doc.at("sources");
    if (!src.is_array() || src.empty()) {
        rd.add("sources", "expected a non-empty array");
        return std::nullopt;
    }
    for (std::size_t k = 0; k < src.size(); ++k) {
        const std::string p = "sources[" + std::to_string(k) + "]";
        HeraldedSourceModel s;
        if (rd.object(src[k], p, {"lambda_sq", "eta_signal", "eta_idler"})) {
            s.lambda_sq = rd.required(src[k], "lambda_sq", p, 0.0, 1.0, false, true);
            s.eta_signal = rd.required(src[k], "eta_signal", p, 0.0, 1.0, true);
            s.eta_idler = rd.required(src[k], "eta_idler", p, 0.0, 1.0);
        }
        m.sources.push_back(s);
    }
    const std::size_t n_sources = m.sources.size();

    if (doc.contains("input_modes")) {
        const json &modes = doc.at("input_modes");
        if (!modes.is_array() || modes.size() != n_sources) {
            rd.add("input_modes", "expected one 1-based mode per source");
        } else {
            for (std::size_t k = 0; k < modes.size(); ++k) {
                if (!modes[k].is_number_integer() || modes[k].get<long long>() < 1 ||
                    modes[k].get<long long>() > static_cast<long long>(m.network.dim())) {
                    rd.add("input_modes[" + std::to_string(k) + "]", "mode outside the network");
                } else {
                    m.input_modes.push_back(static_cast<std::size_t>(modes[k].get<long long>() - 1));
                }
            }
        }
    }

    double purity = 1.0;
    std::vector<double> overlaps(n_sources > 0 ? n_sources - 1 : 0, 1.0);
    if (doc.contains("photons")) {
        const json &ph = doc.at("photons");
        if (rd.object(ph, "photons", {"purity", "overlaps"})) {
            purity = rd.ranged(ph, "purity", "photons", 1.0, 0.5, 1.0);
            if (auto ov = rd.numbers(ph, "overlaps", "photons")) {
                if (ov->size() != overlaps.size()) {
                    rd.add("photons.overlaps", "expected one overlap per source after the first");
                } else {
                    for (std::size_t k = 0; k < ov->size(); ++k) {
                        if (!((*ov)[k] >= 0.0 && (*ov)[k] <= 1.0)) {
                            rd.add("photons.overlaps[" + std::to_string(k) + "]", "outside [0, 1]");
                        } else {
                            overlaps[k] = (*ov)[k];
                        }
                    }
                }
            }
        }
    }
    for (auto &s : m.sources) {
        s.purity = purity;
    }

    // The named resolver network defaults its resolver to output mode 1.
    if (doc.contains("network") && doc.at("network") == "tritter+resolver") {
        m.detection.resolver_mode = 0;
    }
    if (doc.contains("detection")) {
        const json &d = doc.at("detection");
        if (rd.object(d, "detection", {"resolver_mode", "efficiencies", "binary"})) {
            if (d.contains("resolver_mode") && !d.at("resolver_mode").is_null()) {
                if (auto mode = rd.integer(d, "resolver_mode", "detection", 1,
                                           static_cast<long long>(m.network.dim()))) {
                    m.detection.resolver_mode = static_cast<std::size_t>(*mode - 1);
                }
            }
            if (auto eff = rd.numbers(d, "efficiencies", "detection")) {
                for (std::size_t k = 0; k < eff->size(); ++k) {
                    if (!((*eff)[k] >= 0.0 && (*eff)[k] <= 1.0)) {
                        rd.add("detection.efficiencies[" + std::to_string(k) + "]", "outside [0, 1]");
                    }
                }
                m.detection.efficiencies = *eff;
            }
            if (auto binary = rd.boolean(d, "binary", "detection")) {
                m.detection.binary = *binary;
            }
        }
    }

    if (doc.contains("truncation")) {
        const json &t = doc.at("truncation");
        if (rd.object(t, "truncation", {"max_total_pairs", "max_total_photons"})) {
            if (auto v = rd.integer(t, "max_total_pairs", "truncation", 1, 12)) {
                m.truncation.max_total_pairs = static_cast<int>(*v);
            }
            if (auto v = rd.integer(t, "max_total_photons", "truncation", 1, 6)) {
                m.truncation.max_total_photons = static_cast<int>(*v);
            }
        }
    }

    double center_nm = 817.0;
    double fwhm_nm = 5.5;
    std::size_t points = 401;
    if (doc.contains("spectrum")) {
        const json &s = doc.at("spectrum");
        if (rd.object(s, "spectrum", {"center_nm", "fwhm_nm", "points"})) {
            center_nm = rd.ranged(s, "center_nm", "spectrum", center_nm, 1.0, 1e5, true);
            fwhm_nm = rd.ranged(s, "fwhm_nm", "spectrum", fwhm_nm, 0.0, 1e4, true);
            if (auto v = rd.integer(s, "points", "spectrum", 3, 100001)) {
                points = static_cast<std::size_t>(*v);
            }
        }
    }

    if (!rd.errors.empty()) {
        return std::nullopt;
    }
    try {
        m.photons = angle_family(purity, overlaps);
        double omega = wavelength_to_omega(nm(center_nm));
        double width = wavelength_width_to_omega(nm(center_nm), nm(fwhm_nm));
        m.spectrum = gaussian_spectrum(omega, width / (2.0 * std::sqrt(2.0 * std::numbers::ln2)), points);
        m.validate();
        DetectorLayout layout(m.network, m.detection);
        (void)layout;
    } catch (const std::exception &e) {
        rd.add("model", e.what());
        return std::nullopt;
    }
    return m;
}

ExperimentConfig parse_all(Reader &rd, const json &doc, const std::string &base_dir) {
    ExperimentConfig c;
    if (!rd.object(doc, "",
                   {"schema_version", "description", "network", "sources", "input_modes", "photons", "detection",
                    "truncation", "spectrum", "patterns", "scan", "uncertainties", "classical", "seed", "jsa",
                    "calibration", "output"})) {
        return c;
    }
    if (!doc.contains("schema_version")) {
        rd.add("schema_version", "required");
    } else if (auto v = rd.integer(doc, "schema_version", "", kSchemaVersion, kSchemaVersion)) {
        c.schema_version = static_cast<int>(*v);
    }
    if (doc.contains("description") && !doc.at("description").is_string()) {
        rd.add("description", "expected a string");
    }

    if (doc.contains("sources")) {
        c.model = parse_model(rd, doc);
    } else {
        for (const char *key : {"network", "input_modes", "photons", "detection", "truncation", "spectrum", "patterns"}) {
            if (doc.contains(key)) {
                rd.add(key, "requires a sources array");
            }
        }
    }

    if (doc.contains("patterns")) {
        const json &p = doc.at("patterns");
        if (!p.is_array()) {
            rd.add("patterns", "expected an array of occupation arrays");
        } else {
            for (std::size_t k = 0; k < p.size(); ++k) {
                const std::string path = "patterns[" + std::to_string(k) + "]";
                std::vector<int> counts;
                bool ok = p[k].is_array();
                for (std::size_t x = 0; ok && x < p[k].size(); ++x) {
                    ok = p[k][x].is_number_integer() && p[k][x].get<int>() >= 0;
                    if (ok) {
                        counts.push_back(p[k][x].get<int>());
                    }
                }
                if (!ok) {
                    rd.add(path, "expected non-negative integers");
                    continue;
                }
                if (c.model && counts.size() != c.model->network.dim()) {
                    rd.add(path, "length differs from the network dimension");
                    continue;
                }
                c.patterns.emplace_back(counts);
            }
        }
    }
    if (c.model && c.patterns.empty() && !doc.contains("patterns")) {
        std::vector<int> ones(c.model->network.dim(), 0);
        for (std::size_t k = 0; k < c.model->sources.size(); ++k) {
            ones[k % ones.size()] += 1;
        }
        c.patterns.emplace_back(ones);
    }

    const std::size_t n_sources = c.model ? c.model->sources.size() : 0;
    if (doc.contains("scan")) {
        const json &s = doc.at("scan");
        if (rd.object(s, "scan", {"points", "span_coherence_times", "delayed_source", "landscape_sources"})) {
            if (auto v = rd.integer(s, "points", "scan", 2, 10001)) {
                c.scan.points = static_cast<std::size_t>(*v);
            }
            c.scan.span_coherence_times = rd.ranged(s, "span_coherence_times", "scan", 3.0, 0.0, 1e3, true);
            if (auto v = rd.integer(s, "delayed_source", "scan", 1, 64)) {
                c.scan.delayed_source = static_cast<std::size_t>(*v - 1);
            }
            if (s.contains("landscape_sources")) {
                const json &ls = s.at("landscape_sources");
                if (!ls.is_array() || ls.size() != 2 || !ls[0].is_number_integer() || !ls[1].is_number_integer() ||
                    ls[0].get<long long>() < 1 || ls[1].get<long long>() < 1 ||
                    ls[0].get<long long>() == ls[1].get<long long>()) {
                    rd.add("scan.landscape_sources", "expected two distinct 1-based source indices");
                } else {
                    c.scan.landscape_source1 = static_cast<std::size_t>(ls[0].get<long long>() - 1);
                    c.scan.landscape_source2 = static_cast<std::size_t>(ls[1].get<long long>() - 1);
                }
            }
        }
    }
    if (c.model) {
        if (c.scan.delayed_source >= n_sources) {
            rd.add("scan.delayed_source", "no such source");
        }
        if (doc.contains("scan") && doc.at("scan").contains("landscape_sources") &&
            (c.scan.landscape_source1 >= n_sources || c.scan.landscape_source2 >= n_sources)) {
            rd.add("scan.landscape_sources", "no such source");
        }
    }

    if (doc.contains("uncertainties")) {
        const json &u = doc.at("uncertainties");
        if (rd.object(u, "uncertainties", {"lambda_sq", "eta_signal", "eta_idler", "samples"})) {
            c.uncertainties.sigma.lambda_sq = rd.ranged(u, "lambda_sq", "uncertainties", 0.002, 0.0, 1.0);
            c.uncertainties.sigma.eta_signal = rd.ranged(u, "eta_signal", "uncertainties", 0.02, 0.0, 1.0);
            c.uncertainties.sigma.eta_idler = rd.ranged(u, "eta_idler", "uncertainties", 0.05, 0.0, 1.0);
            if (auto v = rd.integer(u, "samples", "uncertainties", 0, 10000000)) {
                c.uncertainties.samples = static_cast<std::size_t>(*v);
            }
        }
    }

    if (doc.contains("classical")) {
        const json &cl = doc.at("classical");
        if (rd.object(cl, "classical", {"method", "phase_points", "samples"})) {
            if (auto method = rd.string(cl, "method", "classical")) {
                if (*method == "quadrature") {
                    c.classical.method = PhaseAverage::kQuadrature;
                } else if (*method == "monte_carlo") {
                    c.classical.method = PhaseAverage::kMonteCarlo;
                } else {
                    rd.add("classical.method", "expected quadrature or monte_carlo");
                }
            }
            if (auto v = rd.integer(cl, "phase_points", "classical", 2, 4096)) {
                c.classical.phase_points = static_cast<std::size_t>(*v);
            }
            if (auto v = rd.integer(cl, "samples", "classical", 1, 100000000)) {
                c.classical.samples = static_cast<std::size_t>(*v);
            }
        }
    }

    if (doc.contains("seed")) {
        const json &s = doc.at("seed");
        if (!s.is_number_unsigned()) {
            rd.add("seed", "expected a non-negative integer");
        } else {
            c.seed = s.get<std::uint64_t>();
        }
    }
    c.classical.seed = c.seed;

    if (doc.contains("jsa")) {
        c.jsa = parse_jsa(rd, doc.at("jsa"), base_dir);
        if (rd.errors.empty()) {
            try {
                c.jsa->sellmeier.index(c.jsa->pump.center_wavelength);
                if (c.jsa->signal_filter) {
                    c.jsa->signal_filter->validate();
                }
                if (c.jsa->idler_filter) {
                    c.jsa->idler_filter->validate();
                }
            } catch (const std::exception &e) {
                rd.add("jsa", e.what());
            }
        }
    }

    if (doc.contains("calibration")) {
        const json &cal = doc.at("calibration");
        if (rd.object(cal, "calibration", {"g2", "eta_signal", "coincidences", "partner_singles"})) {
            if (cal.contains("g2")) {
                c.calibration.g2 = rd.required(cal, "g2", "calibration", 0.0, 1e6);
            }
            if (cal.contains("eta_signal")) {
                c.calibration.eta_signal = rd.required(cal, "eta_signal", "calibration", 0.0, 1.0, true);
            }
            if (cal.contains("coincidences")) {
                c.calibration.coincidences = rd.required(cal, "coincidences", "calibration", 0.0, 1e300);
            }
            if (cal.contains("partner_singles")) {
                c.calibration.partner_singles = rd.required(cal, "partner_singles", "calibration", 0.0, 1e300, true);
            }
        }
    }

    if (doc.contains("output")) {
        const json &o = doc.at("output");
        if (rd.object(o, "output", {"dir"})) {
            c.output_dir = rd.string(o, "dir", "output");
        }
    }
    return c;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::invalid_argument(join_errors(errors)), errors_(std::move(errors)) {}

std::vector<std::string> validate_config(const json &doc, const std::string &base_dir) {
    Reader rd;
    parse_all(rd, doc, base_dir);
    return rd.errors;
}

ExperimentConfig parse_config(const json &doc, const std::string &base_dir) {
    Reader rd;
    ExperimentConfig c = parse_all(rd, doc, base_dir);
    if (!rd.errors.empty()) {
        throw ConfigError(rd.errors);
    }
    return c;
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError({path + ": " + e.what()});
    }
}

ExperimentConfig load_config(const std::string &path) {
    json doc = read_json_file(path);
    auto dir = std::filesystem::path(path).parent_path();
    return parse_config(doc, dir.empty() ? "." : dir.string());
}

}  // namespace hinterf
