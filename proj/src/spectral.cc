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

#include "hinterf/spectral.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

#include "hinterf/parallel.h"

namespace hinterf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FWHM -> standard deviation of a Gaussian.
const double kFwhmToSigma = 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::ln2));

void validate_axis(const std::vector<double> &axis, const char *name) {
    if (axis.size() < 2) {
        throw std::invalid_argument(std::string("FrequencyGrid: ") + name + " axis needs >= 2 points");
    }
    double step = axis[1] - axis[0];
    if (!(step > 0.0)) {
        throw std::invalid_argument(std::string("FrequencyGrid: ") + name + " axis must be increasing");
    }
    for (std::size_t k = 1; k < axis.size(); ++k) {
        if (std::abs((axis[k] - axis[k - 1]) - step) > 1e-6 * step) {
            throw std::invalid_argument(std::string("FrequencyGrid: ") + name + " axis must be uniform");
        }
    }
}

}  // namespace

double wavelength_to_omega(double wavelength) {
    if (!(wavelength > 0.0)) {
        throw std::invalid_argument("wavelength must be positive");
    }
    return kTwoPi * kSpeedOfLight / wavelength;
}

double omega_to_wavelength(double omega) {
    if (!(omega > 0.0)) {
        throw std::invalid_argument("angular frequency must be positive");
    }
    return kTwoPi * kSpeedOfLight / omega;
}

double wavelength_width_to_omega(double center, double width) {
    if (!(width > 0.0)) {
        throw std::invalid_argument("bandwidth must be positive");
    }
    return kTwoPi * kSpeedOfLight * width / (center * center);
}

FrequencyGrid FrequencyGrid::centered(
    double signal_center, double idler_center, double half_span, std::size_t points) {
    if (points < 2 || !(half_span > 0.0)) {
        throw std::invalid_argument("FrequencyGrid: need >= 2 points and a positive span");
    }
    FrequencyGrid g;
    g.signal.resize(points);
    g.idler.resize(points);
    double step = 2.0 * half_span / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) {
        double offset = -half_span + step * static_cast<double>(k);
        g.signal[k] = signal_center + offset;
        g.idler[k] = idler_center + offset;
    }
    return g;
}

void FrequencyGrid::validate() const {
    validate_axis(signal, "signal");
    validate_axis(idler, "idler");
}

SellmeierModel SellmeierModel::fused_silica() {
    SellmeierModel m;
    m.b = {0.6961663, 0.4079426, 0.8974794};
    m.c_um2 = {0.0684043 * 0.0684043, 0.1162414 * 0.1162414, 9.896161 * 9.896161};
    return m;
}

double SellmeierModel::index(double wavelength) const {
    if (!(wavelength >= min_wavelength && wavelength <= max_wavelength)) {
        throw std::out_of_range("SellmeierModel: wavelength outside the model's validity range");
    }
    double l2 = (wavelength * 1e6) * (wavelength * 1e6);
    double n2 = 1.0;
    for (std::size_t k = 0; k < 3; ++k) {
        n2 += b[k] * l2 / (l2 - c_um2[k]);
    }
    if (!(n2 > 0.0)) {
        throw std::out_of_range("SellmeierModel: non-physical index");
    }
    return std::sqrt(n2);
}

DispersionModel::DispersionModel(SellmeierModel sellmeier, double birefringence)
    : sellmeier_(sellmeier), birefringence_(birefringence) {
    if (!std::isfinite(birefringence)) {
        throw std::invalid_argument("DispersionModel: birefringence must be finite");
    }
}

double DispersionModel::pair_wavenumber(double omega) const {
    return sellmeier_.index(omega_to_wavelength(omega)) * omega / kSpeedOfLight;
}

double DispersionModel::pump_wavenumber(double omega) const {
    double n = sellmeier_.index(omega_to_wavelength(omega)) + birefringence_;
    return n * omega / kSpeedOfLight + pump_offset_;
}

double DispersionModel::phase_mismatch(double omega_s, double omega_i) const {
    double pump = 0.5 * (omega_s + omega_i);
    return 2.0 * pump_wavenumber(pump) - pair_wavenumber(omega_s) - pair_wavenumber(omega_i);
}

double DispersionModel::calibrate(double omega_s, double omega_i) {
    double raw = phase_mismatch(omega_s, omega_i);
    pump_offset_ -= 0.5 * raw;
    return raw;
}

double PumpSpec::center_omega() const { return wavelength_to_omega(center_wavelength); }

double PumpSpec::amplitude_sigma() const {
    // |alpha|^2 has intensity sigma s_I; alpha itself is wider by sqrt(2).
    double fwhm = wavelength_width_to_omega(center_wavelength, bandwidth);
    return std::sqrt(2.0) * fwhm * kFwhmToSigma;
}

namespace {

double pump_amplitude(double omega, double center, double sigma) {
    double x = (omega - center) / sigma;
    return std::exp(-0.5 * x * x);
}

}  // namespace

std::vector<Complex> pump_envelope(const PumpSpec &pump, std::span<const double> axis) {
    if (!(pump.bandwidth > 0.0)) {
        throw std::invalid_argument("pump_envelope: bandwidth must be positive");
    }
    double center = pump.center_omega();
    double sigma = pump.amplitude_sigma();
    std::vector<Complex> out(axis.size());
    double norm = 0.0;
    for (std::size_t k = 0; k < axis.size(); ++k) {
        double a = pump_amplitude(axis[k], center, sigma);
        out[k] = a;
        norm += a * a;
    }
    if (!(norm > 0.0)) {
        throw std::invalid_argument("pump_envelope: axis misses the pump entirely");
    }
    double scale = 1.0 / std::sqrt(norm);
    for (auto &v : out) {
        v *= scale;
    }
    return out;
}

double JointSpectralAmplitude::norm_sq() const { return amplitude.squaredNorm(); }

namespace {

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// Trapezoid quadrature of alpha(w') alpha(sum - w') around its peak at sum / 2.
double pump_convolution(double sum, double center, double sigma, const JsaOptions &opt) {
    const std::size_t nodes = opt.convolution_points;
    double half = opt.convolution_span * sigma;
    double step = 2.0 * half / static_cast<double>(nodes - 1);
    double mid = 0.5 * sum;
    double total = 0.0;
    for (std::size_t q = 0; q < nodes; ++q) {
        double w = mid - half + step * static_cast<double>(q);
        double weight = (q == 0 || q + 1 == nodes) ? 0.5 : 1.0;
        total += weight * pump_amplitude(w, center, sigma) * pump_amplitude(sum - w, center, sigma);
    }
    return total * step;
}

}  // namespace

JointSpectralAmplitude build_jsa(
    const PumpSpec &pump, const DispersionModel &dispersion, const FrequencyGrid &grid, const JsaOptions &options) {
    grid.validate();
    if (!(pump.bandwidth > 0.0)) {
        throw std::invalid_argument("build_jsa: pump bandwidth must be positive");
    }
    if (!(options.length > 0.0)) {
        throw std::invalid_argument("build_jsa: waveguide length must be positive");
    }
    if (options.convolution_points < 3 || !(options.convolution_span > 0.0)) {
        throw std::invalid_argument("build_jsa: convolution quadrature needs >= 3 nodes and a positive span");
    }
    const double center = pump.center_omega();
    const double sigma = pump.amplitude_sigma();
    // The pump function of w_s + w_i has amplitude width sqrt(2) sigma; ask for
    // at least two samples per width along each axis.
    const double resolvable = std::sqrt(2.0) * sigma / 2.0;
    if (grid.signal_step() > resolvable || grid.idler_step() > resolvable) {
        throw std::invalid_argument("build_jsa: grid too coarse to resolve the pump envelope");
    }

    const std::size_t ns = grid.signal.size();
    const std::size_t ni = grid.idler.size();
    const bool shared_step = std::abs(grid.signal_step() - grid.idler_step()) <= 1e-9 * grid.signal_step();
    std::vector<double> table;
    if (shared_step) {
        // w_s[a] + w_i[b] depends only on a + b.
        table.resize(ns + ni - 1);
        for (std::size_t t = 0; t < table.size(); ++t) {
            std::size_t a = std::min(t, ns - 1);
            std::size_t b = t - a;
            table[t] = pump_convolution(grid.signal[a] + grid.idler[b], center, sigma, options);
        }
    }

    JointSpectralAmplitude out{grid, CMatrix(ns, ni)};
    const double half_length = 0.5 * options.length;
    for (std::size_t a = 0; a < ns; ++a) {
        for (std::size_t b = 0; b < ni; ++b) {
            double ws = grid.signal[a];
            double wi = grid.idler[b];
            double envelope = shared_step ? table[a + b] : pump_convolution(ws + wi, center, sigma, options);
            double x = dispersion.phase_mismatch(ws, wi) * half_length;
            out.amplitude(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                envelope * sinc(x) * std::polar(1.0, x);
        }
    }
    double norm = std::sqrt(out.norm_sq());
    if (!(norm > 0.0)) {
        throw std::invalid_argument("build_jsa: amplitude vanishes on the grid");
    }
    out.amplitude /= norm;
    return out;
}

void FilterWindow::validate() const {
    if (!(width > 0.0)) {
        throw std::invalid_argument("FilterWindow: width must be positive");
    }
    if (!(center > 0.0)) {
        throw std::invalid_argument("FilterWindow: center must be positive");
    }
    if (shape == FilterShape::kSuperGaussian && order < 1) {
        throw std::invalid_argument("FilterWindow: super-Gaussian order must be >= 1");
    }
}

double FilterWindow::intensity_transmission(double wavelength) const {
    double x = std::abs(2.0 * (wavelength - center) / width);
    if (shape == FilterShape::kRectangular) {
        return x <= 1.0 ? 1.0 : 0.0;
    }
    return std::exp2(-std::pow(x, order));
}

FilteredJsa apply_filters(
    const JointSpectralAmplitude &jsa, const std::optional<FilterWindow> &signal_filter,
    const std::optional<FilterWindow> &idler_filter) {
    auto window = [](const std::optional<FilterWindow> &f, const std::vector<double> &axis) {
        std::vector<double> amp(axis.size(), 1.0);
        if (!f) {
            return amp;
        }
        f->validate();
        for (std::size_t k = 0; k < axis.size(); ++k) {
            amp[k] = std::sqrt(f->intensity_transmission(omega_to_wavelength(axis[k])));
        }
        return amp;
    };
    std::vector<double> ws = window(signal_filter, jsa.grid.signal);
    std::vector<double> wi = window(idler_filter, jsa.grid.idler);
    if (std::all_of(ws.begin(), ws.end(), [](double v) { return v == 0.0; }) ||
        std::all_of(wi.begin(), wi.end(), [](double v) { return v == 0.0; })) {
        throw std::invalid_argument("apply_filters: filter window misses the grid");
    }
    FilteredJsa out{jsa, 1.0};
    double before = jsa.norm_sq();
    for (Eigen::Index a = 0; a < out.jsa.amplitude.rows(); ++a) {
        for (Eigen::Index b = 0; b < out.jsa.amplitude.cols(); ++b) {
            out.jsa.amplitude(a, b) *= ws[static_cast<std::size_t>(a)] * wi[static_cast<std::size_t>(b)];
        }
    }
    double after = out.jsa.norm_sq();
    if (!(after > 0.0)) {
        throw std::invalid_argument("apply_filters: no amplitude passes the filters");
    }
    out.transmission = after / before;
    out.jsa.amplitude /= std::sqrt(after);
    return out;
}

double schmidt_purity(const JointSpectralAmplitude &jsa) {
    if (jsa.amplitude.size() == 0 || !(jsa.norm_sq() > 0.0)) {
        throw std::invalid_argument("schmidt_purity: amplitude is identically zero");
    }
    Eigen::BDCSVD<CMatrix> svd(jsa.amplitude);
    const auto &s = svd.singularValues();
    double s2 = 0.0;
    double s4 = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        double v = s[k] * s[k];
        s2 += v;
        s4 += v * v;
    }
    return s4 / (s2 * s2);
}

double trace_purity(const JointSpectralAmplitude &jsa) {
    if (jsa.amplitude.size() == 0 || !(jsa.norm_sq() > 0.0)) {
        throw std::invalid_argument("trace_purity: amplitude is identically zero");
    }
    CMatrix rho = jsa.amplitude * jsa.amplitude.adjoint();
    double tr = rho.trace().real();
    return rho.squaredNorm() / (tr * tr);
}

std::vector<double> marginal_spectrum(const JointSpectralAmplitude &jsa, Arm arm) {
    Eigen::MatrixXd intensity = jsa.amplitude.cwiseAbs2();
    Eigen::VectorXd m = arm == Arm::kSignal ? Eigen::VectorXd(intensity.rowwise().sum())
                                            : Eigen::VectorXd(intensity.colwise().sum().transpose());
    double total = m.sum();
    if (!(total > 0.0)) {
        throw std::invalid_argument("marginal_spectrum: amplitude is identically zero");
    }
    std::vector<double> out(static_cast<std::size_t>(m.size()));
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        out[static_cast<std::size_t>(k)] = m[k] / total;
    }
    return out;
}

double spectral_overlap(std::span<const double> s1, std::span<const double> s2) {
    if (s1.size() != s2.size() || s1.empty()) {
        throw std::invalid_argument("spectral_overlap: spectra must share a non-empty grid");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < s1.size(); ++k) {
        if (s1[k] < 0.0 || s2[k] < 0.0) {
            throw std::invalid_argument("spectral_overlap: negative intensity");
        }
        total += std::sqrt(s1[k] * s2[k]);
    }
    return total;
}

double sampled_fwhm(std::span<const double> axis, std::span<const double> values) {
    if (axis.size() != values.size() || axis.size() < 3) {
        throw std::invalid_argument("sampled_fwhm: need matching axes with >= 3 samples");
    }
    std::size_t peak = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    double half = 0.5 * values[peak];
    std::size_t lo = peak;
    while (lo > 0 && values[lo - 1] >= half) {
        --lo;
    }
    std::size_t hi = peak;
    while (hi + 1 < values.size() && values[hi + 1] >= half) {
        ++hi;
    }
    if (lo == 0 || hi + 1 == values.size()) {
        return 0.0;
    }
    auto cross = [&](std::size_t inside, std::size_t outside) {
        double t = (values[inside] - half) / (values[inside] - values[outside]);
        return axis[inside] + t * (axis[outside] - axis[inside]);
    };
    return std::abs(cross(hi, hi + 1) - cross(lo, lo - 1));
}

std::vector<double> read_spectrum_csv(const std::string &path, std::span<const double> omega_axis) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("read_spectrum_csv: cannot open " + path);
    }
    std::vector<std::pair<double, double>> rows;  // (omega, counts)
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double wl_nm = 0.0;
        double counts = 0.0;
        if (!(fields >> wl_nm >> counts)) {
            if (line_no == 1) {
                continue;  // header row
            }
            throw std::invalid_argument("read_spectrum_csv: malformed row " + std::to_string(line_no));
        }
        if (!(wl_nm > 0.0) || counts < 0.0) {
            throw std::invalid_argument("read_spectrum_csv: non-physical row " + std::to_string(line_no));
        }
        rows.emplace_back(wavelength_to_omega(wl_nm * 1e-9), counts);
    }
    if (rows.size() < 2) {
        throw std::invalid_argument("read_spectrum_csv: need at least two rows");
    }
    std::sort(rows.begin(), rows.end());
    std::vector<double> out(omega_axis.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < omega_axis.size(); ++k) {
        double w = omega_axis[k];
        if (w < rows.front().first || w > rows.back().first) {
            continue;
        }
        auto it = std::lower_bound(
            rows.begin(), rows.end(), w, [](const std::pair<double, double> &r, double v) { return r.first < v; });
        if (it == rows.begin()) {
            out[k] = it->second;
        } else {
            auto prev = it - 1;
            double t = (w - prev->first) / (it->first - prev->first);
            out[k] = prev->second + t * (it->second - prev->second);
        }
        total += out[k];
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("read_spectrum_csv: spectrum does not overlap the grid");
    }
    for (double &v : out) {
        v /= total;
    }
    return out;
}

double idler_center_omega(const PumpSpec &pump, double signal_center_wavelength) {
    return 2.0 * pump.center_omega() - wavelength_to_omega(signal_center_wavelength);
}

FrequencyGrid make_grid(const PumpSpec &pump, const GridSpec &spec) {
    if (!(spec.span_fwhm > 0.0)) {
        throw std::invalid_argument("make_grid: span must be positive");
    }
    double fwhm = wavelength_width_to_omega(pump.center_wavelength, pump.bandwidth);
    double ws = wavelength_to_omega(spec.signal_center_wavelength);
    return FrequencyGrid::centered(ws, idler_center_omega(pump, spec.signal_center_wavelength),
                                   spec.span_fwhm * fwhm, spec.points);
}

DispersionModel calibrated_dispersion(
    const SellmeierModel &sellmeier, double birefringence, const PumpSpec &pump, const GridSpec &spec) {
    DispersionModel model(sellmeier, birefringence);
    model.calibrate(wavelength_to_omega(spec.signal_center_wavelength),
                    idler_center_omega(pump, spec.signal_center_wavelength));
    return model;
}

std::vector<ScanPoint> factorability_scan(
    std::span<const double> bandwidths, const PumpSpec &reference, const DispersionModel &dispersion,
    const GridSpec &grid, const JsaOptions &options, std::size_t threads) {
    if (bandwidths.empty()) {
        throw std::invalid_argument("factorability_scan: no bandwidths given");
    }
    std::vector<ScanPoint> out(bandwidths.size());
    parallel_for(bandwidths.size(), threads, [&](std::size_t k) {
        PumpSpec pump = reference;
        pump.bandwidth = bandwidths[k];
        PumpSpec span_pump = reference;
        span_pump.bandwidth = std::max(bandwidths[k], reference.bandwidth);
        FrequencyGrid g = make_grid(span_pump, grid);
        out[k] = ScanPoint{bandwidths[k], schmidt_purity(build_jsa(pump, dispersion, g, options))};
    });
    return out;
}

}  // namespace hinterf
