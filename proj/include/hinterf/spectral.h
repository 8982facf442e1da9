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

#ifndef HINTERF_SPECTRAL_H
#define HINTERF_SPECTRAL_H

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hinterf/network.h"

namespace hinterf {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Angular frequency (rad/s) of a vacuum wavelength (m), and back.
double wavelength_to_omega(double wavelength);
double omega_to_wavelength(double omega);

/// Converts a wavelength full width at `center` to an angular-frequency width.
double wavelength_width_to_omega(double center, double width);

/// Uniformly spaced signal and idler angular-frequency axes.
struct FrequencyGrid {
    std::vector<double> signal;
    std::vector<double> idler;

    /// Axes of `points` samples spanning center +- half_span.
    static FrequencyGrid centered(double signal_center, double idler_center, double half_span, std::size_t points);

    /// Throws unless both axes have >= 2 points and are increasing and uniform.
    void validate() const;
    double signal_step() const { return signal[1] - signal[0]; }
    double idler_step() const { return idler[1] - idler[0]; }
};

/// Three-term Sellmeier law n^2 = 1 + sum_k b_k l^2 / (l^2 - c_k), l in microns.
struct SellmeierModel {
    std::array<double, 3> b{};
    std::array<double, 3> c_um2{};
    double min_wavelength = 0.21e-6;  ///< m
    double max_wavelength = 3.71e-6;  ///< m

    /// Malitson's fused-silica coefficients.
    static SellmeierModel fused_silica();
    /// Throws outside [min_wavelength, max_wavelength].
    double index(double wavelength) const;
};

/// Propagation constants of the waveguide: photon-pair polarization follows
/// the Sellmeier law, the pump polarization adds a constant birefringence, and
/// the pump wavenumber carries a fitted offset (see calibrate()).
class DispersionModel {
   public:
    explicit DispersionModel(SellmeierModel sellmeier, double birefringence = 1.25e-4);

    double pair_wavenumber(double omega) const;
    double pump_wavenumber(double omega) const;

    /// Delta k = 2 k_p((w_s + w_i) / 2) - k_s - k_i, 1/m.
    double phase_mismatch(double omega_s, double omega_i) const;

    /// Fits the pump offset so that phase_mismatch(omega_s, omega_i) = 0.
    /// Returns the raw mismatch before the fit.
    double calibrate(double omega_s, double omega_i);

    double pump_offset() const { return pump_offset_; }
    double birefringence() const { return birefringence_; }
    const SellmeierModel &sellmeier() const { return sellmeier_; }

   private:
    SellmeierModel sellmeier_;
    double birefringence_;
    double pump_offset_ = 0.0;
};

struct PumpSpec {
    double center_wavelength = 736e-9;  ///< m
    double bandwidth = 4.5e-9;          ///< intensity FWHM in wavelength, m

    double center_omega() const;
    /// Standard deviation of the Gaussian amplitude |alpha(w)| in angular frequency.
    double amplitude_sigma() const;
};

/// Transform-limited Gaussian amplitude alpha(w) sampled on `axis`,
/// normalized so that sum |alpha|^2 = 1 over the samples.
std::vector<Complex> pump_envelope(const PumpSpec &pump, std::span<const double> axis);

/// Complex f(w_s, w_i) on a FrequencyGrid, rows = signal, columns = idler.
struct JointSpectralAmplitude {
    FrequencyGrid grid;
    CMatrix amplitude;

    /// sum |f|^2 over the grid (cell areas omitted).
    double norm_sq() const;
};

struct JsaOptions {
    double length = 0.023;                ///< waveguide length, m
    std::size_t convolution_points = 257;  ///< quadrature nodes over w'
    double convolution_span = 8.0;         ///< +- amplitude sigmas covered by the quadrature
};

/// f = [int dw' alpha(w') alpha(w_s + w_i - w')] sinc(dk L / 2) exp(i dk L / 2),
/// normalized. The pump convolution is a direct quadrature over w' tabulated
/// on the sum-frequency axis. Throws if the grid under-resolves the pump.
JointSpectralAmplitude build_jsa(
    const PumpSpec &pump, const DispersionModel &dispersion, const FrequencyGrid &grid, const JsaOptions &options = {});

enum class FilterShape {
    kRectangular,
    kSuperGaussian,
};

/// Bandpass window in wavelength. Intensity transmission is 1 within
/// |l - center| <= width / 2 (rectangular) or 2^{-|2 (l - center) / width|^order}.
struct FilterWindow {
    double center = 0.0;  ///< m
    double width = 0.0;   ///< full width, m
    FilterShape shape = FilterShape::kRectangular;
    int order = 10;

    void validate() const;
    double intensity_transmission(double wavelength) const;
};

struct FilteredJsa {
    JointSpectralAmplitude jsa;
    double transmission = 1.0;
};

/// Multiplies f by the amplitude windows (missing window = all-pass),
/// renormalizes, and reports the retained probability.
FilteredJsa apply_filters(
    const JointSpectralAmplitude &jsa, const std::optional<FilterWindow> &signal_filter,
    const std::optional<FilterWindow> &idler_filter);

/// sum s^4 / (sum s^2)^2 over the singular values of f.
double schmidt_purity(const JointSpectralAmplitude &jsa);

/// tr((f f^dagger)^2) / tr(f f^dagger)^2 without a decomposition.
double trace_purity(const JointSpectralAmplitude &jsa);

enum class Arm {
    kSignal,
    kIdler,
};

/// Row or column sums of |f|^2 normalized to unit sum.
std::vector<double> marginal_spectrum(const JointSpectralAmplitude &jsa, Arm arm);

/// Bhattacharyya overlap sum sqrt(s1 s2) of unit-sum intensities on a common grid.
double spectral_overlap(std::span<const double> s1, std::span<const double> s2);

/// Full width at half maximum of a sampled curve, by linear interpolation
/// between samples. Returns 0 when the curve never drops below half.
double sampled_fwhm(std::span<const double> axis, std::span<const double> values);

/// Measured spectrum (wavelength_nm, counts) resampled onto `omega_axis` and
/// normalized to unit sum. Throws on malformed rows.
std::vector<double> read_spectrum_csv(const std::string &path, std::span<const double> omega_axis);

/// Grid recipe relative to the pump: `points` per axis spanning
/// +- span_fwhm pump bandwidths around the signal and idler centers.
struct GridSpec {
    double signal_center_wavelength = 670e-9;
    std::size_t points = 512;
    double span_fwhm = 6.0;
};

/// Idler center fixed by energy conservation, 2 w_p - w_s.
double idler_center_omega(const PumpSpec &pump, double signal_center_wavelength);

FrequencyGrid make_grid(const PumpSpec &pump, const GridSpec &spec);

/// Dispersion model phase matched at the signal and idler grid centers.
DispersionModel calibrated_dispersion(
    const SellmeierModel &sellmeier, double birefringence, const PumpSpec &pump, const GridSpec &spec);

struct ScanPoint {
    double bandwidth;  ///< m
    double purity;
};

/// Unfiltered Schmidt purity per pump bandwidth. Each grid spans +- span_fwhm
/// times the larger of the scanned and the reference bandwidth.
std::vector<ScanPoint> factorability_scan(
    std::span<const double> bandwidths, const PumpSpec &reference, const DispersionModel &dispersion,
    const GridSpec &grid, const JsaOptions &options = {}, std::size_t threads = 0);

}  // namespace hinterf

#endif
