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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace hinterf {
namespace {

constexpr double kPi = std::numbers::pi;

struct ReferenceJsa {
    PumpSpec pump;
    GridSpec grid;
    DispersionModel dispersion;
    JointSpectralAmplitude jsa;
};

ReferenceJsa reference_jsa(std::size_t points = 512, double length = 0.023) {
    PumpSpec pump;
    GridSpec grid;
    grid.points = points;
    DispersionModel dispersion = calibrated_dispersion(SellmeierModel::fused_silica(), 1.25e-4, pump, grid);
    JsaOptions options;
    options.length = length;
    JointSpectralAmplitude jsa = build_jsa(pump, dispersion, make_grid(pump, grid), options);
    return {pump, grid, dispersion, jsa};
}

const ReferenceJsa &shared_reference_jsa() {
    static const ReferenceJsa instance = reference_jsa();
    return instance;
}

FilterWindow window(double center_nm, double width_nm) {
    return FilterWindow{center_nm * 1e-9, width_nm * 1e-9, FilterShape::kRectangular, 10};
}

JointSpectralAmplitude from_matrix(const CMatrix &m) {
    FrequencyGrid grid = FrequencyGrid::centered(2.8e15, 2.3e15, 1e13, static_cast<std::size_t>(m.rows()));
    return JointSpectralAmplitude{grid, m / m.norm()};
}

std::vector<double> gaussian(std::span<const double> axis, double center, double sigma) {
    std::vector<double> out(axis.size());
    double total = 0.0;
    for (std::size_t k = 0; k < axis.size(); ++k) {
        out[k] = std::exp(-(axis[k] - center) * (axis[k] - center) / (2.0 * sigma * sigma));
        total += out[k];
    }
    for (double &v : out) {
        v /= total;
    }
    return out;
}

TEST(Sellmeier, FusedSilica) {
    SellmeierModel fs = SellmeierModel::fused_silica();
    EXPECT_NEAR(fs.index(1.0e-6), 1.4504, 1e-4);
    EXPECT_GT(fs.index(670e-9), fs.index(817e-9));
    EXPECT_THROW(fs.index(5e-6), std::out_of_range);
}

TEST(PumpEnvelope, PeakNormAndWidth) {
    PumpSpec pump;
    const double w0 = pump.center_omega();
    const double fwhm = wavelength_width_to_omega(pump.center_wavelength, pump.bandwidth);
    std::vector<double> axis(2001);
    for (std::size_t k = 0; k < axis.size(); ++k) {
        axis[k] = w0 - 3.0 * fwhm + 6.0 * fwhm * static_cast<double>(k) / 2000.0;
    }
    auto alpha = pump_envelope(pump, axis);
    double norm = 0.0;
    std::size_t peak = 0;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        norm += std::norm(alpha[k]);
        if (std::abs(alpha[k]) > std::abs(alpha[peak])) {
            peak = k;
        }
    }
    EXPECT_NEAR(norm, 1.0, 1e-12);
    EXPECT_NEAR(2.0 * kPi * kSpeedOfLight / axis[peak], 736e-9, 0.01e-9);
    // Intensity FWHM measured on the wavelength axis.
    std::vector<double> wl;
    std::vector<double> intensity;
    for (std::size_t k = alpha.size(); k-- > 0;) {
        wl.push_back(2.0 * kPi * kSpeedOfLight / axis[k]);
        intensity.push_back(std::norm(alpha[k]));
    }
    EXPECT_NEAR(sampled_fwhm(wl, intensity), 4.5e-9, 0.02e-9);
    PumpSpec bad;
    bad.bandwidth = 0.0;
    EXPECT_THROW(pump_envelope(bad, axis), std::invalid_argument);
}

TEST(PhaseMismatch, Calibration) {
    const auto &p = shared_reference_jsa();
    const double ws = wavelength_to_omega(670e-9);
    const double wi = idler_center_omega(p.pump, 670e-9);
    EXPECT_NEAR(omega_to_wavelength(wi), 816.4e-9, 0.1e-9);
    EXPECT_LT(std::abs(p.dispersion.phase_mismatch(ws, wi) * 0.023 / 2.0), kPi / 8.0);
    EXPECT_LT(std::abs(p.dispersion.phase_mismatch(ws, wavelength_to_omega(817e-9)) * 0.023 / 2.0), kPi / 8.0);
    DispersionModel plain(SellmeierModel::fused_silica(), 0.0);
    const double w = wavelength_to_omega(736e-9);
    EXPECT_NEAR(plain.phase_mismatch(w, w), 0.0, 1e-9);
    EXPECT_THROW(plain.phase_mismatch(wavelength_to_omega(5e-6), w), std::out_of_range);
}

TEST(BuildJsa, NormalizedWithBothPurityRoutes) {
    const auto &p = shared_reference_jsa();
    EXPECT_NEAR(p.jsa.norm_sq(), 1.0, 1e-10);
    double svd = schmidt_purity(p.jsa);
    EXPECT_NEAR(svd, trace_purity(p.jsa), 1e-10);
    // Frozen regression value of the calibrated fused-silica model.
    EXPECT_NEAR(svd, 0.8186, 5e-4);
}

TEST(BuildJsa, PumpFunctionAloneIsCorrelated) {
    PumpSpec pump;
    GridSpec grid;
    grid.points = 128;
    DispersionModel dispersion = calibrated_dispersion(SellmeierModel::fused_silica(), 1.25e-4, pump, grid);
    JsaOptions flat;
    flat.length = 1e-9;
    auto jsa = build_jsa(pump, dispersion, make_grid(pump, grid), flat);
    EXPECT_LT(schmidt_purity(jsa), 0.5);
}

TEST(BuildJsa, GridRefinementConverges) {
    double coarse = schmidt_purity(shared_reference_jsa().jsa);
    double fine = schmidt_purity(reference_jsa(1024).jsa);
    EXPECT_LT(std::abs(fine - coarse), 0.005);
}

TEST(BuildJsa, RejectsUnderResolvedGrid) {
    PumpSpec pump;
    GridSpec grid;
    grid.points = 8;
    DispersionModel dispersion = calibrated_dispersion(SellmeierModel::fused_silica(), 1.25e-4, pump, grid);
    EXPECT_THROW(build_jsa(pump, dispersion, make_grid(pump, grid)), std::invalid_argument);
}

TEST(ApplyFilters, AllPassIsIdentity) {
    const auto &p = shared_reference_jsa();
    auto same = apply_filters(p.jsa, std::nullopt, std::nullopt);
    EXPECT_NEAR(same.transmission, 1.0, 1e-12);
    EXPECT_LT((same.jsa.amplitude - p.jsa.amplitude).cwiseAbs().maxCoeff(), 1e-14);
    auto wide = apply_filters(p.jsa, window(670, 500), window(816.4, 500));
    EXPECT_NEAR(wide.transmission, 1.0, 1e-12);
    EXPECT_THROW(apply_filters(p.jsa, window(1500, 10), std::nullopt), std::invalid_argument);
}

TEST(ApplyFilters, BandpassRaisesPurity) {
    const auto &p = shared_reference_jsa();
    double unfiltered = schmidt_purity(p.jsa);
    auto filtered = apply_filters(p.jsa, window(670, 10), window(816.4, 12));
    double purity = schmidt_purity(filtered.jsa);
    EXPECT_GT(purity, unfiltered);
    EXPECT_NEAR(purity, 0.97, 0.05);
    EXPECT_GT(filtered.transmission, 0.89);
    EXPECT_NEAR(purity, trace_purity(filtered.jsa), 1e-10);
}

TEST(FilterWindow, Shapes) {
    FilterWindow rect = window(800, 10);
    EXPECT_EQ(rect.intensity_transmission(800e-9), 1.0);
    EXPECT_EQ(rect.intensity_transmission(804.9e-9), 1.0);
    EXPECT_EQ(rect.intensity_transmission(805.1e-9), 0.0);
    FilterWindow sg{800e-9, 10e-9, FilterShape::kSuperGaussian, 10};
    EXPECT_NEAR(sg.intensity_transmission(805e-9), 0.5, 1e-12);
    EXPECT_NEAR(sg.intensity_transmission(800e-9), 1.0, 1e-12);
    EXPECT_THROW(window(800, -1).validate(), std::invalid_argument);
}

TEST(SchmidtPurity, ToyAmplitudes) {
    CVector a(6);
    CVector b(6);
    a << 0.1, 0.5, 1.0, 0.5, 0.1, 0.01;
    b << 0.2, 0.7, 1.0, 0.3, 0.05, 0.0;
    auto product = from_matrix(a * b.transpose());
    EXPECT_NEAR(schmidt_purity(product), 1.0, 1e-10);
    EXPECT_NEAR(trace_purity(product), 1.0, 1e-10);
    auto diag = from_matrix(CMatrix::Identity(2, 2));
    EXPECT_NEAR(schmidt_purity(diag), 0.5, 1e-12);
    EXPECT_NEAR(trace_purity(diag), 0.5, 1e-12);
    JointSpectralAmplitude zero{diag.grid, CMatrix::Zero(2, 2)};
    EXPECT_THROW(schmidt_purity(zero), std::invalid_argument);
}

TEST(SchmidtPurity, RoutesAgreeOnRandomAmplitudes) {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        int rows = 2 + trial % 7;
        CMatrix m(rows, rows);
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            m.data()[i] = Complex(n(rng), n(rng));
        }
        auto jsa = from_matrix(m);
        double p = schmidt_purity(jsa);
        EXPECT_GT(p, 0.0);
        EXPECT_LE(p, 1.0 + 1e-12);
        EXPECT_NEAR(p, trace_purity(jsa), 1e-12);
    }
}

TEST(Marginals, UnitSumAndPeaks) {
    const auto &p = shared_reference_jsa();
    for (Arm arm : {Arm::kSignal, Arm::kIdler}) {
        auto m = marginal_spectrum(p.jsa, arm);
        double total = 0.0;
        for (double v : m) {
            total += v;
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
    auto idler = marginal_spectrum(p.jsa, Arm::kIdler);
    std::size_t peak = static_cast<std::size_t>(std::max_element(idler.begin(), idler.end()) - idler.begin());
    EXPECT_NEAR(omega_to_wavelength(p.jsa.grid.idler[peak]), 817e-9, 2e-9);
    auto signal = marginal_spectrum(p.jsa, Arm::kSignal);
    peak = static_cast<std::size_t>(std::max_element(signal.begin(), signal.end()) - signal.begin());
    EXPECT_NEAR(omega_to_wavelength(p.jsa.grid.signal[peak]), 670e-9, 2e-9);
}

TEST(Marginals, SymmetricAmplitudeHasEqualWidths) {
    CVector g(41);
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        double x = (static_cast<double>(k) - 20.0) / 6.0;
        g[k] = std::exp(-x * x / 2.0);
    }
    CMatrix m = g * g.transpose();
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
            m(a, b) *= std::exp(-0.02 * static_cast<double>((a - b) * (a - b)));
        }
    }
    auto jsa = from_matrix(m);
    auto s = marginal_spectrum(jsa, Arm::kSignal);
    auto i = marginal_spectrum(jsa, Arm::kIdler);
    std::vector<double> index(s.size());
    for (std::size_t k = 0; k < index.size(); ++k) {
        index[k] = static_cast<double>(k);
    }
    EXPECT_NEAR(sampled_fwhm(index, s), sampled_fwhm(index, i), 1e-12);
}

TEST(SpectralOverlap, ClosedForms) {
    std::vector<double> axis(4001);
    for (std::size_t k = 0; k < axis.size(); ++k) {
        axis[k] = -20.0 + 40.0 * static_cast<double>(k) / 4000.0;
    }
    auto g0 = gaussian(axis, 0.0, 1.0);
    auto g1 = gaussian(axis, 1.0, 1.0);
    EXPECT_NEAR(spectral_overlap(g0, g0), 1.0, 1e-12);
    EXPECT_NEAR(spectral_overlap(g0, g1), std::exp(-1.0 / 8.0), 1e-9);
    EXPECT_NEAR(spectral_overlap(g0, g1), spectral_overlap(g1, g0), 1e-15);
    std::vector<double> left(axis.size(), 0.0);
    std::vector<double> right(axis.size(), 0.0);
    left[0] = 1.0;
    right[1] = 1.0;
    EXPECT_EQ(spectral_overlap(left, right), 0.0);
    EXPECT_THROW(spectral_overlap(g0, std::vector<double>(3, 0.1)), std::invalid_argument);
}

TEST(SpectralOverlap, BelowOneUnlessIdentical) {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(20);
        std::vector<double> b(20);
        double ta = 0.0;
        double tb = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            a[k] = u(rng);
            b[k] = u(rng);
            ta += a[k];
            tb += b[k];
        }
        for (std::size_t k = 0; k < a.size(); ++k) {
            a[k] /= ta;
            b[k] /= tb;
        }
        EXPECT_LT(spectral_overlap(a, b), 1.0);
        EXPECT_NEAR(spectral_overlap(a, b), spectral_overlap(b, a), 1e-15);
    }
}

TEST(FactorabilityScan, UnimodalNearTheWorkingPoint) {
    const auto &p = shared_reference_jsa();
    std::vector<double> bw;
    for (double nm : {0.4, 1.0, 2.0, 3.0, 3.5, 4.0, 4.5, 5.0, 6.0, 8.0, 40.0}) {
        bw.push_back(nm * 1e-9);
    }
    auto scan = factorability_scan(bw, p.pump, p.dispersion, p.grid);
    ASSERT_EQ(scan.size(), bw.size());
    std::size_t best = 0;
    for (std::size_t k = 0; k < scan.size(); ++k) {
        if (scan[k].purity > scan[best].purity) {
            best = k;
        }
    }
    for (std::size_t k = 1; k <= best; ++k) {
        EXPECT_GT(scan[k].purity, scan[k - 1].purity) << k;
    }
    for (std::size_t k = best + 1; k < scan.size(); ++k) {
        EXPECT_LT(scan[k].purity, scan[k - 1].purity) << k;
    }
    double optimum = scan[best].bandwidth;
    EXPECT_GT(optimum, 4.5e-9 / 2.0);
    EXPECT_LT(optimum, 4.5e-9 * 2.0);
    EXPECT_LT(scan.front().purity, scan[best].purity);
    EXPECT_LT(scan.back().purity, scan[best].purity);
    EXPECT_THROW(factorability_scan(std::vector<double>{}, p.pump, p.dispersion, p.grid), std::invalid_argument);
}

TEST(FactorabilityScan, OptimumScalesInverselyWithLength) {
    const auto &p = shared_reference_jsa();
    std::vector<double> bw;
    for (double nm = 1.0; nm <= 8.01; nm += 0.25) {
        bw.push_back(nm * 1e-9);
    }
    auto argmax = [](const std::vector<ScanPoint> &scan) {
        return std::max_element(scan.begin(), scan.end(),
                                [](const ScanPoint &a, const ScanPoint &b) { return a.purity < b.purity; })
            ->bandwidth;
    };
    JsaOptions longer;
    longer.length = 0.046;
    double base = argmax(factorability_scan(bw, p.pump, p.dispersion, p.grid));
    double doubled = argmax(factorability_scan(bw, p.pump, p.dispersion, p.grid, longer));
    EXPECT_NEAR(doubled / base, 0.5, 0.1);
}

TEST(ReadSpectrumCsv, ResamplesAndNormalizes) {
    const auto &p = shared_reference_jsa();
    auto path = std::filesystem::temp_directory_path() / "hinterf_spectrum_test.csv";
    {
        std::ofstream out(path);
        out << "wavelength_nm,counts\n";
        for (double nm = 800.0; nm <= 833.0; nm += 0.1) {
            out << nm << "," << 1000.0 * std::exp(-(nm - 816.4) * (nm - 816.4) / 8.0) << "\n";
        }
    }
    auto s = read_spectrum_csv(path.string(), p.jsa.grid.idler);
    double total = 0.0;
    for (double v : s) {
        total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_GT(spectral_overlap(s, marginal_spectrum(p.jsa, Arm::kIdler)), 0.5);
    {
        std::ofstream out(path);
        out << "wavelength_nm,counts\n810,1\nnot a row\n";
    }
    EXPECT_THROW(read_spectrum_csv(path.string(), p.jsa.grid.idler), std::invalid_argument);
    std::filesystem::remove(path);
    EXPECT_THROW(read_spectrum_csv(path.string(), p.jsa.grid.idler), std::invalid_argument);
}

}  // namespace
}  // namespace hinterf
