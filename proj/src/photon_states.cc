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

#include "hinterf/photon_states.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace hinterf {

InternalState::InternalState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) {
        throw std::invalid_argument("InternalState: empty amplitude vector");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
        throw std::invalid_argument("InternalState: amplitudes must have unit norm");
    }
}

InternalState InternalState::normalized(CVector amplitudes) {
    double norm = amplitudes.norm();
    if (!(norm > 0.0)) {
        throw std::invalid_argument("InternalState: cannot normalize a zero vector");
    }
    return InternalState(amplitudes / norm);
}

Complex InternalState::overlap(const InternalState &other) const {
    if (other.dim() != dim()) {
        throw std::invalid_argument("InternalState::overlap: dimension mismatch");
    }
    return amplitudes_.dot(other.amplitudes_);
}

PhotonMixture::PhotonMixture(std::vector<Term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) {
        throw std::invalid_argument("PhotonMixture: no terms");
    }
    double total = 0.0;
    const std::size_t dim = terms_.front().state.dim();
    for (const Term &t : terms_) {
        if (!(t.probability >= 0.0 && t.probability <= 1.0)) {
            throw std::invalid_argument("PhotonMixture: probability outside [0, 1]");
        }
        if (t.state.dim() != dim) {
            throw std::invalid_argument("PhotonMixture: terms have different internal dimensions");
        }
        total += t.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("PhotonMixture: probabilities must sum to 1");
    }
    if (terms_.size() > dim) {
        throw std::invalid_argument("PhotonMixture: more terms than internal dimensions");
    }
}

PhotonMixture PhotonMixture::pure(InternalState state) { return PhotonMixture({{1.0, std::move(state)}}); }

CMatrix PhotonMixture::density_matrix() const {
    const auto dim = static_cast<Eigen::Index>(internal_dim());
    CMatrix rho = CMatrix::Zero(dim, dim);
    for (const Term &t : terms_) {
        rho += t.probability * t.state.amplitudes() * t.state.amplitudes().adjoint();
    }
    return rho;
}

double PhotonMixture::purity() const {
    CMatrix rho = density_matrix();
    return (rho * rho).trace().real();
}

DistinguishabilityMatrix::DistinguishabilityMatrix(CMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw std::invalid_argument("DistinguishabilityMatrix: must be square and non-empty");
    }
    const Eigen::Index n = entries_.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(entries_(j, j) - 1.0) > 1e-12) {
            throw std::invalid_argument("DistinguishabilityMatrix: diagonal must be 1");
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            if (std::abs(entries_(j, k) - std::conj(entries_(k, j))) > 1e-12) {
                throw std::invalid_argument("DistinguishabilityMatrix: not hermitian");
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("DistinguishabilityMatrix: not positive semidefinite");
    }
}

DistinguishabilityMatrix DistinguishabilityMatrix::indistinguishable(std::size_t n) {
    auto size = static_cast<Eigen::Index>(n);
    return DistinguishabilityMatrix(CMatrix::Ones(size, size));
}

DistinguishabilityMatrix DistinguishabilityMatrix::distinguishable(std::size_t n) {
    auto size = static_cast<Eigen::Index>(n);
    return DistinguishabilityMatrix(CMatrix::Identity(size, size));
}

DistinguishabilityMatrix s_matrix(std::span<const InternalState> states, const AssignmentList &d) {
    const std::size_t n = d.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (d[j] >= states.size()) {
            throw std::invalid_argument("s_matrix: no internal state for an occupied input mode");
        }
    }
    CMatrix s(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            s(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = states[d[j]].overlap(states[d[k]]);
        }
    }
    return DistinguishabilityMatrix(std::move(s));
}

double purity_to_p(double purity) {
    if (!(purity >= 0.5 && purity <= 1.0)) {
        throw std::invalid_argument("purity_to_p: purity must lie in [0.5, 1]");
    }
    return 0.5 * (1.0 + std::sqrt(2.0 * purity - 1.0));
}

namespace {

void check_overlap(double overlap) {
    if (!(overlap >= 0.0 && overlap <= 1.0)) {
        throw std::invalid_argument("angle_family: overlaps must lie in [0, 1]");
    }
}

PhotonMixture two_level(double p, double cos_a, double sin_a) {
    CVector principal(2);
    principal << cos_a, sin_a;
    CVector orthogonal(2);
    orthogonal << sin_a, -cos_a;
    if (p == 1.0) {
        return PhotonMixture::pure(InternalState(principal));
    }
    return PhotonMixture({{p, InternalState(principal)}, {1.0 - p, InternalState(orthogonal)}});
}

}  // namespace

std::vector<PhotonMixture> angle_family(double purity, std::span<const double> overlaps) {
    double p = purity_to_p(purity);
    std::vector<PhotonMixture> out;
    out.reserve(overlaps.size() + 1);
    // Photon 1 is (1, 0) with (0, 1) as its orthogonal partner.
    out.push_back(two_level(p, 1.0, 0.0));
    for (double overlap : overlaps) {
        check_overlap(overlap);
        double c = std::sqrt(overlap);
        double s = std::sqrt(1.0 - overlap);
        out.push_back(two_level(p, c, s));
    }
    return out;
}

std::array<PhotonMixture, 3> two_angle_family(double purity, double overlap_12, double overlap_13) {
    std::array<double, 2> overlaps{overlap_12, overlap_13};
    auto family = angle_family(purity, overlaps);
    return {family[0], family[1], family[2]};
}

double pairwise_visibility(const PhotonMixture &a, const PhotonMixture &b) {
    if (a.internal_dim() != b.internal_dim()) {
        throw std::invalid_argument("pairwise_visibility: internal dimension mismatch");
    }
    double v = 0.0;
    for (const auto &ta : a.terms()) {
        for (const auto &tb : b.terms()) {
            v += ta.probability * tb.probability * std::norm(ta.state.overlap(tb.state));
        }
    }
    return v;
}

double overlap_from_visibility(double visibility, double purity) {
    // V = c^2 (p^2 + (1-p)^2) + (1 - c^2) 2 p (1-p) = c^2 (2P - 1) + (1 - P).
    purity_to_p(purity);
    double denom = 2.0 * purity - 1.0;
    if (!(denom > 0.0)) {
        throw std::invalid_argument("overlap_from_visibility: purity 0.5 leaves the overlap undetermined");
    }
    double c2 = (visibility - (1.0 - purity)) / denom;
    if (!(c2 >= -1e-12 && c2 <= 1.0 + 1e-12)) {
        throw std::invalid_argument("overlap_from_visibility: visibility not reachable at this purity");
    }
    return std::clamp(c2, 0.0, 1.0);
}

void SpectralDensity::validate() const {
    if (omega.size() != intensity.size() || omega.size() < 2) {
        throw std::invalid_argument("SpectralDensity: axis and intensity sizes differ or too few points");
    }
    double step = omega[1] - omega[0];
    if (!(step > 0.0)) {
        throw std::invalid_argument("SpectralDensity: axis must be strictly increasing");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
        if (k > 0 && std::abs((omega[k] - omega[k - 1]) - step) > 1e-6 * step) {
            throw std::invalid_argument("SpectralDensity: axis must be uniformly spaced");
        }
        if (intensity[k] < 0.0) {
            throw std::invalid_argument("SpectralDensity: negative intensity");
        }
        total += intensity[k];
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("SpectralDensity: intensity must be normalized to unit sum");
    }
}

double SpectralDensity::centroid() const {
    double c = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
        c += omega[k] * intensity[k];
    }
    return c;
}

SpectralDensity gaussian_spectrum(double center_omega, double sigma_omega, std::size_t points, double span_sigmas) {
    if (!(sigma_omega > 0.0) || points < 2 || !(span_sigmas > 0.0)) {
        throw std::invalid_argument("gaussian_spectrum: need sigma > 0, points >= 2, span > 0");
    }
    SpectralDensity out;
    out.omega.resize(points);
    out.intensity.resize(points);
    double half = span_sigmas * sigma_omega;
    double step = 2.0 * half / static_cast<double>(points - 1);
    double total = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
        double detuning = -half + step * static_cast<double>(k);
        out.omega[k] = center_omega + detuning;
        out.intensity[k] = std::exp(-detuning * detuning / (2.0 * sigma_omega * sigma_omega));
        total += out.intensity[k];
    }
    for (double &v : out.intensity) {
        v /= total;
    }
    return out;
}

Complex delay_overlap(const SpectralDensity &spectrum, double tau) {
    spectrum.validate();
    if (!std::isfinite(tau)) {
        throw std::invalid_argument("delay_overlap: delay must be finite");
    }
    double wc = spectrum.centroid();
    Complex total{0.0, 0.0};
    for (std::size_t k = 0; k < spectrum.omega.size(); ++k) {
        total += spectrum.intensity[k] * std::polar(1.0, (spectrum.omega[k] - wc) * tau);
    }
    return total;
}

}  // namespace hinterf
