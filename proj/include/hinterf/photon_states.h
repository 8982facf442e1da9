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

#ifndef HINTERF_PHOTON_STATES_H
#define HINTERF_PHOTON_STATES_H

#include <array>
#include <span>
#include <vector>

#include "hinterf/network.h"

namespace hinterf {

/// Unit-norm vector in the R-dimensional internal (spectral/temporal/
/// polarization) space of a photon.
class InternalState {
   public:
    /// Throws if the norm differs from 1 by more than 1e-12.
    explicit InternalState(CVector amplitudes);
    /// Normalizes `amplitudes`; throws on a zero vector.
    static InternalState normalized(CVector amplitudes);

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const CVector &amplitudes() const { return amplitudes_; }

    /// <this|other>.
    Complex overlap(const InternalState &other) const;

   private:
    CVector amplitudes_;
};

/// rho = sum_k p_k |Phi_k><Phi_k|.
class PhotonMixture {
   public:
    struct Term {
        double probability;
        InternalState state;
    };

    /// Throws unless probabilities are in [0, 1], sum to 1 within 1e-12, share
    /// one internal dimension R, and number at most R.
    explicit PhotonMixture(std::vector<Term> terms);
    static PhotonMixture pure(InternalState state);

    const std::vector<Term> &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    std::size_t internal_dim() const { return terms_.front().state.dim(); }

    /// tr(rho^2).
    double purity() const;
    CMatrix density_matrix() const;

   private:
    std::vector<Term> terms_;
};

/// Gram matrix of photons' internal states, S[j][k] = <Phi_j|Phi_k>.
/// Checked to be hermitian, unit-diagonal and positive semidefinite.
class DistinguishabilityMatrix {
   public:
    explicit DistinguishabilityMatrix(CMatrix entries);

    static DistinguishabilityMatrix indistinguishable(std::size_t n);
    static DistinguishabilityMatrix distinguishable(std::size_t n);

    std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
    const CMatrix &matrix() const { return entries_; }

   private:
    CMatrix entries_;
};

/// S[j][k] = <Phi_{d_j}|Phi_{d_k}> with `states` indexed by input mode.
/// Throws if an occupied mode has no state (index past the end).
DistinguishabilityMatrix s_matrix(std::span<const InternalState> states, const AssignmentList &d);

/// Larger root of P = 2p^2 - 2p + 1; P must lie in [0.5, 1].
double purity_to_p(double purity);

/// Overlap-angle family: photon 1 defines the basis, every other photon j is
/// p |psi_j><psi_j| + (1 - p) |psi_j^perp><psi_j^perp| with
/// psi_j = (cos a_j, sin a_j), psi_j^perp = (sin a_j, -cos a_j),
/// cos^2 a_j = overlaps[j - 1], and p = purity_to_p(purity) shared by all.
std::vector<PhotonMixture> angle_family(double purity, std::span<const double> overlaps);

/// Three-photon case of angle_family.
std::array<PhotonMixture, 3> two_angle_family(double purity, double overlap_12, double overlap_13);

/// tr(rho_1 rho_2).
double pairwise_visibility(const PhotonMixture &a, const PhotonMixture &b);

/// Value of cos^2(angle) that makes the HOM visibility of two angle-family
/// photons of equal purity equal `visibility`. Inverse of the two functions above.
double overlap_from_visibility(double visibility, double purity);

/// Normalized spectral intensity on a uniform angular-frequency axis.
struct SpectralDensity {
    std::vector<double> omega;      ///< rad/s, strictly increasing, uniform
    std::vector<double> intensity;  ///< non-negative, sums to 1

    /// Throws unless sizes agree, the axis is uniform, and intensity sums to 1 within 1e-9.
    void validate() const;
    double centroid() const;
};

/// Gaussian intensity exp(-(w - w0)^2 / (2 sigma^2)) sampled on +-`span_sigmas`.
SpectralDensity gaussian_spectrum(double center_omega, double sigma_omega, std::size_t points, double span_sigmas = 8.0);

/// sum_w |phi(w)|^2 exp(i (w - w_c) tau), w_c the centroid: the overlap
/// <Phi(0)|Phi(tau)> of two photons that differ only by a delay tau (seconds).
Complex delay_overlap(const SpectralDensity &spectrum, double tau);

}  // namespace hinterf

#endif
