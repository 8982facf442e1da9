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

#ifndef HINTERF_ORACLE_H
#define HINTERF_ORACLE_H

// Brute-force Fock-space reference. Slow by design; shares no probability
// code with the permanent engine so the two can check each other.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hinterf/network.h"
#include "hinterf/photon_states.h"

namespace hinterf::oracle {

inline constexpr std::size_t kMaxPhotons = 5;
inline constexpr std::size_t kMaxSpatialModes = 10;
inline constexpr std::size_t kMaxInternalDim = 6;
inline constexpr std::size_t kMaxBasisSize = 300000;

struct LabeledPhoton {
    std::size_t mode;
    CVector state;  ///< internal amplitudes, unit norm
};

/// State over labeled modes (spatial x internal), mode index = spatial * R + internal.
class LabeledFockState {
   public:
    LabeledFockState(std::size_t spatial_modes, std::size_t internal_dim, std::vector<std::vector<int>> basis,
                     CVector amplitudes);

    std::size_t spatial_modes() const { return spatial_modes_; }
    std::size_t internal_dim() const { return internal_dim_; }
    const std::vector<std::vector<int>> &basis() const { return basis_; }
    const CVector &amplitudes() const { return amplitudes_; }

    double norm() const { return amplitudes_.norm(); }

    /// Photon count per spatial mode of basis state `index`.
    std::vector<int> spatial_counts(std::size_t index) const;

    /// Probability of spatial occupation s, summed over internal labels.
    double spatial_probability(const OccupationPattern &s) const;

   private:
    std::size_t spatial_modes_;
    std::size_t internal_dim_;
    std::vector<std::vector<int>> basis_;
    CVector amplitudes_;
};

/// prod_j (sum_i phi_j[i] a^dagger_{x_j, i}) |0>, evolved through U (x) I by
/// expanding every creation operator, then normalized.
LabeledFockState evolve(const UnitaryNetwork &u, std::span<const LabeledPhoton> photons);

/// Mixture average of spatial_probability(s) with photons from input modes
/// drawing independently from mixtures[mode]. `coherence` (input mode x
/// input mode Gram matrix) is realized as an extra tensor factor on the
/// internal state of each photon.
double oracle_event_probability(
    const UnitaryNetwork &u, const OccupationPattern &r, const OccupationPattern &s,
    std::span<const PhotonMixture> mixtures, const CMatrix &coherence = CMatrix());

/// U followed by a beam splitter of transmissivity efficiencies[d] between
/// each output d and a fresh vacuum mode m + d.
UnitaryNetwork loss_network(const UnitaryNetwork &u, std::span<const double> efficiencies);

/// Probability of a detector outcome computed on the loss network, summing
/// over everything that lands in the loss modes. Binary outcomes mean
/// "at least one photon" per clicked detector.
double oracle_lossy_outcome_probability(
    const UnitaryNetwork &u, const OccupationPattern &r, std::span<const PhotonMixture> mixtures,
    std::span<const double> efficiencies, std::span<const int> outcome, bool binary);

struct ClickStatistics {
    std::size_t detectors = 0;
    /// Indexed by click bitmask (bit d = detector d clicked).
    std::vector<double> mean;
    std::vector<double> standard_error;
};

/// Coherent pulses of mean photon number intensities[j] at input j with
/// uniformly random independent phases; incoherent[j] pulses add intensity
/// without interfering. Per phase sample, detector d clicks with probability
/// 1 - exp(-eta_d mu_d); click-pattern probabilities are averaged.
ClickStatistics coherent_click_simulation(
    const UnitaryNetwork &u, std::span<const double> intensities, std::span<const char> incoherent,
    std::span<const double> efficiencies, std::size_t n_phase_samples, std::uint64_t seed);

/// Haar-random unitary from the QR decomposition of a complex Gaussian matrix.
CMatrix random_unitary(std::size_t m, std::mt19937_64 &rng);

struct SuiteReport {
    std::size_t cases = 0;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool passed() const { return max_deviation < tolerance; }
};

/// Random (U, r, s, mixtures) with m <= 5, n <= 4 and two-dimensional
/// internal states, half of them with a random coherence matrix: permanent
/// engine against Fock evolution.
SuiteReport engine_equivalence_suite(std::size_t cases, std::uint64_t seed, std::size_t threads = 0);

/// Random networks, efficiencies and detector outcomes: binomial-thinning
/// detection response against the explicit loss network.
SuiteReport loss_equivalence_suite(std::size_t cases, std::uint64_t seed, std::size_t threads = 0);

}  // namespace hinterf::oracle

#endif
