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

#ifndef HINTERF_SOURCE_H
#define HINTERF_SOURCE_H

#include <map>
#include <span>
#include <vector>

#include "hinterf/network.h"

namespace hinterf {

/// One heralded pair source: two-mode squeezed vacuum sum_n lambda^n |n, n>
/// with a lossy binary herald on the signal arm and loss on the idler arm.
struct HeraldedSourceModel {
    double lambda_sq = 0.0;   ///< in [0, 1)
    double eta_signal = 1.0;  ///< herald-arm efficiency
    double eta_idler = 1.0;   ///< heralded-arm efficiency
    double purity = 1.0;      ///< spectral purity of the heralded photon

    void validate() const;
};

/// Photon-number distribution, k -> weight.
struct NumberDistribution {
    std::map<int, double> weights;

    double total() const;
    /// Weight at k, zero when absent.
    double at(int k) const;
    /// Copy with weights divided by total(); throws on a zero total.
    NumberDistribution normalized() const;
};

/// Binomial thinning: each photon survives with probability eta.
NumberDistribution apply_loss(const NumberDistribution &dist, double eta);

/// lambda^2 eta_s / (1 - lambda^2 (1 - eta_s)): probability of a herald click.
double herald_probability(double lambda_sq, double eta_signal);

/// Joint probability, conditioned on a herald click, that the source emitted
/// n pairs and k heralded photons survive:
///   (1 - lambda^2) lambda^{2n} [1 - (1 - eta_s)^n] C(n,k) eta_i^k (1 - eta_i)^{n-k} / herald_probability.
/// Summed over all n >= 1 and k it is exactly 1. Throws if eta_signal = 0.
double heralded_weight(const HeraldedSourceModel &src, int n, int k);

/// Heralded idler-mode number distribution keeping pair numbers n <= n_max,
/// renormalized to unit trace.
NumberDistribution heralded_mixture(const HeraldedSourceModel &src, int n_max);

/// lambda^2 = g2 eta_s / (2 (1 - (1 - eta_s)^2)).
double lambda_sq_from_g2(double g2, double eta_signal);

/// Coincidences divided by the partner arm's singles.
double klyshko_efficiency(double coincidences, double partner_singles);

/// One multi-source input configuration kept by the truncation.
struct InputTerm {
    OccupationPattern occupation;  ///< photons per source
    double weight = 0.0;           ///< heralded probability summed over admissible pair numbers
    int order = 0;                 ///< lowest total pair number sum_j max(k_j, 1) producing it
};

struct Truncation {
    int max_total_pairs = 5;
    int max_total_photons = 4;
};

/// Input patterns (k_1..k_S) with sum k >= S, sum k <= max_total_photons and
/// sum max(k_j, 1) <= max_total_pairs. Each weight sums prod_j heralded_weight
/// over pair numbers n_j >= max(k_j, 1) with sum n_j <= max_total_pairs.
/// Sorted by decreasing weight, ties by decreasing occupation.
std::vector<InputTerm> enumerate_inputs(std::span<const HeraldedSourceModel> sources, const Truncation &truncation);

/// Weight of one occupation under the enumerate_inputs rule (zero when the
/// occupation needs more pairs than the truncation allows).
double input_term_weight(
    std::span<const HeraldedSourceModel> sources, const OccupationPattern &occupation, const Truncation &truncation);

/// Same with n_sources copies of one source model.
std::vector<InputTerm> enumerate_inputs(
    std::size_t n_sources, const HeraldedSourceModel &source, const Truncation &truncation);

}  // namespace hinterf

#endif
