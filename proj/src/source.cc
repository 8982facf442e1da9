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

#include "hinterf/source.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hinterf {

namespace {

void check_unit(double v, const char *what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
    }
}

double binomial_pmf(int n, int k, double p) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    double coeff = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
    return std::round(coeff) * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

}  // namespace

void HeraldedSourceModel::validate() const {
    if (!(lambda_sq >= 0.0 && lambda_sq < 1.0)) {
        throw std::invalid_argument("lambda_sq must lie in [0, 1)");
    }
    check_unit(eta_signal, "eta_signal");
    check_unit(eta_idler, "eta_idler");
    if (!(purity >= 0.5 && purity <= 1.0)) {
        throw std::invalid_argument("purity must lie in [0.5, 1]");
    }
}

double NumberDistribution::total() const {
    double t = 0.0;
    for (const auto &[k, w] : weights) {
        t += w;
    }
    return t;
}

double NumberDistribution::at(int k) const {
    auto it = weights.find(k);
    return it == weights.end() ? 0.0 : it->second;
}

NumberDistribution NumberDistribution::normalized() const {
    double t = total();
    if (!(t > 0.0)) {
        throw std::invalid_argument("NumberDistribution: zero total weight");
    }
    NumberDistribution out;
    for (const auto &[k, w] : weights) {
        out.weights[k] = w / t;
    }
    return out;
}

NumberDistribution apply_loss(const NumberDistribution &dist, double eta) {
    check_unit(eta, "apply_loss: eta");
    NumberDistribution out;
    for (const auto &[n, w] : dist.weights) {
        if (n < 0 || w < 0.0) {
            throw std::invalid_argument("apply_loss: negative photon number or weight");
        }
        for (int k = 0; k <= n; ++k) {
            double p = binomial_pmf(n, k, eta);
            if (p > 0.0) {
                out.weights[k] += w * p;
            }
        }
    }
    return out;
}

double herald_probability(double lambda_sq, double eta_signal) {
    if (!(lambda_sq >= 0.0 && lambda_sq < 1.0)) {
        throw std::invalid_argument("herald_probability: lambda_sq must lie in [0, 1)");
    }
    check_unit(eta_signal, "herald_probability: eta_signal");
    return lambda_sq * eta_signal / (1.0 - lambda_sq * (1.0 - eta_signal));
}

double heralded_weight(const HeraldedSourceModel &src, int n, int k) {
    src.validate();
    if (!(src.eta_signal > 0.0)) {
        throw std::invalid_argument("heralded_weight: eta_signal = 0 never heralds");
    }
    if (n < 1 || k < 0 || k > n) {
        return 0.0;
    }
    const double l2 = src.lambda_sq;
    // lambda^{2n} / herald_probability, rearranged so lambda^2 -> 0 stays finite.
    double pairs = std::pow(l2, n - 1) * (1.0 - l2 * (1.0 - src.eta_signal)) / src.eta_signal;
    double click = 1.0 - std::pow(1.0 - src.eta_signal, n);
    return (1.0 - l2) * pairs * click * binomial_pmf(n, k, src.eta_idler);
}

NumberDistribution heralded_mixture(const HeraldedSourceModel &src, int n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("heralded_mixture: n_max must be >= 1");
    }
    NumberDistribution out;
    for (int n = 1; n <= n_max; ++n) {
        for (int k = 0; k <= n; ++k) {
            out.weights[k] += heralded_weight(src, n, k);
        }
    }
    return out.normalized();
}

double lambda_sq_from_g2(double g2, double eta_signal) {
    if (!(g2 >= 0.0)) {
        throw std::invalid_argument("lambda_sq_from_g2: g2 must be non-negative");
    }
    if (!(eta_signal > 0.0 && eta_signal <= 1.0)) {
        throw std::invalid_argument("lambda_sq_from_g2: eta_signal must lie in (0, 1]");
    }
    double miss = 1.0 - eta_signal;
    return g2 * eta_signal / (2.0 * (1.0 - miss * miss));
}

double klyshko_efficiency(double coincidences, double partner_singles) {
    if (!(partner_singles > 0.0)) {
        throw std::invalid_argument("klyshko_efficiency: partner singles must be positive");
    }
    if (!(coincidences >= 0.0) || coincidences > partner_singles) {
        throw std::invalid_argument("klyshko_efficiency: coincidences must lie in [0, singles]");
    }
    return coincidences / partner_singles;
}

namespace {

struct EnumerationState {
    std::span<const HeraldedSourceModel> sources;
    Truncation truncation;
    std::vector<int> k;
    std::vector<InputTerm> out;
};

// Sum over admissible pair numbers n_j >= max(k_j, 1) sharing a pair budget.
double pair_sum(std::span<const HeraldedSourceModel> sources, std::span<const int> k, std::size_t j, int budget) {
    if (j == k.size()) {
        return 1.0;
    }
    int lowest = std::max(k[j], 1);
    double total = 0.0;
    // Keep enough pairs in the budget for every later source.
    int reserve = 0;
    for (std::size_t t = j + 1; t < k.size(); ++t) {
        reserve += std::max(k[t], 1);
    }
    for (int n = lowest; n + reserve <= budget; ++n) {
        double w = heralded_weight(sources[j], n, k[j]);
        if (w == 0.0) {
            continue;
        }
        total += w * pair_sum(sources, k, j + 1, budget - n);
    }
    return total;
}

void enumerate_patterns(EnumerationState &st, std::size_t j, int photons, int order) {
    const std::size_t count = st.k.size();
    if (j == count) {
        if (photons < static_cast<int>(count)) {
            return;
        }
        InputTerm term{OccupationPattern(st.k), pair_sum(st.sources, st.k, 0, st.truncation.max_total_pairs), order};
        st.out.push_back(std::move(term));
        return;
    }
    for (int kj = 0; photons + kj <= st.truncation.max_total_photons; ++kj) {
        int next_order = order + std::max(kj, 1);
        // Every later source still needs at least one pair.
        if (next_order + static_cast<int>(count - j - 1) > st.truncation.max_total_pairs) {
            break;
        }
        st.k[j] = kj;
        enumerate_patterns(st, j + 1, photons + kj, next_order);
    }
    st.k[j] = 0;
}

}  // namespace

std::vector<InputTerm> enumerate_inputs(std::span<const HeraldedSourceModel> sources, const Truncation &truncation) {
    if (sources.empty()) {
        throw std::invalid_argument("enumerate_inputs: need at least one source");
    }
    const int n = static_cast<int>(sources.size());
    if (truncation.max_total_pairs < n || truncation.max_total_photons < n) {
        throw std::invalid_argument("enumerate_inputs: truncation bounds must be >= number of sources");
    }
    for (const auto &s : sources) {
        s.validate();
    }
    EnumerationState st{sources, truncation, std::vector<int>(sources.size(), 0), {}};
    enumerate_patterns(st, 0, 0, 0);
    std::sort(st.out.begin(), st.out.end(), [](const InputTerm &a, const InputTerm &b) {
        if (a.weight != b.weight) {
            return a.weight > b.weight;
        }
        return a.occupation > b.occupation;
    });
    return st.out;
}

double input_term_weight(
    std::span<const HeraldedSourceModel> sources, const OccupationPattern &occupation, const Truncation &truncation) {
    if (occupation.modes() != sources.size()) {
        throw std::invalid_argument("input_term_weight: occupation length differs from the number of sources");
    }
    return pair_sum(sources, occupation.counts, 0, truncation.max_total_pairs);
}

std::vector<InputTerm> enumerate_inputs(
    std::size_t n_sources, const HeraldedSourceModel &source, const Truncation &truncation) {
    std::vector<HeraldedSourceModel> sources(n_sources, source);
    return enumerate_inputs(sources, truncation);
}

}  // namespace hinterf
